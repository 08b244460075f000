// Copyright 2026 The PBACC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PBACC_EXPERIMENT_HPP_
#define PBACC_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pbacc {

inline constexpr int kConfigSchemaVersion = 1;

struct LeakageSettings {
  /// Empty means {sigma_n}.
  std::vector<double> sigma_n_list;
  std::size_t c_min = 1;
  /// 0 means c.
  std::size_t c_max = 0;
  std::string policy = "prefix";
  std::size_t samples = 100;
  std::string floor_mode = "relative";
  double floor = 1e-10;
  double epsilon = 1.0;

  bool operator==(const LeakageSettings&) const = default;
};

struct MatmulSettings {
  std::vector<std::string> variants{"direct", "blocked"};
  double density = 1.0;
  std::size_t masks_per_row = 1;
  std::string block_policy = "shared";

  bool operator==(const MatmulSettings&) const = default;
};

/// Defaults describe the reference operating point.
struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  std::string name = "experiment";
  std::size_t N = 200;
  std::size_t K = 1000;
  std::size_t L = 1;
  double s = 100.0;
  double sigma_n = 1e4;
  std::size_t T = 1000;
  std::size_t c = 50;
  double sigma_dp = 30.0;
  std::size_t r = 50;
  std::size_t block_count = 1;
  double mask_shift = 10.0;
  std::vector<std::size_t> stragglers{0, 50, 100};
  std::vector<std::string> functions{"relu"};
  /// Empty means every scheme of the subcommand.
  std::vector<std::string> schemes;
  std::uint64_t seed = 1;
  std::size_t repetitions = 5;
  /// auto, symmetric or positive.
  std::string input_range = "auto";
  LeakageSettings leakage;
  MatmulSettings matmul;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses a JSON config. Missing fields keep their defaults; unknown fields,
/// wrong types and a missing or unsupported schema_version throw config
/// errors naming the field (or line and column for syntax errors).
ExperimentConfig ParseConfig(std::string_view text);
ExperimentConfig LoadConfig(const std::string& path);
/// Every field, fixed key order, two-space indent, trailing newline.
std::string SerializeConfig(const ExperimentConfig& config);

enum class Command { kRun, kLeakage, kMatmul };

/// Semantic checks for one subcommand; throws config errors.
void ValidateConfig(const ExperimentConfig& config, Command command);

struct ActivationRow {
  std::string experiment;
  std::string scheme;
  std::string function;
  std::size_t N = 0;
  std::size_t K = 0;
  std::size_t L = 0;
  std::size_t T = 0;
  std::size_t r = 0;
  double s = 0.0;
  double sigma_n = 0.0;
  double sigma_dp = 0.0;
  double mask_shift = 0.0;
  std::string input_range;
  std::size_t stragglers = 0;
  std::size_t n_used = 0;
  std::uint64_t seed = 0;
  std::size_t repetition = 0;
  double rme = 0.0;
  std::size_t excluded = 0;
};

struct LeakageRow {
  std::string experiment;
  std::string policy;
  std::size_t N = 0;
  std::size_t K = 0;
  std::size_t T = 0;
  double s = 0.0;
  double mask_shift = 0.0;
  std::string floor_mode;
  double floor = 0.0;
  std::size_t c = 0;
  double sigma_n = 0.0;
  double I_L = 0.0;
  double iota_L = 0.0;
};

struct MatmulRow {
  std::string experiment;
  std::string variant;
  std::string scheme;
  std::size_t N = 0;
  std::size_t K = 0;
  std::size_t d = 0;
  std::size_t r = 0;
  std::size_t v = 0;
  std::size_t block_count = 0;
  std::string block_policy;
  double density = 0.0;
  double s = 0.0;
  double sigma_n = 0.0;
  double mask_shift = 0.0;
  std::size_t stragglers = 0;
  std::size_t n_used = 0;
  std::uint64_t seed = 0;
  std::size_t repetition = 0;
  double rme = 0.0;
  std::size_t excluded = 0;
};

/// Repetition k uses seed + k. Rows come out ordered by function, scheme,
/// straggler level and repetition regardless of `jobs`.
std::vector<ActivationRow> RunActivationSweep(const ExperimentConfig& config, std::size_t jobs);
std::vector<LeakageRow> RunLeakageSweep(const ExperimentConfig& config, std::size_t jobs);
/// Rows ordered by variant, scheme, straggler level and repetition.
std::vector<MatmulRow> RunMatmulSweep(const ExperimentConfig& config, std::size_t jobs);

std::string ActivationCsv(const std::vector<ActivationRow>& rows);
std::string LeakageCsv(const std::vector<LeakageRow>& rows);
std::string MatmulCsv(const std::vector<MatmulRow>& rows);

/// Median RME per group, as an aligned text table.
std::string ActivationSummary(const std::vector<ActivationRow>& rows);
std::string LeakageSummary(const ExperimentConfig& config, const std::vector<LeakageRow>& rows);
std::string MatmulSummary(const std::vector<MatmulRow>& rows);

/// (file name, SVG document) pairs named <experiment>-<function>.svg.
std::vector<std::pair<std::string, std::string>> ActivationPlots(
    const std::vector<ActivationRow>& rows);
std::vector<std::pair<std::string, std::string>> LeakagePlots(
    const std::vector<LeakageRow>& rows);
std::vector<std::pair<std::string, std::string>> MatmulPlots(const std::vector<MatmulRow>& rows);

/// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace pbacc

#endif  // PBACC_EXPERIMENT_HPP_
