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

// pbacc: run coded-computing experiments from JSON configs.
//
//   pbacc run     --config cfg.json [--out dir] [--jobs n] [--seed u64] [--plot]
//   pbacc leakage --config cfg.json ...
//   pbacc matmul  --config cfg.json ...
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "pbacc/errors.hpp"
#include "pbacc/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::string out = ".";
  std::size_t jobs = 1;
  std::optional<std::uint64_t> seed;
  bool plot = false;
};

void AddCommonFlags(CLI::App* cmd, Options& options) {
  cmd->add_option("--config", options.config, "Experiment config (JSON)")->required();
  cmd->add_option("--out", options.out, "Output directory")->capture_default_str();
  cmd->add_option("--jobs", options.jobs, "Concurrent runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", options.seed, "Override the config seed");
  cmd->add_flag("--plot", options.plot, "Also write SVG charts");
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    pbacc::Fail(pbacc::ErrorCode::kConfig, "cannot write '" + path.string() + "'");
  }
  out << content;
  if (!out) pbacc::Fail(pbacc::ErrorCode::kConfig, "failed writing '" + path.string() + "'");
}

void WriteOutputs(const Options& options, const std::string& csv_name, const std::string& csv,
                  const std::vector<std::pair<std::string, std::string>>& plots) {
  const std::filesystem::path dir(options.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) pbacc::Fail(pbacc::ErrorCode::kConfig, "cannot create '" + options.out + "'");
  WriteFile(dir / csv_name, csv);
  std::cerr << "wrote " << (dir / csv_name).string() << "\n";
  if (!options.plot) return;
  for (const auto& [name, svg] : plots) {
    WriteFile(dir / name, svg);
    std::cerr << "wrote " << (dir / name).string() << "\n";
  }
}

pbacc::ExperimentConfig Load(const Options& options) {
  pbacc::ExperimentConfig config = pbacc::LoadConfig(options.config);
  if (options.seed) config.seed = *options.seed;
  return config;
}

void CmdRun(const Options& options) {
  const pbacc::ExperimentConfig config = Load(options);
  const auto rows = pbacc::RunActivationSweep(config, options.jobs);
  std::cout << pbacc::ActivationSummary(rows);
  WriteOutputs(options, config.name + "-run.csv", pbacc::ActivationCsv(rows),
               options.plot ? pbacc::ActivationPlots(rows)
                            : std::vector<std::pair<std::string, std::string>>{});
}

void CmdLeakage(const Options& options) {
  const pbacc::ExperimentConfig config = Load(options);
  const auto rows = pbacc::RunLeakageSweep(config, options.jobs);
  std::cout << pbacc::LeakageSummary(config, rows);
  WriteOutputs(options, config.name + "-leakage.csv", pbacc::LeakageCsv(rows),
               options.plot ? pbacc::LeakagePlots(rows)
                            : std::vector<std::pair<std::string, std::string>>{});
}

void CmdMatmul(const Options& options) {
  const pbacc::ExperimentConfig config = Load(options);
  const auto rows = pbacc::RunMatmulSweep(config, options.jobs);
  std::cout << pbacc::MatmulSummary(rows);
  WriteOutputs(options, config.name + "-matmul.csv", pbacc::MatmulCsv(rows),
               options.plot ? pbacc::MatmulPlots(rows)
                            : std::vector<std::pair<std::string, std::string>>{});
}

int ExitCodeFor(pbacc::ErrorCode code) {
  switch (code) {
    case pbacc::ErrorCode::kNumericalFailure:
    case pbacc::ErrorCode::kDegenerateWeight:
    case pbacc::ErrorCode::kInsufficientResults:
    case pbacc::ErrorCode::kIncompleteAssembly:
      return kExitNumerical;
    default:
      return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private Berrut coded computing experiments"};
  app.require_subcommand(1);
  Options options;
  CLI::App* run = app.add_subcommand("run", "Activation and aggregation precision sweep");
  CLI::App* leakage = app.add_subcommand("leakage", "Leakage bound curves");
  CLI::App* matmul = app.add_subcommand("matmul", "Approximate matrix multiplication sweep");
  for (CLI::App* cmd : {run, leakage, matmul}) AddCommonFlags(cmd, options);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) CmdRun(options);
    if (leakage->parsed()) CmdLeakage(options);
    if (matmul->parsed()) CmdMatmul(options);
  } catch (const pbacc::Error& e) {
    std::cerr << "pbacc: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "pbacc: numerical-failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
