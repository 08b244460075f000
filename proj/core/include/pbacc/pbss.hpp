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

#ifndef PBACC_PBSS_HPP_
#define PBACC_PBSS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "pbacc/berrut.hpp"
#include "pbacc/functions.hpp"
#include "pbacc/grid.hpp"
#include "pbacc/types.hpp"

namespace pbacc {

// Exact entries with magnitude below this are left out of the RME.
inline constexpr double kRmeZeroGuard = 1e-12;
// Generated inputs stay at least this fraction of s away from zero.
inline constexpr double kInputZeroMargin = 1e-6;

enum class Scheme { kBss, kPbss, kBssDp };

std::string_view SchemeName(Scheme scheme);
/// Accepts bss, pbss, bss_dp.
Scheme ParseScheme(std::string_view name);

struct AggregateSpec {
  Function function = Function::kIdentity;
  Combine combine = Combine::kSum;

  /// Pairs f with its default combine rule.
  static AggregateSpec For(Function f) { return {f, DefaultCombine(f)}; }
};

struct StragglerModel {
  enum class Policy { kNone, kRandom, kFixed };
  Policy policy = Policy::kNone;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  /// Straggling nodes for kFixed.
  std::vector<std::size_t> stragglers;

  static StragglerModel None() { return {}; }
  /// `count` stragglers from one seeded permutation; for a fixed seed the fast
  /// sets are nested as count grows.
  static StragglerModel Random(std::size_t count, std::uint64_t seed) {
    return {Policy::kRandom, count, seed, {}};
  }
  static StragglerModel Fixed(std::vector<std::size_t> nodes) {
    return {Policy::kFixed, nodes.size(), 0, std::move(nodes)};
  }

  /// Sorted fast set. Throws insufficient-results when it would be empty.
  std::vector<std::size_t> FastSet(std::size_t N) const;
};

struct RmeResult {
  double rme = 0.0;
  std::size_t excluded = 0;
};

/// Mean of |(approx - exact) / exact| over entries with |exact| >= kRmeZeroGuard.
/// Throws numerical-failure when every entry is excluded.
RmeResult Rme(const Matrix& approx, const Matrix& exact);

/// Uncoded aggregate: sum_i f(X_i) or the elementwise median over i.
Matrix ExactReference(const std::vector<Matrix>& inputs, const AggregateSpec& spec);

enum class InputRange { kSymmetric, kPositive };

/// N matrices K x L with entries U(-s, s) (or U(0, s)), redrawn while
/// |x| < kInputZeroMargin * s. Node i uses its own stream.
std::vector<Matrix> GenerateInputs(std::size_t N, std::size_t K, std::size_t L, double s,
                                   InputRange range, std::uint64_t seed);

struct RunReport {
  Matrix decoded;
  Matrix exact;
  double rme = 0.0;
  std::size_t excluded = 0;
  std::size_t n_used = 0;
  double condition = 1.0;
  bool ill_conditioned = false;
  double wall_time_s = 0.0;
};

/// Receives one JSON object per line: {"phase":1,"from":i,"to":j,"share":{..}},
/// {"phase":2,"from":j,"to":"master","share":{..}} and
/// {"phase":3,"used_nodes":[..]}.
using TraceSink = std::function<void(std::string_view line)>;

struct ProtocolOptions {
  std::size_t rows_per_point = 1;
  /// Seed for the DP noise streams.
  std::uint64_t seed = 0;
  double sigma_dp = 30.0;
  TraceSink trace;
};

/// Three-phase protocol for every straggler model, sharing phases 1 and 2.
/// kPbss needs grid.T() >= 1 and mask.T == grid.T() * r; node i draws its masks
/// from StreamSeed(mask.seed, kMask, {i}). kBss and kBssDp need grid.T() == 0.
std::vector<RunReport> RunProtocol(Scheme scheme, const std::vector<Matrix>& inputs,
                                   const InterpolationGrid& grid, const MaskSpec& mask,
                                   const AggregateSpec& spec,
                                   std::span<const StragglerModel> stragglers,
                                   const ProtocolOptions& options = {});

RunReport RunPbss(const std::vector<Matrix>& inputs, const InterpolationGrid& grid,
                  const MaskSpec& mask, const AggregateSpec& spec,
                  const StragglerModel& stragglers, const ProtocolOptions& options = {});

RunReport RunBss(const std::vector<Matrix>& inputs, const InterpolationGrid& grid,
                 const AggregateSpec& spec, const StragglerModel& stragglers,
                 const ProtocolOptions& options = {});

/// Adds N(0, sigma_dp^2) to every raw input before plain encoding.
RunReport RunBssDp(const std::vector<Matrix>& inputs, const InterpolationGrid& grid,
                   const AggregateSpec& spec, const StragglerModel& stragglers, double sigma_dp,
                   const ProtocolOptions& options = {});

}  // namespace pbacc

#endif  // PBACC_PBSS_HPP_
