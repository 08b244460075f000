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

#include "pbacc/pbss.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "pbacc/errors.hpp"
#include "pbacc/rng.hpp"

namespace pbacc {

namespace {

using Index = Eigen::Index;

void CheckInputs(const std::vector<Matrix>& inputs) {
  if (inputs.empty()) Fail(ErrorCode::kInvalidArgument, "no node inputs");
  const Index K = inputs[0].rows();
  const Index L = inputs[0].cols();
  if (K < 1 || L < 1) Fail(ErrorCode::kInvalidArgument, "node inputs must be non-empty");
  for (const Matrix& x : inputs) {
    if (x.rows() != K || x.cols() != L) {
      Fail(ErrorCode::kInvalidArgument, "node inputs must share one K x L shape");
    }
    if (!x.allFinite()) Fail(ErrorCode::kInvalidArgument, "node inputs must be finite");
  }
}

void EmitShare(const TraceSink& trace, int phase, std::size_t from, const std::string& to,
               std::size_t node, double z, const Matrix& payload) {
  nlohmann::json line;
  line["phase"] = phase;
  line["from"] = from;
  if (to.empty()) {
    line["to"] = node;
  } else {
    line["to"] = to;
  }
  line["share"] = nlohmann::json::parse(ShareToJson(Share{node, z, payload}));
  trace(line.dump());
}

}  // namespace

std::string_view SchemeName(Scheme scheme) {
  switch (scheme) {
    case Scheme::kBss:
      return "bss";
    case Scheme::kPbss:
      return "pbss";
    case Scheme::kBssDp:
      return "bss_dp";
  }
  return "bss";
}

Scheme ParseScheme(std::string_view name) {
  if (name == "bss") return Scheme::kBss;
  if (name == "pbss") return Scheme::kPbss;
  if (name == "bss_dp") return Scheme::kBssDp;
  Fail(ErrorCode::kInvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

std::vector<std::size_t> StragglerModel::FastSet(std::size_t N) const {
  std::vector<std::size_t> fast;
  switch (policy) {
    case Policy::kNone:
      fast.resize(N);
      std::iota(fast.begin(), fast.end(), std::size_t{0});
      break;
    case Policy::kRandom: {
      if (count >= N) Fail(ErrorCode::kInsufficientResults, "every node is a straggler");
      std::vector<std::size_t> perm(N);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      Rng rng = MakeRng(seed, Stream::kStragglers);
      std::shuffle(perm.begin(), perm.end(), rng);
      fast.assign(perm.begin(), perm.end() - static_cast<std::ptrdiff_t>(count));
      std::sort(fast.begin(), fast.end());
      break;
    }
    case Policy::kFixed: {
      std::vector<bool> slow(N, false);
      for (std::size_t s : stragglers) {
        if (s >= N) Fail(ErrorCode::kInvalidArgument, "straggler index outside the grid");
        slow[s] = true;
      }
      for (std::size_t j = 0; j < N; ++j) {
        if (!slow[j]) fast.push_back(j);
      }
      if (fast.empty()) Fail(ErrorCode::kInsufficientResults, "every node is a straggler");
      break;
    }
  }
  return fast;
}

RmeResult Rme(const Matrix& approx, const Matrix& exact) {
  if (approx.rows() != exact.rows() || approx.cols() != exact.cols()) {
    Fail(ErrorCode::kInvalidArgument, "RME operands differ in shape");
  }
  RmeResult out;
  double total = 0.0;
  std::size_t counted = 0;
  for (Index i = 0; i < exact.size(); ++i) {
    const double y = exact.data()[i];
    if (std::abs(y) < kRmeZeroGuard) {
      ++out.excluded;
      continue;
    }
    total += std::abs((approx.data()[i] - y) / y);
    ++counted;
  }
  if (counted == 0) Fail(ErrorCode::kNumericalFailure, "every reference entry is zero");
  out.rme = total / static_cast<double>(counted);
  return out;
}

Matrix ExactReference(const std::vector<Matrix>& inputs, const AggregateSpec& spec) {
  CheckInputs(inputs);
  if (spec.function == Function::kMatmul) {
    Fail(ErrorCode::kInvalidArgument, "matmul references come from the matrix pipeline");
  }
  const Index K = inputs[0].rows();
  const Index L = inputs[0].cols();
  if (spec.combine == Combine::kSum) {
    Matrix acc = Matrix::Zero(K, L);
    for (const Matrix& x : inputs) {
      Matrix fx = x;
      ApplyInPlace(spec.function, fx);
      acc += fx;
    }
    return acc;
  }
  Matrix out(K, L);
  std::vector<double> column(inputs.size());
  for (Index e = 0; e < K * L; ++e) {
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      column[i] = ApplyPointwise(spec.function, inputs[i].data()[e]);
    }
    out.data()[e] = MedianInPlace(column);
  }
  return out;
}

std::vector<Matrix> GenerateInputs(std::size_t N, std::size_t K, std::size_t L, double s,
                                   InputRange range, std::uint64_t seed) {
  if (N == 0 || K == 0 || L == 0) Fail(ErrorCode::kInvalidArgument, "N, K and L must be >= 1");
  if (!(s > 0.0)) Fail(ErrorCode::kInvalidArgument, "amplitude s must be > 0");
  std::vector<Matrix> inputs(N);
  const double lo = range == InputRange::kSymmetric ? -s : 0.0;
  const double margin = kInputZeroMargin * s;
  for (std::size_t i = 0; i < N; ++i) {
    Rng rng = MakeRng(seed, Stream::kInput, {i});
    std::uniform_real_distribution<double> dist(lo, s);
    Matrix x(static_cast<Index>(K), static_cast<Index>(L));
    for (Index e = 0; e < x.size(); ++e) {
      double value = dist(rng);
      while (std::abs(value) < margin) value = dist(rng);
      x.data()[e] = value;
    }
    inputs[i] = std::move(x);
  }
  return inputs;
}

std::vector<RunReport> RunProtocol(Scheme scheme, const std::vector<Matrix>& inputs,
                                   const InterpolationGrid& grid, const MaskSpec& mask,
                                   const AggregateSpec& spec,
                                   std::span<const StragglerModel> stragglers,
                                   const ProtocolOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  CheckInputs(inputs);
  if (spec.function == Function::kMatmul) {
    Fail(ErrorCode::kInvalidArgument, "matmul runs through the matrix pipeline");
  }
  const std::size_t r = options.rows_per_point;
  if (r == 0) Fail(ErrorCode::kInvalidArgument, "rows_per_point must be >= 1");
  const std::size_t N = grid.N();
  const std::size_t P = grid.K();
  const std::size_t S = grid.T();
  const auto K = static_cast<std::size_t>(inputs[0].rows());
  const Index L = inputs[0].cols();
  if (K != P * r) Fail(ErrorCode::kInvalidArgument, "input rows must equal grid.K() * r");
  if (inputs.size() != N) Fail(ErrorCode::kInvalidArgument, "one input per node is required");
  if (scheme == Scheme::kPbss) {
    if (S == 0) Fail(ErrorCode::kInvalidArgument, "the private scheme needs T >= 1");
    if (mask.T != S * r) Fail(ErrorCode::kInvalidArgument, "mask count must be grid.T() * r");
    if (mask.mask_shift != grid.mask_shift()) {
      Fail(ErrorCode::kInvalidArgument, "mask spec and grid disagree on the mask shift");
    }
  } else if (S != 0) {
    Fail(ErrorCode::kInvalidArgument, "non-private schemes need a grid with T = 0");
  }
  if (scheme == Scheme::kBssDp && !(options.sigma_dp > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "sigma_dp must be > 0");
  }

  const Index width = static_cast<Index>(r) * L;
  const Matrix weights = WeightMatrix(grid.zs(), grid.alphas());
  const bool median = spec.combine == Combine::kMedian;
  Matrix combined = Matrix::Zero(static_cast<Index>(N), width);
  std::vector<double> gathered;
  if (median) gathered.resize(N * static_cast<std::size_t>(width) * N);

  // Phase 1: node i encodes its own input; row j of `encoded` goes to node j.
  for (std::size_t i = 0; i < N; ++i) {
    Matrix x = inputs[i];
    if (scheme == Scheme::kBssDp) {
      Rng rng = MakeRng(options.seed, Stream::kDpNoise, {i});
      std::normal_distribution<double> noise(0.0, options.sigma_dp);
      for (Index e = 0; e < x.size(); ++e) x.data()[e] += noise(rng);
    }
    Matrix stacked;
    if (scheme == Scheme::kPbss) {
      MaskSpec node_mask = mask;
      node_mask.seed = StreamSeed(mask.seed, Stream::kMask, {i});
      const Matrix masks = SampleMasks(node_mask, static_cast<std::size_t>(L));
      stacked = StackCoefficients(x, &masks, P, S);
    } else {
      stacked = StackCoefficients(x, nullptr, P, 0);
    }
    Matrix encoded = weights * stacked;
    if (options.trace) {
      for (std::size_t j = 0; j < N; ++j) {
        EmitShare(options.trace, 1, i, "", j, grid.zs()[j],
                  Eigen::Map<const Matrix>(encoded.row(static_cast<Index>(j)).data(),
                                           static_cast<Index>(r), L));
      }
    }
    // Phase 2 input: f applied to every received share.
    ApplyInPlace(spec.function, encoded);
    if (median) {
      for (std::size_t j = 0; j < N; ++j) {
        for (Index e = 0; e < width; ++e) {
          gathered[(j * static_cast<std::size_t>(width) + static_cast<std::size_t>(e)) * N + i] =
              encoded(static_cast<Index>(j), e);
        }
      }
    } else {
      combined += encoded;
    }
  }
  if (median) {
    for (std::size_t j = 0; j < N; ++j) {
      for (Index e = 0; e < width; ++e) {
        const std::size_t base = (j * static_cast<std::size_t>(width) + static_cast<std::size_t>(e)) * N;
        combined(static_cast<Index>(j), e) =
            MedianInPlace(std::span<double>(gathered.data() + base, N));
      }
    }
  }
  if (options.trace) {
    for (std::size_t j = 0; j < N; ++j) {
      EmitShare(options.trace, 2, j, "master", j, grid.zs()[j],
                Eigen::Map<const Matrix>(combined.row(static_cast<Index>(j)).data(),
                                         static_cast<Index>(r), L));
    }
  }
  const Matrix exact = ExactReference(inputs, spec);
  const double shared_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  // Phase 3: decode from each fast set.
  std::vector<RunReport> reports;
  for (const StragglerModel& model : stragglers) {
    const auto decode_start = std::chrono::steady_clock::now();
    const std::vector<std::size_t> fast = model.FastSet(N);
    std::vector<double> zs;
    Matrix values(static_cast<Index>(fast.size()), width);
    for (std::size_t k = 0; k < fast.size(); ++k) {
      zs.push_back(grid.zs()[fast[k]]);
      values.row(static_cast<Index>(k)) = combined.row(static_cast<Index>(fast[k]));
    }
    if (options.trace) {
      nlohmann::json line;
      line["phase"] = 3;
      line["used_nodes"] = fast;
      options.trace(line.dump());
    }
    RunReport report;
    const Matrix decoded = BerrutInterpolate(zs, values, grid.data_alphas(), &report.condition);
    report.ill_conditioned = !(report.condition <= kIllConditionedThreshold);
    report.decoded = Eigen::Map<const Matrix>(decoded.data(), static_cast<Index>(K), L);
    if (!report.decoded.allFinite()) {
      Fail(ErrorCode::kNumericalFailure, "decoded result is not finite");
    }
    report.exact = exact;
    const RmeResult rme = Rme(report.decoded, exact);
    report.rme = rme.rme;
    report.excluded = rme.excluded;
    report.n_used = fast.size();
    report.wall_time_s =
        shared_time +
        std::chrono::duration<double>(std::chrono::steady_clock::now() - decode_start).count();
    reports.push_back(std::move(report));
  }
  return reports;
}

RunReport RunPbss(const std::vector<Matrix>& inputs, const InterpolationGrid& grid,
                  const MaskSpec& mask, const AggregateSpec& spec,
                  const StragglerModel& stragglers, const ProtocolOptions& options) {
  return RunProtocol(Scheme::kPbss, inputs, grid, mask, spec, {&stragglers, 1}, options).front();
}

RunReport RunBss(const std::vector<Matrix>& inputs, const InterpolationGrid& grid,
                 const AggregateSpec& spec, const StragglerModel& stragglers,
                 const ProtocolOptions& options) {
  return RunProtocol(Scheme::kBss, inputs, grid, MaskSpec{}, spec, {&stragglers, 1}, options)
      .front();
}

RunReport RunBssDp(const std::vector<Matrix>& inputs, const InterpolationGrid& grid,
                   const AggregateSpec& spec, const StragglerModel& stragglers, double sigma_dp,
                   const ProtocolOptions& options) {
  ProtocolOptions dp = options;
  dp.sigma_dp = sigma_dp;
  return RunProtocol(Scheme::kBssDp, inputs, grid, MaskSpec{}, spec, {&stragglers, 1}, dp)
      .front();
}

}  // namespace pbacc
