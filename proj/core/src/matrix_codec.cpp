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

#include "pbacc/matrix_codec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "parallel.hpp"
#include "pbacc/errors.hpp"
#include "pbacc/rng.hpp"

namespace pbacc {

namespace {

using Index = Eigen::Index;

void CheckPacking(std::size_t K, const RowPacking& packing) {
  if (packing.r == 0 || packing.v == 0) {
    Fail(ErrorCode::kInvalidArgument, "rows per point and masks per row must be >= 1");
  }
  if (K == 0 || K % packing.r != 0) {
    std::ostringstream msg;
    msg << "rows per point r=" << packing.r << " must divide the row count " << K;
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
}

}  // namespace

InterpolationGrid MatrixGrid(std::size_t K, const RowPacking& packing, bool with_masks,
                             std::vector<double> zs, double mask_shift) {
  CheckPacking(K, packing);
  const std::size_t P = packing.P(K);
  return InterpolationGrid::WithEvaluationPoints(P, with_masks ? packing.S(K) : 0,
                                                 std::move(zs), mask_shift);
}

Matrix SampleRowMasks(std::size_t K, std::size_t v, std::size_t d, double sigma_n,
                      std::uint64_t seed) {
  if (v == 0) Fail(ErrorCode::kInvalidArgument, "masks per row must be >= 1");
  if (!(sigma_n > 0.0)) Fail(ErrorCode::kInvalidArgument, "sigma_n must be > 0");
  Rng rng(seed);
  std::normal_distribution<double> dist(0.0, sigma_n / std::sqrt(static_cast<double>(v)));
  Matrix masks(static_cast<Index>(K * v), static_cast<Index>(d));
  for (Index i = 0; i < masks.size(); ++i) masks.data()[i] = dist(rng);
  return masks;
}

std::vector<Share> EncodePacked(const Matrix& M, const InterpolationGrid& grid,
                                const RowPacking& packing, const Matrix* masks) {
  const auto K = static_cast<std::size_t>(M.rows());
  CheckPacking(K, packing);
  const std::size_t P = packing.P(K);
  if (grid.K() != P) {
    Fail(ErrorCode::kInvalidArgument, "grid must have one data point per packed row group");
  }
  const std::size_t v = packing.v;
  if (masks != nullptr) {
    if (grid.T() != P * v) {
      Fail(ErrorCode::kInvalidArgument, "grid must have (K/r)*v mask points");
    }
    if (masks->rows() != static_cast<Index>(K * v) || masks->cols() != M.cols()) {
      Fail(ErrorCode::kInvalidArgument, "masks must be (K*v) x d");
    }
  } else if (grid.T() != 0) {
    Fail(ErrorCode::kInvalidArgument, "plain matrix encoding requires a grid with T = 0");
  }
  const Matrix w = WeightMatrix(grid.zs(), grid.alphas());
  const Index d = M.cols();
  std::vector<Share> shares(grid.N());
  Eigen::VectorXd scale(static_cast<Index>(K));
  Eigen::VectorXd mask_scale(static_cast<Index>(K));
  for (std::size_t j = 0; j < grid.N(); ++j) {
    const auto row = static_cast<Index>(j);
    for (std::size_t k = 0; k < K; ++k) {
      scale(static_cast<Index>(k)) = w(row, static_cast<Index>(k / packing.r));
    }
    Matrix payload = scale.asDiagonal() * M;
    if (masks != nullptr) {
      const Eigen::Map<const Matrix> by_row(masks->data(), static_cast<Index>(K),
                                            static_cast<Index>(v) * d);
      for (std::size_t t = 0; t < v; ++t) {
        for (std::size_t k = 0; k < K; ++k) {
          const std::size_t p = k / packing.r;
          mask_scale(static_cast<Index>(k)) =
              w(row, static_cast<Index>(p)) * w(row, static_cast<Index>(P + p * v + t));
        }
        payload.noalias() +=
            mask_scale.asDiagonal() * by_row.middleCols(static_cast<Index>(t) * d, d);
      }
    }
    shares[j].node_index = j;
    shares[j].z = grid.zs()[j];
    shares[j].payload = std::move(payload);
  }
  return shares;
}

std::vector<Share> EncodeMatrixRows(const Matrix& M, const InterpolationGrid& grid,
                                    const Matrix* masks, std::size_t v) {
  return EncodePacked(M, grid, RowPacking{1, v}, masks);
}

Share WorkerMultiply(const Share& uA, const Share& uB, const InterpolationGrid& grid,
                     std::size_t r) {
  if (uA.node_index != uB.node_index || uA.z != uB.z) {
    Fail(ErrorCode::kInvalidArgument, "worker shares come from different evaluation points");
  }
  if (uA.payload.cols() != uB.payload.cols()) {
    Fail(ErrorCode::kInvalidArgument, "A and B shares need the same column count");
  }
  if (r == 0 || uA.payload.rows() != static_cast<Index>(grid.K() * r) ||
      uB.payload.rows() != static_cast<Index>(grid.K() * r)) {
    Fail(ErrorCode::kInvalidArgument, "share rows must equal grid.K() * r");
  }
  const std::vector<double> t = BasisWeights(uA.z, grid.alphas());
  Eigen::VectorXd inv(uB.payload.rows());
  for (Index j = 0; j < inv.size(); ++j) {
    const double weight = t[static_cast<std::size_t>(j) / r];
    if (std::abs(weight) < kPoleTolerance) {
      std::ostringstream msg;
      msg << "node " << uA.node_index << " has |t(z)| < " << kPoleTolerance << " for point "
          << static_cast<std::size_t>(j) / r;
      Fail(ErrorCode::kDegenerateWeight, msg.str());
    }
    inv(j) = 1.0 / weight;
  }
  // Summing the row blocks of uA first gives the same r x K' result.
  const auto rr = static_cast<Index>(r);
  Matrix folded_a = Matrix::Zero(rr, uA.payload.cols());
  for (std::size_t p = 0; p < grid.K(); ++p) {
    folded_a += uA.payload.middleRows(static_cast<Index>(p) * rr, rr);
  }
  Matrix out = (folded_a * uB.payload.transpose()) * inv.asDiagonal();
  return Share{uA.node_index, uA.z, std::move(out)};
}

DecodingResult DecodeProduct(std::span<const Share> row_shares, const InterpolationGrid& grid) {
  return Decode(row_shares, grid);
}

std::string_view BlockPolicyName(BlockPolicy policy) {
  return policy == BlockPolicy::kShared ? "shared" : "disjoint";
}

BlockPolicy ParseBlockPolicy(std::string_view name) {
  if (name == "shared") return BlockPolicy::kShared;
  if (name == "disjoint") return BlockPolicy::kDisjoint;
  Fail(ErrorCode::kInvalidArgument,
       "unknown block policy '" + std::string(name) + "' (shared, disjoint)");
}

BlockPlan PlanBlocks(const Matrix& A, const Matrix& B, std::size_t b, std::size_t node_count,
                     BlockPolicy policy) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    Fail(ErrorCode::kInvalidArgument, "A and B must have the same shape");
  }
  const auto L = static_cast<std::size_t>(A.cols());
  if (b == 0 || L == 0 || L % b != 0) {
    std::ostringstream msg;
    msg << "block count " << b << " must divide the column count " << L;
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  if (node_count < b * b) {
    std::ostringstream msg;
    msg << node_count << " nodes cannot cover " << b * b << " block pairs";
    Fail(ErrorCode::kCapacity, msg.str());
  }
  BlockPlan plan;
  plan.block_count = b;
  plan.cols_per_block = L / b;
  plan.policy = policy;
  const std::size_t groups = b * b;
  for (std::size_t x = 0; x < b; ++x) {
    for (std::size_t y = 0; y < b; ++y) {
      const std::size_t g = x * b + y;
      plan.pairs.emplace_back(x, y);
      std::vector<std::size_t> nodes;
      if (policy == BlockPolicy::kShared) {
        nodes.resize(node_count);
        std::iota(nodes.begin(), nodes.end(), std::size_t{0});
      } else {
        for (std::size_t n = g; n < node_count; n += groups) nodes.push_back(n);
      }
      plan.group_nodes.push_back(std::move(nodes));
    }
  }
  return plan;
}

Matrix AssembleBlocks(const std::map<std::pair<std::size_t, std::size_t>, Matrix>& decoded,
                      const BlockPlan& plan) {
  const std::size_t b = plan.block_count;
  const auto h = static_cast<Index>(plan.cols_per_block);
  std::ostringstream missing;
  bool any_missing = false;
  for (std::size_t x = 0; x < b; ++x) {
    for (std::size_t y = 0; y < b; ++y) {
      const auto it = decoded.find({x, y});
      if (it == decoded.end()) {
        missing << (any_missing ? ", " : "") << "(" << x << "," << y << ")";
        any_missing = true;
      } else if (it->second.rows() != h || it->second.cols() != h) {
        Fail(ErrorCode::kInvalidArgument, "decoded block has the wrong shape");
      }
    }
  }
  if (any_missing) Fail(ErrorCode::kIncompleteAssembly, "missing block pairs " + missing.str());
  Matrix out(static_cast<Index>(b) * h, static_cast<Index>(b) * h);
  for (const auto& [key, block] : decoded) {
    if (key.first >= b || key.second >= b) continue;
    out.block(static_cast<Index>(key.first) * h, static_cast<Index>(key.second) * h, h, h) = block;
  }
  return out;
}

ProductRun RunDirectWorkers(const Matrix& A, const Matrix& B, std::vector<double> zs,
                            const ProductOptions& options,
                            std::pair<std::size_t, std::size_t> mask_block,
                            std::vector<std::size_t> global_nodes) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    Fail(ErrorCode::kInvalidArgument, "A and B must have the same shape");
  }
  const auto K = static_cast<std::size_t>(A.rows());
  ProductRun run{MatrixGrid(K, options.packing, options.masks.has_value(), std::move(zs),
                            options.mask_shift),
                 options.packing.r,
                 {},
                 std::move(global_nodes)};
  if (run.nodes.empty()) {
    run.nodes.resize(run.grid.N());
    std::iota(run.nodes.begin(), run.nodes.end(), std::size_t{0});
  }
  if (run.nodes.size() != run.grid.N()) {
    Fail(ErrorCode::kInvalidArgument, "one global node index per evaluation point is required");
  }
  std::vector<Share> sa;
  std::vector<Share> sb;
  if (options.masks) {
    const auto d = static_cast<std::size_t>(A.cols());
    const std::size_t v = options.packing.v;
    const Matrix ra = SampleRowMasks(
        K, v, d, options.masks->sigma_n,
        StreamSeed(options.masks->seed, Stream::kMaskA, {mask_block.first, mask_block.second}));
    const Matrix rb = SampleRowMasks(
        K, v, d, options.masks->sigma_n,
        StreamSeed(options.masks->seed, Stream::kMaskB, {mask_block.first, mask_block.second}));
    sa = EncodePacked(A, run.grid, options.packing, &ra);
    sb = EncodePacked(B, run.grid, options.packing, &rb);
  } else {
    sa = EncodePacked(A, run.grid, options.packing, nullptr);
    sb = EncodePacked(B, run.grid, options.packing, nullptr);
  }
  run.results.resize(run.grid.N());
  internal::ParallelFor(run.grid.N(), options.jobs, [&](std::size_t j) {
    run.results[j] = WorkerMultiply(sa[j], sb[j], run.grid, options.packing.r);
  });
  return run;
}

DecodingResult DecodeRun(const ProductRun& run, std::span<const std::size_t> fast) {
  std::vector<Share> selected;
  for (std::size_t i = 0; i < run.nodes.size(); ++i) {
    if (std::binary_search(fast.begin(), fast.end(), run.nodes[i])) {
      selected.push_back(run.results[i]);
    }
  }
  if (selected.empty()) {
    Fail(ErrorCode::kInsufficientResults, "no fast worker in this group");
  }
  return Decode(selected, run.grid);
}

BlockedRun RunBlockedWorkers(const Matrix& A, const Matrix& B, std::size_t b,
                             const std::vector<double>& zs, BlockPolicy policy,
                             const ProductOptions& options) {
  BlockedRun run{PlanBlocks(A, B, b, zs.size(), policy), {}};
  const auto h = static_cast<Index>(run.plan.cols_per_block);
  for (std::size_t g = 0; g < run.plan.pairs.size(); ++g) {
    const auto [x, y] = run.plan.pairs[g];
    const Matrix ax = A.middleCols(static_cast<Index>(x) * h, h).transpose();
    const Matrix by = B.middleCols(static_cast<Index>(y) * h, h).transpose();
    std::vector<double> group_zs;
    for (std::size_t n : run.plan.group_nodes[g]) group_zs.push_back(zs[n]);
    run.pairs.push_back(
        RunDirectWorkers(ax, by, std::move(group_zs), options, {x, y}, run.plan.group_nodes[g]));
  }
  return run;
}

Matrix DecodeBlockedRun(const BlockedRun& run, std::span<const std::size_t> fast) {
  std::map<std::pair<std::size_t, std::size_t>, Matrix> decoded;
  for (std::size_t g = 0; g < run.pairs.size(); ++g) {
    decoded[run.plan.pairs[g]] = DecodeRun(run.pairs[g], fast).values;
  }
  return AssembleBlocks(decoded, run.plan);
}

}  // namespace pbacc
