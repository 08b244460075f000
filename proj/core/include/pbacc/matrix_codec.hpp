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

#ifndef PBACC_MATRIX_CODEC_HPP_
#define PBACC_MATRIX_CODEC_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "pbacc/berrut.hpp"
#include "pbacc/grid.hpp"
#include "pbacc/types.hpp"

namespace pbacc {

/// r rows per interpolation point and v masks per packed row.
struct RowPacking {
  std::size_t r = 1;
  std::size_t v = 1;

  std::size_t P(std::size_t K) const { return K / r; }
  std::size_t S(std::size_t K) const { return P(K) * v; }
};

/// Grid with K/r data points, (K/r)*v mask points when `with_masks`, and the
/// given evaluation points. Throws invalid-argument when r does not divide K.
InterpolationGrid MatrixGrid(std::size_t K, const RowPacking& packing, bool with_masks,
                             std::vector<double> zs, double mask_shift = kDefaultMaskShift);

/// (K*v) x d matrix of N(0, sigma_n^2 / v) draws; row k*v+t is mask t of row k.
Matrix SampleRowMasks(std::size_t K, std::size_t v, std::size_t d, double sigma_n,
                      std::uint64_t seed);

/// Row k of share j is t_p(z_j) M_k (+ sum_t t_p(z_j) t_{P+p*v+t}(z_j) R_{k*v+t}
/// when masks are given), p = k / r.
std::vector<Share> EncodePacked(const Matrix& M, const InterpolationGrid& grid,
                                const RowPacking& packing, const Matrix* masks = nullptr);

/// EncodePacked with r = 1.
std::vector<Share> EncodeMatrixRows(const Matrix& M, const InterpolationGrid& grid,
                                    const Matrix* masks = nullptr, std::size_t v = 1);

/// uA uB^T with column j divided by t_{j/r}(z), then the P row blocks summed.
/// Returns an r x K' share. Throws degenerate-weight when |t| < kPoleTolerance.
Share WorkerMultiply(const Share& uA, const Share& uB, const InterpolationGrid& grid,
                     std::size_t r = 1);

/// Decodes row shares at the data alphas into the (P*r) x K' product.
DecodingResult DecodeProduct(std::span<const Share> row_shares, const InterpolationGrid& grid);

enum class BlockPolicy {
  kShared,    // every node computes every block pair
  kDisjoint,  // pair g is owned by nodes g, g + b^2, g + 2b^2, ...
};

std::string_view BlockPolicyName(BlockPolicy policy);
BlockPolicy ParseBlockPolicy(std::string_view name);

struct BlockPlan {
  std::size_t block_count = 1;
  std::size_t cols_per_block = 0;
  BlockPolicy policy = BlockPolicy::kShared;
  /// pairs[g] = (x, y); group_nodes[g] = global node indices for that pair.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::vector<std::size_t>> group_nodes;
};

/// Splits A and B (both K x L) into b vertical blocks. Throws capacity when
/// node_count < b^2 and invalid-argument when b does not divide L.
BlockPlan PlanBlocks(const Matrix& A, const Matrix& B, std::size_t b, std::size_t node_count,
                     BlockPolicy policy = BlockPolicy::kShared);

/// Places each h x h block (x, y) of A^T B. Throws incomplete-assembly naming
/// the missing pairs.
Matrix AssembleBlocks(const std::map<std::pair<std::size_t, std::size_t>, Matrix>& decoded,
                      const BlockPlan& plan);

struct MatrixMaskOptions {
  double sigma_n = 1e4;
  std::uint64_t seed = 0;
};

struct ProductOptions {
  RowPacking packing;
  double mask_shift = kDefaultMaskShift;
  /// Present for the private scheme.
  std::optional<MatrixMaskOptions> masks;
  std::size_t jobs = 1;
};

/// Worker outputs of one A B^T computation. `nodes[i]` is the global node
/// index of results[i].
struct ProductRun {
  InterpolationGrid grid;
  std::size_t rows_per_point = 1;
  std::vector<Share> results;
  std::vector<std::size_t> nodes;
};

/// Direct scheme for A B^T over the given evaluation points. `mask_block`
/// selects the mask streams so blocked pairs draw independent masks.
ProductRun RunDirectWorkers(const Matrix& A, const Matrix& B, std::vector<double> zs,
                            const ProductOptions& options,
                            std::pair<std::size_t, std::size_t> mask_block = {0, 0},
                            std::vector<std::size_t> global_nodes = {});

/// Decodes using the workers whose global index is in `fast` (sorted).
DecodingResult DecodeRun(const ProductRun& run, std::span<const std::size_t> fast);

struct BlockedRun {
  BlockPlan plan;
  std::vector<ProductRun> pairs;
};

/// Blocked scheme for A^T B: pair (x, y) runs the direct scheme on
/// (A_x^T, B_y^T).
BlockedRun RunBlockedWorkers(const Matrix& A, const Matrix& B, std::size_t b,
                             const std::vector<double>& zs, BlockPolicy policy,
                             const ProductOptions& options);

Matrix DecodeBlockedRun(const BlockedRun& run, std::span<const std::size_t> fast);

}  // namespace pbacc

#endif  // PBACC_MATRIX_CODEC_HPP_
