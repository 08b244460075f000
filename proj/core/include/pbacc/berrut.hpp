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

#ifndef PBACC_BERRUT_HPP_
#define PBACC_BERRUT_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pbacc/grid.hpp"
#include "pbacc/types.hpp"

namespace pbacc {

// Distances below this switch basis_weights to the indicator branch.
inline constexpr double kPoleTolerance = 1e-14;
// Decodes whose condition estimate exceeds this are flagged.
inline constexpr double kIllConditionedThreshold = 1e6;

struct MaskSpec {
  std::size_t T = 0;
  double sigma_n = 1.0;
  std::uint64_t seed = 0;
  double mask_shift = kDefaultMaskShift;
};

/// One node's encoded view. `payload` is 1xL for vector encoding, rxL for
/// packed encoding and Kxd for matrix encoding.
struct Share {
  std::size_t node_index = 0;
  double z = 0.0;
  Matrix payload;
};

struct DecodingResult {
  Matrix values;
  std::vector<std::size_t> used_nodes;
  std::size_t n = 0;
  /// max_k sum_i |q_i(alpha_k)| over the decoding weights.
  double condition = 1.0;
  bool ill_conditioned = false;
};

/// Berrut weights q_i(z) over `points` with alternating signs by index.
/// Returns the indicator e_i when z is within kPoleTolerance of points[i].
std::vector<double> BasisWeights(double z, std::span<const double> points);

/// Row h holds BasisWeights(zs[h], points).
Matrix WeightMatrix(std::span<const double> zs, std::span<const double> points);

/// Stacks data (K*r x L) and optional masks (T*r x L) into (K+T) x (r*L),
/// one interpolation point per row. Throws on shape mismatch.
Matrix StackCoefficients(const Matrix& data, const Matrix* masks, std::size_t points,
                         std::size_t mask_points);

/// Encodes data against every evaluation point in the grid. With
/// rows_per_point = r the data has grid.K()*r rows and each payload is r x L.
std::vector<Share> EncodePlain(const Matrix& data, const InterpolationGrid& grid,
                               std::size_t rows_per_point = 1);

/// T x L matrix of i.i.d. N(0, sigma_n^2 / T) draws, reproducible from the seed.
Matrix SampleMasks(const MaskSpec& spec, std::size_t cols);

/// As EncodePlain but mixing `masks` (grid.T()*r x L) in at the mask points.
std::vector<Share> EncodePrivate(const Matrix& data, const InterpolationGrid& grid,
                                 const Matrix& masks, std::size_t rows_per_point = 1);

/// Samples masks from spec (spec.T must equal grid.T()*r) and encodes.
std::vector<Share> EncodePrivate(const Matrix& data, const InterpolationGrid& grid,
                                 const MaskSpec& spec, std::size_t rows_per_point = 1);

/// Evaluates the Berrut interpolant through (nodes[i], values row i) at each
/// target. Output row t is sum_i q_i(targets[t]) values_i.
Matrix BerrutInterpolate(std::span<const double> nodes, const Matrix& values,
                         std::span<const double> targets, double* condition = nullptr);

/// Decodes at the grid's data alphas from any non-empty set of shares. The
/// reduction runs over shares sorted by node index. Throws insufficient-results
/// when empty and invalid-argument for unknown or duplicate nodes.
DecodingResult Decode(std::span<const Share> results, const InterpolationGrid& grid);

/// {"node_index":..,"z":..,"rows":..,"cols":..,"data":[row-major]}
std::string ShareToJson(const Share& share);
Share ShareFromJson(std::string_view text);

}  // namespace pbacc

#endif  // PBACC_BERRUT_HPP_
