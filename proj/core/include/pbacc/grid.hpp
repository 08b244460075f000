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

#ifndef PBACC_GRID_HPP_
#define PBACC_GRID_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace pbacc {

inline constexpr double kDefaultMaskShift = 10.0;
// Points closer than this are treated as the same point.
inline constexpr double kCollisionGuard = 1e-12;

/// cos((2j+1)pi / (2 count)), j = 0..count-1. Throws invalid-argument on 0.
std::vector<double> ChebyshevFirstKind(std::size_t count);

/// cos(j pi / (count-1)), j = 0..count-1. Requires count >= 2.
std::vector<double> ChebyshevSecondKind(std::size_t count);

/// ChebyshevFirstKind(count) shifted by `shift`.
std::vector<double> ShiftedFirstKind(std::size_t count, double shift);

// Interpolation and evaluation points. `alphas` holds the K data points followed by the T mask points;
// `zs` holds the N evaluation points, one per node.
//
// Invariants (checked on construction): families are strictly decreasing,
// data alphas lie in (-1, 1), mask alphas in (shift-1, shift+1) with
// |shift| > 2, zs in [-1, 1], and no evaluation point coincides with an
// interpolation point.
class InterpolationGrid {
 public:
  /// Data points are first-kind Chebyshev, mask points shifted first-kind,
  /// evaluation points second-kind. Throws grid-collision or invalid-shift.
  static InterpolationGrid Build(std::size_t K, std::size_t T, std::size_t N,
                                 double mask_shift = kDefaultMaskShift);

  /// Same alphas as Build with caller-chosen evaluation points.
  static InterpolationGrid WithEvaluationPoints(std::size_t K, std::size_t T,
                                                std::vector<double> zs,
                                                double mask_shift = kDefaultMaskShift);

  std::size_t K() const { return K_; }
  std::size_t T() const { return T_; }
  std::size_t N() const { return zs_.size(); }
  double mask_shift() const { return mask_shift_; }

  std::span<const double> alphas() const { return alphas_; }
  std::span<const double> data_alphas() const {
    return std::span<const double>(alphas_).first(K_);
  }
  std::span<const double> mask_alphas() const {
    return std::span<const double>(alphas_).subspan(K_);
  }
  std::span<const double> zs() const { return zs_; }

 private:
  InterpolationGrid(std::size_t K, std::size_t T, double mask_shift,
                    std::vector<double> alphas, std::vector<double> zs);
  void Validate() const;

  std::size_t K_ = 0;
  std::size_t T_ = 0;
  double mask_shift_ = kDefaultMaskShift;
  std::vector<double> alphas_;
  std::vector<double> zs_;
};

}  // namespace pbacc

#endif  // PBACC_GRID_HPP_
