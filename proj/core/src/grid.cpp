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

#include "pbacc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "pbacc/errors.hpp"

namespace pbacc {

std::vector<double> ChebyshevFirstKind(std::size_t count) {
  if (count == 0) Fail(ErrorCode::kInvalidArgument, "first-kind point count must be >= 1");
  std::vector<double> points(count);
  const double denom = 2.0 * static_cast<double>(count);
  for (std::size_t j = 0; j < count; ++j) {
    points[j] = std::cos(static_cast<double>(2 * j + 1) * std::numbers::pi / denom);
  }
  if (count % 2 == 1) points[count / 2] = 0.0;
  return points;
}

std::vector<double> ChebyshevSecondKind(std::size_t count) {
  if (count < 2) Fail(ErrorCode::kInvalidArgument, "second-kind point count must be >= 2");
  std::vector<double> points(count);
  const double denom = static_cast<double>(count - 1);
  for (std::size_t j = 0; j < count; ++j) {
    points[j] = std::cos(static_cast<double>(j) * std::numbers::pi / denom);
  }
  points.front() = 1.0;
  points.back() = -1.0;
  if (count % 2 == 1) points[count / 2] = 0.0;
  return points;
}

std::vector<double> ShiftedFirstKind(std::size_t count, double shift) {
  std::vector<double> points = ChebyshevFirstKind(count);
  for (double& p : points) p += shift;
  return points;
}

InterpolationGrid::InterpolationGrid(std::size_t K, std::size_t T, double mask_shift,
                                     std::vector<double> alphas, std::vector<double> zs)
    : K_(K), T_(T), mask_shift_(mask_shift), alphas_(std::move(alphas)), zs_(std::move(zs)) {}

InterpolationGrid InterpolationGrid::Build(std::size_t K, std::size_t T, std::size_t N,
                                           double mask_shift) {
  if (N < 2) Fail(ErrorCode::kInvalidArgument, "grid needs N >= 2 evaluation points");
  return WithEvaluationPoints(K, T, ChebyshevSecondKind(N), mask_shift);
}

InterpolationGrid InterpolationGrid::WithEvaluationPoints(std::size_t K, std::size_t T,
                                                          std::vector<double> zs,
                                                          double mask_shift) {
  if (K == 0) Fail(ErrorCode::kInvalidArgument, "grid needs K >= 1 data points");
  if (zs.empty()) Fail(ErrorCode::kInvalidArgument, "grid needs at least one evaluation point");
  if (T > 0 && !(std::abs(mask_shift) > 2.0)) {
    std::ostringstream msg;
    msg << "mask_shift " << mask_shift
        << " places mask points inside the data/evaluation range; need |shift| > 2";
    Fail(ErrorCode::kInvalidShift, msg.str());
  }
  std::vector<double> alphas = ChebyshevFirstKind(K);
  if (T > 0) {
    std::vector<double> masks = ShiftedFirstKind(T, mask_shift);
    alphas.insert(alphas.end(), masks.begin(), masks.end());
  }
  InterpolationGrid grid(K, T, mask_shift, std::move(alphas), std::move(zs));
  grid.Validate();
  return grid;
}

void InterpolationGrid::Validate() const {
  auto strictly_decreasing = [](std::span<const double> v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] < v[i - 1] - kCollisionGuard)) return false;
    }
    return true;
  };
  if (!strictly_decreasing(data_alphas()) || !strictly_decreasing(mask_alphas())) {
    Fail(ErrorCode::kInvalidArgument, "interpolation points must be distinct");
  }
  if (!strictly_decreasing(zs_)) {
    Fail(ErrorCode::kInvalidArgument, "evaluation points must be distinct and decreasing");
  }
  for (double z : zs_) {
    if (!(z >= -1.0 && z <= 1.0)) {
      Fail(ErrorCode::kInvalidArgument, "evaluation points must lie in [-1, 1]");
    }
  }
  for (std::size_t j = 0; j < zs_.size(); ++j) {
    for (std::size_t i = 0; i < alphas_.size(); ++i) {
      if (std::abs(zs_[j] - alphas_[i]) <= kCollisionGuard) {
        std::ostringstream msg;
        msg << "evaluation point z[" << j << "]=" << zs_[j] << " coincides with alpha[" << i
            << "]; change K, the N parity, or the evaluation points";
        Fail(ErrorCode::kGridCollision, msg.str());
      }
    }
  }
}

}  // namespace pbacc
