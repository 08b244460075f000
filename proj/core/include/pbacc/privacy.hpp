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

#ifndef PBACC_PRIVACY_HPP_
#define PBACC_PRIVACY_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "pbacc/grid.hpp"
#include "pbacc/types.hpp"

namespace pbacc {

inline constexpr double kDefaultRelativeFloor = 1e-10;
inline constexpr double kDefaultEpsilon = 1.0;

/// Colluding node set. Indices refer to the grid's evaluation points.
struct CollusionScenario {
  std::vector<std::size_t> node_indices;

  static CollusionScenario Prefix(std::size_t c);
  std::size_t c() const { return node_indices.size(); }
};

/// Eigenvalue floor for the mask covariance. Relative floors are scaled by
/// trace/p of the matrix being regularized.
struct RegularizationFloor {
  enum class Mode { kAbsolute, kRelative };
  Mode mode = Mode::kRelative;
  double value = kDefaultRelativeFloor;

  static RegularizationFloor Absolute(double v) { return {Mode::kAbsolute, v}; }
  static RegularizationFloor Relative(double v) { return {Mode::kRelative, v}; }
};

struct LeakageReport {
  CollusionScenario scenario;
  double I_L = 0.0;
  /// Bits per data point.
  double iota_L = 0.0;
  double epsilon = kDefaultEpsilon;
  bool satisfied = true;
  /// Absolute floor actually applied (for relative floors, the resolved value).
  double regularization_floor = 0.0;
};

struct InterpolationMatrices {
  Matrix Q;        // c x K
  Matrix Q_tilde;  // c x T
};

InterpolationMatrices BuildInterpolationMatrices(const InterpolationGrid& grid,
                                                 const CollusionScenario& scenario);

/// Minimum Eigenvalue Method: clamps eigenvalues below `floor` up to `floor`.
/// Throws invalid-argument when the input is not symmetric.
Matrix RegularizeCovariance(const Matrix& matrix, double floor);

/// log2 det(I + snr * reg(Qt Qt^T)^-1 Q Q^T) for one observation set.
/// Cholesky on the symmetrized argument; numerical-failure if that breaks down.
double LeakageBits(const Matrix& Q, const Matrix& Q_tilde, double snr,
                   const RegularizationFloor& floor, double* applied_floor = nullptr);

/// Same quantity from an independent symmetric eigensolve; used as an oracle.
double LeakageBitsByEigenvalues(const Matrix& Q, const Matrix& Q_tilde, double snr,
                                const RegularizationFloor& floor);

/// Vector bound with snr = s^2 T / sigma_n^2 and iota = I_L / K.
LeakageReport LeakageBound(const InterpolationGrid& grid, const CollusionScenario& scenario,
                           double s, double sigma_n, const RegularizationFloor& floor,
                           double epsilon = kDefaultEpsilon);

enum class ScenarioPolicy { kPrefix, kGreedy, kSampled };

std::string_view ScenarioPolicyName(ScenarioPolicy policy);
ScenarioPolicy ParseScenarioPolicy(std::string_view name);

struct CurveOptions {
  ScenarioPolicy policy = ScenarioPolicy::kPrefix;
  /// Subsets per c for kSampled.
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  /// Worker threads for independent sigma_n values.
  std::size_t jobs = 1;
};

struct CurvePoint {
  std::size_t c = 0;
  double sigma_n = 0.0;
  double I_L = 0.0;
  double iota_L = 0.0;
};

/// Evaluates the bound for c in [c_min, c_max] and every sigma_n. Output order
/// is sigma_n-major in input order, then ascending c. c = 0 yields 0 bits.
/// kGreedy grows one worst-case set per sigma_n; kSampled reports the max over
/// random subsets (a lower bound on the true max).
std::vector<CurvePoint> LeakageCurve(const InterpolationGrid& grid, double s,
                                     const std::vector<double>& sigma_n_list,
                                     std::size_t c_min, std::size_t c_max,
                                     const RegularizationFloor& floor,
                                     const CurveOptions& options = {});

/// Matrix row-wise bound with v masks per row: grid.T() must equal K*v. Row i
/// observes L (c x 1, q_i) and L~ (c x v, q_{K+iv+t} q_i); snr = s^2 v / sigma_n^2.
/// iota_L is the mean per-row bound. Throws invalid-argument on v = 0.
LeakageReport RowwiseLeakage(const InterpolationGrid& grid, const CollusionScenario& scenario,
                             std::size_t v, double s, double sigma_n,
                             const RegularizationFloor& floor, double epsilon = kDefaultEpsilon);

/// Bisects an absolute floor in log space so that leakage(floor) ~= target.
/// leakage must be non-increasing in the floor.
double CalibrateFloor(const std::function<double(double)>& leakage, double target,
                      double lo = 1e-300, double hi = 1e300, int iterations = 200);

/// log2(2s): entropy of U(-s, s) at unit resolution.
double UniformEntropyBits(double s);

}  // namespace pbacc

#endif  // PBACC_PRIVACY_HPP_
