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

#include "pbacc/privacy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "parallel.hpp"
#include "pbacc/berrut.hpp"
#include "pbacc/errors.hpp"
#include "pbacc/rng.hpp"

namespace pbacc {

namespace {

using DenseMatrix = Eigen::MatrixXd;

double ResolveFloor(const RegularizationFloor& floor, const DenseMatrix& sigma_tilde) {
  double value = floor.value;
  if (floor.mode == RegularizationFloor::Mode::kRelative && sigma_tilde.rows() > 0) {
    value *= sigma_tilde.trace() / static_cast<double>(sigma_tilde.rows());
  }
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "regularization floor resolved to " << value << "; it must be positive and finite";
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  return value;
}

void CheckSnr(double snr) {
  if (!(snr >= 0.0) || !std::isfinite(snr)) {
    Fail(ErrorCode::kInvalidArgument, "signal-to-noise factor must be finite and >= 0");
  }
}

double CholeskyLog2Det(const DenseMatrix& a, const char* what) {
  Eigen::LLT<DenseMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << what << ": Cholesky failed on a " << a.rows() << "x" << a.cols()
        << " matrix with diagonal range [" << a.diagonal().minCoeff() << ", "
        << a.diagonal().maxCoeff() << "]";
    Fail(ErrorCode::kNumericalFailure, msg.str());
  }
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double bits = log_det / std::numbers::ln2;
  if (!std::isfinite(bits)) {
    std::ostringstream msg;
    msg << what << ": log-determinant is not finite";
    Fail(ErrorCode::kNumericalFailure, msg.str());
  }
  return bits;
}

// Bound from the c x c Gram matrices Sigma = Q Q^T and Sigma~ = Qt Qt^T.
double BitsFromGrams(const DenseMatrix& sigma, const DenseMatrix& sigma_tilde, double snr,
                     const RegularizationFloor& floor, double* applied_floor) {
  const Eigen::Index c = sigma.rows();
  if (c == 0) {
    if (applied_floor != nullptr) *applied_floor = floor.value;
    return 0.0;
  }
  const double f = ResolveFloor(floor, sigma_tilde);
  if (applied_floor != nullptr) *applied_floor = f;
  const DenseMatrix identity = DenseMatrix::Identity(c, c);
  if (sigma_tilde.trace() <= f) {
    // Every eigenvalue of Sigma~ is below the floor, so reg(Sigma~) = f I.
    return CholeskyLog2Det(identity + (snr / f) * sigma, "leakage bound");
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(sigma_tilde);
  if (eig.info() != Eigen::Success) {
    Fail(ErrorCode::kNumericalFailure, "eigendecomposition of the mask covariance failed");
  }
  const Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(f);
  const DenseMatrix inv_sqrt =
      eig.eigenvectors() * clamped.cwiseSqrt().cwiseInverse().asDiagonal() *
      eig.eigenvectors().transpose();
  DenseMatrix a = identity + snr * (inv_sqrt * sigma * inv_sqrt);
  a = 0.5 * (a + a.transpose()).eval();
  return CholeskyLog2Det(a, "leakage bound");
}

DenseMatrix Gram(const Matrix& m) { return DenseMatrix(m * m.transpose()); }

void CheckScenario(const InterpolationGrid& grid, const CollusionScenario& scenario) {
  std::vector<std::size_t> sorted = scenario.node_indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    Fail(ErrorCode::kInvalidArgument, "collusion scenario contains duplicate nodes");
  }
  if (!sorted.empty() && sorted.back() >= grid.N()) {
    Fail(ErrorCode::kInvalidArgument, "collusion scenario references a node outside the grid");
  }
}

std::vector<double> ScenarioZs(const InterpolationGrid& grid, const CollusionScenario& scenario) {
  std::vector<double> zs;
  zs.reserve(scenario.c());
  for (std::size_t j : scenario.node_indices) zs.push_back(grid.zs()[j]);
  return zs;
}

double VectorSnr(const InterpolationGrid& grid, double s, double sigma_n) {
  if (grid.T() == 0) Fail(ErrorCode::kInvalidArgument, "leakage bound requires T >= 1");
  if (!(sigma_n > 0.0)) Fail(ErrorCode::kInvalidArgument, "sigma_n must be > 0");
  const double snr = s * s * static_cast<double>(grid.T()) / (sigma_n * sigma_n);
  CheckSnr(snr);
  return snr;
}

DenseMatrix Submatrix(const DenseMatrix& full, const std::vector<std::size_t>& idx) {
  const auto c = static_cast<Eigen::Index>(idx.size());
  DenseMatrix out(c, c);
  for (Eigen::Index a = 0; a < c; ++a) {
    for (Eigen::Index b = 0; b < c; ++b) {
      out(a, b) = full(static_cast<Eigen::Index>(idx[a]), static_cast<Eigen::Index>(idx[b]));
    }
  }
  return out;
}

}  // namespace

CollusionScenario CollusionScenario::Prefix(std::size_t c) {
  CollusionScenario scenario;
  scenario.node_indices.resize(c);
  std::iota(scenario.node_indices.begin(), scenario.node_indices.end(), std::size_t{0});
  return scenario;
}

InterpolationMatrices BuildInterpolationMatrices(const InterpolationGrid& grid,
                                                 const CollusionScenario& scenario) {
  CheckScenario(grid, scenario);
  const Matrix w = WeightMatrix(ScenarioZs(grid, scenario), grid.alphas());
  const auto K = static_cast<Eigen::Index>(grid.K());
  const auto T = static_cast<Eigen::Index>(grid.T());
  return {w.leftCols(K), w.rightCols(T)};
}

Matrix RegularizeCovariance(const Matrix& matrix, double floor) {
  if (matrix.rows() != matrix.cols()) {
    Fail(ErrorCode::kInvalidArgument, "covariance must be square");
  }
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    Fail(ErrorCode::kInvalidArgument, "covariance must be symmetric");
  }
  const DenseMatrix sym = 0.5 * (matrix + matrix.transpose());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(sym);
  if (eig.info() != Eigen::Success) {
    Fail(ErrorCode::kNumericalFailure, "eigendecomposition failed");
  }
  const Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(floor);
  DenseMatrix out = eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose();
  out = 0.5 * (out + out.transpose()).eval();
  return out;
}

double LeakageBits(const Matrix& Q, const Matrix& Q_tilde, double snr,
                   const RegularizationFloor& floor, double* applied_floor) {
  if (Q.rows() != Q_tilde.rows()) {
    Fail(ErrorCode::kInvalidArgument, "Q and Q~ must have one row per colluder");
  }
  CheckSnr(snr);
  return BitsFromGrams(Gram(Q), Gram(Q_tilde), snr, floor, applied_floor);
}

double LeakageBitsByEigenvalues(const Matrix& Q, const Matrix& Q_tilde, double snr,
                                const RegularizationFloor& floor) {
  if (Q.rows() == 0) return 0.0;
  const DenseMatrix sigma = Gram(Q);
  const DenseMatrix sigma_tilde = Gram(Q_tilde);
  const double f = ResolveFloor(floor, sigma_tilde);
  const DenseMatrix reg = RegularizeCovariance(sigma_tilde, f);
  const DenseMatrix product = reg.partialPivLu().solve(sigma);
  Eigen::EigenSolver<DenseMatrix> eig(product, false);
  double bits = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    bits += std::log2(1.0 + snr * eig.eigenvalues()(i).real());
  }
  return bits;
}

LeakageReport LeakageBound(const InterpolationGrid& grid, const CollusionScenario& scenario,
                           double s, double sigma_n, const RegularizationFloor& floor,
                           double epsilon) {
  const double snr = VectorSnr(grid, s, sigma_n);
  const InterpolationMatrices m = BuildInterpolationMatrices(grid, scenario);
  LeakageReport report;
  report.scenario = scenario;
  report.epsilon = epsilon;
  report.I_L = LeakageBits(m.Q, m.Q_tilde, snr, floor, &report.regularization_floor);
  report.iota_L = report.I_L / static_cast<double>(grid.K());
  report.satisfied = report.iota_L < epsilon;
  return report;
}

std::string_view ScenarioPolicyName(ScenarioPolicy policy) {
  switch (policy) {
    case ScenarioPolicy::kPrefix:
      return "prefix";
    case ScenarioPolicy::kGreedy:
      return "greedy";
    case ScenarioPolicy::kSampled:
      return "sampled";
  }
  return "prefix";
}

ScenarioPolicy ParseScenarioPolicy(std::string_view name) {
  if (name == "prefix") return ScenarioPolicy::kPrefix;
  if (name == "greedy") return ScenarioPolicy::kGreedy;
  if (name == "sampled") return ScenarioPolicy::kSampled;
  Fail(ErrorCode::kInvalidArgument,
       "unknown scenario policy '" + std::string(name) + "' (prefix, greedy, sampled)");
}

std::vector<CurvePoint> LeakageCurve(const InterpolationGrid& grid, double s,
                                     const std::vector<double>& sigma_n_list,
                                     std::size_t c_min, std::size_t c_max,
                                     const RegularizationFloor& floor,
                                     const CurveOptions& options) {
  if (c_min > c_max) Fail(ErrorCode::kInvalidArgument, "c_min must not exceed c_max");
  if (c_max > grid.N()) Fail(ErrorCode::kInvalidArgument, "c_max exceeds the node count");
  if (sigma_n_list.empty()) Fail(ErrorCode::kInvalidArgument, "sigma_n list is empty");
  for (double sigma_n : sigma_n_list) VectorSnr(grid, s, sigma_n);

  const Matrix w = WeightMatrix(grid.zs(), grid.alphas());
  const DenseMatrix gram = Gram(w.leftCols(static_cast<Eigen::Index>(grid.K())));
  const DenseMatrix gram_tilde = Gram(w.rightCols(static_cast<Eigen::Index>(grid.T())));
  const double K = static_cast<double>(grid.K());
  auto bits_for = [&](const std::vector<std::size_t>& nodes, double snr) {
    return BitsFromGrams(Submatrix(gram, nodes), Submatrix(gram_tilde, nodes), snr, floor,
                         nullptr);
  };

  const std::size_t span = c_max - c_min + 1;
  std::vector<CurvePoint> out(sigma_n_list.size() * span);
  internal::ParallelFor(sigma_n_list.size(), options.jobs, [&](std::size_t si) {
    const double sigma_n = sigma_n_list[si];
    const double snr = VectorSnr(grid, s, sigma_n);
    std::vector<double> values(c_max + 1, 0.0);
    switch (options.policy) {
      case ScenarioPolicy::kPrefix: {
        for (std::size_t c = std::max<std::size_t>(c_min, 1); c <= c_max; ++c) {
          values[c] = bits_for(CollusionScenario::Prefix(c).node_indices, snr);
        }
        break;
      }
      case ScenarioPolicy::kGreedy: {
        std::vector<std::size_t> chosen;
        std::vector<bool> used(grid.N(), false);
        for (std::size_t c = 1; c <= c_max; ++c) {
          double best = -1.0;
          std::size_t best_j = 0;
          chosen.push_back(0);
          for (std::size_t j = 0; j < grid.N(); ++j) {
            if (used[j]) continue;
            chosen.back() = j;
            const double v = bits_for(chosen, snr);
            if (v > best) {
              best = v;
              best_j = j;
            }
          }
          chosen.back() = best_j;
          used[best_j] = true;
          values[c] = best;
        }
        break;
      }
      case ScenarioPolicy::kSampled: {
        std::vector<std::size_t> perm(grid.N());
        for (std::size_t c = std::max<std::size_t>(c_min, 1); c <= c_max; ++c) {
          double best = 0.0;
          for (std::size_t m = 0; m < std::max<std::size_t>(options.samples, 1); ++m) {
            Rng rng = MakeRng(options.seed, Stream::kScenario, {c, m});
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            for (std::size_t i = 0; i < c; ++i) {
              std::uniform_int_distribution<std::size_t> pick(i, grid.N() - 1);
              std::swap(perm[i], perm[pick(rng)]);
            }
            std::vector<std::size_t> nodes(perm.begin(),
                                           perm.begin() + static_cast<std::ptrdiff_t>(c));
            std::sort(nodes.begin(), nodes.end());
            best = std::max(best, bits_for(nodes, snr));
          }
          values[c] = best;
        }
        break;
      }
    }
    for (std::size_t c = c_min; c <= c_max; ++c) {
      CurvePoint& p = out[si * span + (c - c_min)];
      p.c = c;
      p.sigma_n = sigma_n;
      p.I_L = values[c];
      p.iota_L = values[c] / K;
    }
  });
  return out;
}

LeakageReport RowwiseLeakage(const InterpolationGrid& grid, const CollusionScenario& scenario,
                             std::size_t v, double s, double sigma_n,
                             const RegularizationFloor& floor, double epsilon) {
  if (v == 0) {
    Fail(ErrorCode::kInvalidArgument, "v = 0 means no masks per row; leakage is unbounded");
  }
  if (grid.T() != grid.K() * v) {
    Fail(ErrorCode::kInvalidArgument, "row-wise leakage needs grid.T() == K * v");
  }
  if (!(sigma_n > 0.0)) Fail(ErrorCode::kInvalidArgument, "sigma_n must be > 0");
  CheckScenario(grid, scenario);
  const double snr = s * s * static_cast<double>(v) / (sigma_n * sigma_n);
  CheckSnr(snr);
  const Matrix w = WeightMatrix(ScenarioZs(grid, scenario), grid.alphas());
  const Eigen::Index c = w.rows();
  const std::size_t K = grid.K();

  LeakageReport report;
  report.scenario = scenario;
  report.epsilon = epsilon;
  double total = 0.0;
  double floor_sum = 0.0;
  Matrix l(c, 1);
  Matrix l_tilde(c, static_cast<Eigen::Index>(v));
  for (std::size_t i = 0; i < K; ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    l.col(0) = w.col(col);
    for (std::size_t t = 0; t < v; ++t) {
      const auto mask_col = static_cast<Eigen::Index>(K + i * v + t);
      l_tilde.col(static_cast<Eigen::Index>(t)) = w.col(mask_col).cwiseProduct(w.col(col));
    }
    double applied = 0.0;
    total += LeakageBits(l, l_tilde, snr, floor, &applied);
    floor_sum += applied;
  }
  report.I_L = total;
  report.iota_L = total / static_cast<double>(K);
  report.regularization_floor = floor_sum / static_cast<double>(K);
  report.satisfied = report.iota_L < epsilon;
  return report;
}

double CalibrateFloor(const std::function<double(double)>& leakage, double target, double lo,
                      double hi, int iterations) {
  if (!(lo > 0.0) || !(hi > lo)) {
    Fail(ErrorCode::kInvalidArgument, "calibration bracket must satisfy 0 < lo < hi");
  }
  double log_lo = std::log(lo);
  double log_hi = std::log(hi);
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (log_lo + log_hi);
    if (leakage(std::exp(mid)) > target) {
      log_lo = mid;
    } else {
      log_hi = mid;
    }
  }
  return std::exp(0.5 * (log_lo + log_hi));
}

double UniformEntropyBits(double s) {
  if (!(s > 0.0)) Fail(ErrorCode::kInvalidArgument, "amplitude s must be > 0");
  return std::log2(2.0 * s);
}

}  // namespace pbacc
