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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "generators.hpp"
#include "pbacc/berrut.hpp"
#include "pbacc/errors.hpp"

namespace pbacc {
namespace {

using testing::Gen;

// Closed-form symmetric 2x2 eigenvalue clamp.
Matrix Clamp2(const Matrix& m, double floor) {
  const double a = m(0, 0);
  const double b = m(0, 1);
  const double d = m(1, 1);
  const double mid = 0.5 * (a + d);
  const double rad = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  const double l1 = mid + rad;
  const double l2 = mid - rad;
  if (rad == 0.0) return Matrix::Identity(2, 2) * std::max(l1, floor);
  Eigen::Vector2d v1(b, l1 - a);
  if (v1.norm() < 1e-300) v1 = Eigen::Vector2d(l1 - d, b);
  v1.normalize();
  const Eigen::Vector2d v2(-v1(1), v1(0));
  return std::max(l1, floor) * v1 * v1.transpose() + std::max(l2, floor) * v2 * v2.transpose();
}

double Det2(const Matrix& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

TEST(InterpolationMatrices, SingleRowIsPartitionOfUnity) {
  const auto grid = InterpolationGrid::Build(6, 4, 20);
  const auto m = BuildInterpolationMatrices(grid, CollusionScenario::Prefix(1));
  EXPECT_NEAR(m.Q.sum() + m.Q_tilde.sum(), 1.0, 1e-14);
}

TEST(InterpolationMatrices, EntriesAreBasisWeights) {
  const auto grid = InterpolationGrid::Build(2, 2, 8);
  const auto m = BuildInterpolationMatrices(grid, CollusionScenario{{0}});
  const auto w = BasisWeights(grid.zs()[0], grid.alphas());
  EXPECT_EQ(m.Q(0, 0), w[0]);
  EXPECT_EQ(m.Q(0, 1), w[1]);
  EXPECT_EQ(m.Q_tilde(0, 0), w[2]);
  EXPECT_EQ(m.Q_tilde(0, 1), w[3]);
}

TEST(InterpolationMatrices, RowsStackUnderSubsetGrowth) {
  const auto grid = InterpolationGrid::Build(5, 3, 16);
  const auto three = BuildInterpolationMatrices(grid, CollusionScenario::Prefix(3));
  for (std::size_t i = 0; i < 3; ++i) {
    const auto one = BuildInterpolationMatrices(grid, CollusionScenario{{i}});
    EXPECT_EQ(three.Q.row(static_cast<Eigen::Index>(i)), one.Q.row(0));
    EXPECT_EQ(three.Q_tilde.row(static_cast<Eigen::Index>(i)), one.Q_tilde.row(0));
  }
}

TEST(RegularizeCovariance, Examples) {
  EXPECT_LT((RegularizeCovariance(Matrix::Identity(3, 3), 0.1) - Matrix::Identity(3, 3))
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-18;
  const Matrix out = RegularizeCovariance(d, 1e-6);
  EXPECT_NEAR(out(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(out(1, 1), 1e-6, 1e-18);
  EXPECT_NEAR(out(0, 1), 0.0, 1e-18);
}

TEST(RegularizeCovariance, RankDeficientGramReachesFloor) {
  Gen gen(9);
  const Matrix g = gen.LowRankGram(8, 3);
  const Matrix out = RegularizeCovariance(g, 1e-4);
  Eigen::EigenSolver<Eigen::MatrixXd> oracle(Eigen::MatrixXd(out), false);
  const double min_eig = oracle.eigenvalues().real().minCoeff();
  EXPECT_NEAR(min_eig, 1e-4, 1e-12);
}

TEST(RegularizeCovariance, RejectsNonSymmetric) {
  Matrix m(2, 2);
  m << 1, 2, 0, 1;
  try {
    RegularizeCovariance(m, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(LeakageBound, VanishesWithHugeNoise) {
  const auto grid = InterpolationGrid::Build(10, 10, 40);
  const auto floor = RegularizationFloor::Relative(1e-10);
  double previous = 0.0;
  for (double sigma : {1e8, 1e12, 1e16, 1e20}) {
    const auto report = LeakageBound(grid, CollusionScenario::Prefix(5), 100.0, sigma, floor);
    EXPECT_GE(report.I_L, 0.0);
    if (previous > 0.0) {
      EXPECT_LT(report.I_L, previous) << sigma;
    }
    previous = report.I_L;
  }
  EXPECT_LT(previous, 1e-12);
}

TEST(LeakageBound, ReportsResolvedRelativeFloor) {
  const auto grid = InterpolationGrid::Build(4, 4, 16);
  const auto scenario = CollusionScenario::Prefix(3);
  const auto m = BuildInterpolationMatrices(grid, scenario);
  const Matrix sigma_t = m.Q_tilde * m.Q_tilde.transpose();
  const auto report =
      LeakageBound(grid, scenario, 1.0, 1.0, RegularizationFloor::Relative(1e-3));
  EXPECT_NEAR(report.regularization_floor, 1e-3 * sigma_t.trace() / 3.0, 1e-18);
}

TEST(LeakageCurve, ZeroColludersLeakNothing) {
  const auto grid = InterpolationGrid::Build(4, 4, 16);
  const auto curve =
      LeakageCurve(grid, 10.0, {100.0}, 0, 2, RegularizationFloor::Absolute(1e-6));
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_EQ(curve[0].c, 0u);
  EXPECT_EQ(curve[0].I_L, 0.0);
  EXPECT_GT(curve[2].I_L, 0.0);
}

TEST(LeakageCurve, SinglePointPerSigma) {
  const auto grid = InterpolationGrid::Build(4, 4, 16);
  const auto curve =
      LeakageCurve(grid, 10.0, {100.0, 200.0}, 1, 1, RegularizationFloor::Absolute(1e-6));
  ASSERT_EQ(curve.size(), 2u);
  EXPECT_EQ(curve[0].sigma_n, 100.0);
  EXPECT_EQ(curve[1].sigma_n, 200.0);
}

TEST(RowwiseLeakage, ZeroMasksPerRowIsRejected) {
  const auto grid = InterpolationGrid::Build(4, 4, 16);
  try {
    RowwiseLeakage(grid, CollusionScenario::Prefix(2), 0, 1.0, 1.0,
                   RegularizationFloor::Absolute(1e-6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(RowwiseLeakage, MatchesTwoByTwoDeterminants) {
  const auto grid = InterpolationGrid::Build(4, 4, 32);
  const auto scenario = CollusionScenario{{3, 17}};
  const double s = 10.0;
  const double sigma_n = 50.0;
  const double floor = 1e-8;
  const double snr = s * s / (sigma_n * sigma_n);
  const auto qa = BasisWeights(grid.zs()[3], grid.alphas());
  const auto qb = BasisWeights(grid.zs()[17], grid.alphas());
  double total = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    Matrix l(2, 1);
    l << qa[i], qb[i];
    Matrix lt(2, 1);
    lt << qa[4 + i] * qa[i], qb[4 + i] * qb[i];
    const Matrix reg = Clamp2(lt * lt.transpose(), floor);
    const Matrix arg = Matrix::Identity(2, 2) + snr * reg.inverse() * (l * l.transpose());
    total += std::log2(Det2(arg));
  }
  const auto report =
      RowwiseLeakage(grid, scenario, 1, s, sigma_n, RegularizationFloor::Absolute(floor));
  EXPECT_NEAR(report.I_L, total, 1e-8 * std::abs(total));
  EXPECT_NEAR(report.iota_L, total / 4.0, 1e-8 * std::abs(total));
}

TEST(RowwiseLeakage, SingleRowUsesSharedDeterminant) {
  const auto grid = InterpolationGrid::Build(1, 1, 12);
  const auto scenario = CollusionScenario::Prefix(4);
  const auto m = BuildInterpolationMatrices(grid, scenario);
  const Matrix lt = m.Q_tilde.cwiseProduct(m.Q);
  const auto floor = RegularizationFloor::Relative(1e-6);
  const double expected = LeakageBits(m.Q, lt, 4.0, floor);
  const auto report = RowwiseLeakage(grid, scenario, 1, 2.0, 1.0, floor);
  EXPECT_DOUBLE_EQ(report.I_L, expected);
}

TEST(CalibrateFloor, InvertsMonotoneFunction) {
  const auto fn = [](double floor) { return 20.0 - std::log10(floor); };
  const double floor = CalibrateFloor(fn, 14.28);
  EXPECT_NEAR(fn(floor), 14.28, 1e-9);
}

TEST(UniformEntropyBits, Values) {
  EXPECT_NEAR(UniformEntropyBits(1e4), 14.287712379549449, 1e-12);
  EXPECT_NEAR(UniformEntropyBits(100.0), std::log2(200.0), 1e-15);
}

TEST(ScenarioPolicy, NamesRoundTrip) {
  for (auto p : {ScenarioPolicy::kPrefix, ScenarioPolicy::kGreedy, ScenarioPolicy::kSampled}) {
    EXPECT_EQ(ParseScenarioPolicy(ScenarioPolicyName(p)), p);
  }
  EXPECT_THROW(ParseScenarioPolicy("worst"), Error);
}

// Properties.

TEST(PrivacyProperty, LogDetMatchesEigenOracle) {
  Gen gen(77);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t c = gen.Size(1, 50);
    const std::size_t K = gen.Size(1, 60);
    const std::size_t T = gen.Size(1, 60);
    const Matrix Q = gen.UniformMatrix(c, K, -1.0, 1.0);
    const Matrix Qt = gen.UniformMatrix(c, T, -1.0, 1.0);
    const double snr = std::pow(10.0, gen.Uniform(-4.0, 2.0));
    const auto floor = gen.Uniform(0.0, 1.0) < 0.5 ? RegularizationFloor::Relative(1e-6)
                                                   : RegularizationFloor::Absolute(1e-3);
    const double fast = LeakageBits(Q, Qt, snr, floor);
    const double oracle = LeakageBitsByEigenvalues(Q, Qt, snr, floor);
    EXPECT_NEAR(fast, oracle, 1e-8 * std::max(1.0, std::abs(oracle)))
        << "c=" << c << " K=" << K << " T=" << T;
  }
}

TEST(PrivacyProperty, RegularizationIsIdempotent) {
  Gen gen(78);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t p = gen.Size(1, 30);
    const Matrix g = gen.LowRankGram(p, gen.Size(1, p));
    const double floor = std::pow(10.0, gen.Uniform(-8.0, 0.0));
    const Matrix once = RegularizeCovariance(g, floor);
    const Matrix twice = RegularizeCovariance(once, floor);
    EXPECT_LT((twice - once).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, once.norm()));
  }
}

TEST(PrivacyProperty, MonotoneInCollusionAndNoise) {
  Gen gen(79);
  for (int trial = 0; trial < 15; ++trial) {
    const auto grid = gen.Grid(12, 12, 40);
    if (grid.T() == 0) continue;
    const double s = 10.0;
    const double sigma = gen.Uniform(5.0, 50.0);
    // At or above trace(Q~ Q~^T) the clamp is complete.
    const auto floor = RegularizationFloor::Absolute(static_cast<double>(grid.N()));
    const auto curve = LeakageCurve(grid, s, {sigma, 2 * sigma}, 1, grid.N(), floor);
    const std::size_t n = grid.N();
    for (std::size_t c = 1; c < n; ++c) {
      EXPECT_GE(curve[c].I_L, curve[c - 1].I_L - 1e-9);
    }
    for (std::size_t c = 0; c < n; ++c) {
      EXPECT_GE(curve[c].I_L, 0.0);
      EXPECT_LT(curve[n + c].I_L, curve[c].I_L) << "c=" << c + 1;
    }
  }
}

TEST(PrivacyProperty, GreedyIncrementsDoNotGrow) {
  Gen gen(80);
  for (int trial = 0; trial < 10; ++trial) {
    const auto grid = gen.Grid(10, 10, 40);
    if (grid.T() == 0) continue;
    CurveOptions options;
    options.policy = ScenarioPolicy::kGreedy;
    const auto curve = LeakageCurve(grid, 1e3, {30.0}, 0, grid.N(),
                                    RegularizationFloor::Absolute(static_cast<double>(grid.N())),
                                    options);
    for (std::size_t c = 2; c < curve.size(); ++c) {
      const double prev = curve[c - 1].I_L - curve[c - 2].I_L;
      const double next = curve[c].I_L - curve[c - 1].I_L;
      EXPECT_LE(next, prev + 1e-9 * std::max(1.0, curve[c].I_L)) << "c=" << c;
    }
  }
}

TEST(PrivacyProperty, SampledPolicyIsDeterministic) {
  const auto grid = InterpolationGrid::Build(6, 6, 30);
  CurveOptions options;
  options.policy = ScenarioPolicy::kSampled;
  options.samples = 8;
  options.seed = 5;
  const auto floor = RegularizationFloor::Absolute(1e-5);
  const auto a = LeakageCurve(grid, 10.0, {40.0}, 1, 6, floor, options);
  options.jobs = 4;
  const auto b = LeakageCurve(grid, 10.0, {40.0}, 1, 6, floor, options);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].I_L, b[i].I_L);
}

}  // namespace
}  // namespace pbacc
