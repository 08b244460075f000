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

#include "pbacc/berrut.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "generators.hpp"
#include "pbacc/errors.hpp"
#include "pbacc/grid.hpp"
#include "pbacc/pbss.hpp"

namespace pbacc {
namespace {

using testing::Gen;
using testing::NaiveBerrut;

std::vector<double> ToVector(std::span<const double> s) { return {s.begin(), s.end()}; }

TEST(BasisWeights, IndicatorAtPoint) {
  const auto points = ChebyshevFirstKind(6);
  const auto w = BasisWeights(points[2], points);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(w[i], i == 2 ? 1.0 : 0.0);
}

TEST(BasisWeights, SymmetricPair) {
  const std::vector<double> points{std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2};
  const auto w = BasisWeights(0.0, points);
  EXPECT_DOUBLE_EQ(w[0], 0.5);
  EXPECT_DOUBLE_EQ(w[1], 0.5);
}

TEST(BasisWeights, MatchesQuotientOracle) {
  const auto points = ChebyshevFirstKind(4);
  const auto w = BasisWeights(0.5, points);
  const auto oracle = NaiveBerrut(0.5, points);
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_NEAR(w[i], oracle[i], 1e-14);
    sum += w[i];
  }
  EXPECT_NEAR(sum, 1.0, 1e-15);
}

TEST(BasisWeights, SignsFollowConcatenatedIndex) {
  const auto grid = InterpolationGrid::Build(3, 2, 4);
  const auto alphas = ToVector(grid.alphas());
  const auto w = BasisWeights(0.9, alphas);
  const auto oracle = NaiveBerrut(0.9, alphas);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w[i], oracle[i], 1e-14);
}

TEST(EncodePlain, SinglePointIsConstant) {
  const auto grid = InterpolationGrid::Build(1, 0, 8);
  Matrix x(1, 3);
  x << 1.5, -2.0, 7.25;
  for (const Share& share : EncodePlain(x, grid)) EXPECT_EQ(share.payload, x);
}

TEST(EncodePlain, SymmetricDataCancelsAtZero) {
  const auto grid = InterpolationGrid::WithEvaluationPoints(2, 0, {0.3, 0.0});
  Matrix x(2, 1);
  x << 1.0, -1.0;
  const auto shares = EncodePlain(x, grid);
  EXPECT_NEAR(shares[1].payload(0, 0), 0.0, 1e-15);
}

TEST(EncodePlain, RejectsShapeMismatch) {
  const auto grid = InterpolationGrid::Build(4, 0, 8);
  try {
    EncodePlain(Matrix::Zero(3, 2), grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(EncodePlain, EncodingFunctionRecoversRowsAtDataPoints) {
  Gen gen(4);
  const auto grid = InterpolationGrid::Build(4, 0, 16);
  const Matrix x = gen.UniformMatrix(4, 3, -5.0, 5.0);
  const Matrix at_alphas = WeightMatrix(grid.data_alphas(), grid.alphas()) * x;
  EXPECT_LT((at_alphas - x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SampleMasks, UnitVariance) {
  const Matrix m = SampleMasks(MaskSpec{1, 1.0, 99}, 1'000'000);
  const double mean = m.mean();
  const double var = (m.array() - mean).square().sum() / static_cast<double>(m.size() - 1);
  EXPECT_GE(var, 0.99);
  EXPECT_LE(var, 1.01);
}

TEST(SampleMasks, VarianceScalesWithT) {
  const Matrix m = SampleMasks(MaskSpec{4, 2.0, 5}, 100'000);
  EXPECT_EQ(m.rows(), 4);
  const double var = m.array().square().mean();
  EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(SampleMasks, Deterministic) {
  EXPECT_EQ(SampleMasks(MaskSpec{3, 2.0, 42}, 7), SampleMasks(MaskSpec{3, 2.0, 42}, 7));
  EXPECT_NE(SampleMasks(MaskSpec{3, 2.0, 42}, 7), SampleMasks(MaskSpec{3, 2.0, 43}, 7));
}

TEST(EncodePrivate, ZeroMasksMatchDataPartOfWideBasis) {
  Gen gen(8);
  const auto grid = InterpolationGrid::Build(5, 3, 12);
  const Matrix x = gen.UniformMatrix(5, 2, -1.0, 1.0);
  const auto shares = EncodePrivate(x, grid, Matrix::Zero(3, 2));
  const Matrix w = WeightMatrix(grid.zs(), grid.alphas());
  const Matrix expected = w.leftCols(5) * x;
  for (std::size_t j = 0; j < shares.size(); ++j) {
    EXPECT_LT((shares[j].payload - expected.row(static_cast<Eigen::Index>(j))).cwiseAbs().maxCoeff(),
              1e-14);
  }
}

TEST(EncodePrivate, HandExpandedQuotient) {
  const auto grid = InterpolationGrid::Build(2, 2, 4);
  const MaskSpec spec{2, 3.0, 17};
  Matrix x(2, 1);
  x << 4.0, -1.5;
  const Matrix masks = SampleMasks(spec, 1);
  const auto shares = EncodePrivate(x, grid, spec);
  ASSERT_EQ(shares[0].z, 1.0);
  const auto q = NaiveBerrut(1.0, ToVector(grid.alphas()));
  const double expected =
      q[0] * x(0, 0) + q[1] * x(1, 0) + q[2] * masks(0, 0) + q[3] * masks(1, 0);
  EXPECT_NEAR(shares[0].payload(0, 0), expected, 1e-12);
}

TEST(Decode, SingleResultIsBroadcast) {
  const auto grid = InterpolationGrid::Build(5, 0, 10);
  Share share{3, grid.zs()[3], Matrix::Constant(1, 2, 2.5)};
  const auto result = Decode(std::span<const Share>(&share, 1), grid);
  EXPECT_EQ(result.n, 1u);
  for (Eigen::Index k = 0; k < 5; ++k) {
    EXPECT_DOUBLE_EQ(result.values(k, 0), 2.5);
    EXPECT_DOUBLE_EQ(result.values(k, 1), 2.5);
  }
}

TEST(Decode, EmptyResultsFail) {
  const auto grid = InterpolationGrid::Build(2, 0, 4);
  try {
    Decode({}, grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientResults);
  }
}

TEST(Decode, DuplicateNodeFails) {
  const auto grid = InterpolationGrid::Build(2, 0, 4);
  const auto shares = EncodePlain(Matrix::Ones(2, 1), grid);
  std::vector<Share> twice{shares[1], shares[1]};
  try {
    Decode(twice, grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(Decode, IdentityRoundTripConverges) {
  Gen gen(21);
  const Matrix x = gen.UniformMatrix(4, 3, 1.0, 10.0);
  double previous = 1.0;
  for (std::size_t n : {64, 256, 1024}) {
    const auto grid = InterpolationGrid::Build(4, 0, n);
    const auto result = Decode(EncodePlain(x, grid), grid);
    const double rme = Rme(result.values, x).rme;
    EXPECT_LT(rme, previous / 3.0) << "N=" << n;
    EXPECT_FALSE(result.ill_conditioned);
    EXPECT_GE(result.condition, 1.0);
    previous = rme;
  }
  EXPECT_LT(previous, 1e-3);
}

TEST(Decode, OrderOfResultsDoesNotMatter) {
  Gen gen(3);
  const auto grid = InterpolationGrid::Build(6, 0, 20);
  auto shares = EncodePlain(gen.UniformMatrix(6, 2, -1.0, 1.0), grid);
  const Matrix forward = Decode(shares, grid).values;
  std::reverse(shares.begin(), shares.end());
  EXPECT_EQ(Decode(shares, grid).values, forward);
}

TEST(ShareJson, RoundTrip) {
  Gen gen(1);
  const Share share{7, -0.123456789012345, gen.UniformMatrix(2, 3, -1e5, 1e5)};
  const Share back = ShareFromJson(ShareToJson(share));
  EXPECT_EQ(back.node_index, share.node_index);
  EXPECT_EQ(back.z, share.z);
  EXPECT_EQ(back.payload, share.payload);
}

TEST(StackCoefficients, PacksRowsPerPoint) {
  Matrix data(4, 2);
  data << 1, 2, 3, 4, 5, 6, 7, 8;
  const Matrix stacked = StackCoefficients(data, nullptr, 2, 0);
  ASSERT_EQ(stacked.rows(), 2);
  ASSERT_EQ(stacked.cols(), 4);
  EXPECT_EQ(stacked(0, 0), 1);
  EXPECT_EQ(stacked(0, 3), 4);
  EXPECT_EQ(stacked(1, 0), 5);
  EXPECT_THROW(StackCoefficients(data, nullptr, 3, 0), Error);
}

// Properties.

TEST(BerrutProperty, PartitionOfUnity) {
  Gen gen(101);
  for (int trial = 0; trial < 200; ++trial) {
    const auto grid = gen.Grid(40, 40, 100);
    for (int probe = 0; probe < 10; ++probe) {
      const double z = gen.Uniform(-1.0, 1.0);
      const auto w = BasisWeights(z, grid.alphas());
      EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
    }
    for (std::size_t i = 0; i < grid.alphas().size(); ++i) {
      const auto w = BasisWeights(grid.alphas()[i], grid.alphas());
      for (std::size_t k = 0; k < w.size(); ++k) ASSERT_EQ(w[k], k == i ? 1.0 : 0.0);
    }
  }
}

TEST(BerrutProperty, EncodingIsLinear) {
  Gen gen(202);
  for (int trial = 0; trial < 50; ++trial) {
    const auto grid = gen.Grid(16, 0, 64);
    const std::size_t L = gen.Size(1, 4);
    const Matrix x = gen.UniformMatrix(grid.K(), L, -1.0, 1.0);
    const Matrix y = gen.UniformMatrix(grid.K(), L, -1.0, 1.0);
    const double a = gen.Uniform(-3.0, 3.0);
    const double b = gen.Uniform(-3.0, 3.0);
    const auto sx = EncodePlain(x, grid);
    const auto sy = EncodePlain(y, grid);
    const auto sxy = EncodePlain(a * x + b * y, grid);
    for (std::size_t j = 0; j < grid.N(); ++j) {
      EXPECT_LT((sxy[j].payload - (a * sx[j].payload + b * sy[j].payload)).cwiseAbs().maxCoeff(),
                1e-12);
    }
  }
}

TEST(BerrutProperty, RoundTripAtDataPointsIsExact) {
  Gen gen(303);
  for (int trial = 0; trial < 50; ++trial) {
    const auto grid = gen.Grid(16, 16, 64);
    const std::size_t L = gen.Size(1, 3);
    const Matrix x = gen.UniformMatrix(grid.K(), L, -100.0, 100.0);
    const Matrix masks = gen.UniformMatrix(grid.T(), L, -1e4, 1e4);
    const Matrix stacked = StackCoefficients(x, &masks, grid.K(), grid.T());
    const Matrix at_alphas = WeightMatrix(grid.data_alphas(), grid.alphas()) * stacked;
    EXPECT_EQ(at_alphas, x);
  }
}

TEST(BerrutProperty, DecoderIsExactAtNodes) {
  Gen gen(404);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = gen.Size(1, 50);
    std::vector<double> nodes = ChebyshevSecondKind(n + 1);
    nodes.pop_back();
    const Matrix values = gen.UniformMatrix(n, 2, -10.0, 10.0);
    const Matrix back = BerrutInterpolate(nodes, values, nodes);
    EXPECT_EQ(back, values);
  }
}

TEST(BerrutProperty, MoreResultsDecodeBetter) {
  std::vector<double> full;
  std::vector<double> half;
  const auto grid = InterpolationGrid::Build(8, 0, 64);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Gen gen(seed);
    const Matrix x = gen.UniformMatrix(8, 2, 1.0, 10.0);
    const auto shares = EncodePlain(x, grid);
    full.push_back(Rme(Decode(shares, grid).values, x).rme);
    std::vector<Share> subset(shares.begin(), shares.end());
    std::shuffle(subset.begin(), subset.end(), gen.engine());
    subset.resize(shares.size() / 2);
    half.push_back(Rme(Decode(subset, grid).values, x).rme);
  }
  std::nth_element(full.begin(), full.begin() + 10, full.end());
  std::nth_element(half.begin(), half.begin() + 10, half.end());
  EXPECT_LE(full[10], half[10]);
}

}  // namespace
}  // namespace pbacc
