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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "pbacc/errors.hpp"

namespace pbacc {
namespace {

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a pbacc::Error";
  return ErrorCode::kConfig;
}

TEST(ChebyshevFirstKind, SmallCounts) {
  EXPECT_EQ(ChebyshevFirstKind(1), std::vector<double>{0.0});
  const auto two = ChebyshevFirstKind(2);
  EXPECT_NEAR(two[0], std::numbers::sqrt2 / 2, 2e-16);
  EXPECT_NEAR(two[1], -std::numbers::sqrt2 / 2, 2e-16);
  const auto three = ChebyshevFirstKind(3);
  EXPECT_NEAR(three[0], std::cos(std::numbers::pi / 6), 2e-16);
  EXPECT_EQ(three[1], 0.0);
  EXPECT_NEAR(three[2], std::cos(5 * std::numbers::pi / 6), 2e-16);
}

TEST(ChebyshevFirstKind, ZeroCountIsRejected) {
  EXPECT_EQ(CodeOf([] { ChebyshevFirstKind(0); }), ErrorCode::kInvalidArgument);
}

TEST(ChebyshevSecondKind, SmallCounts) {
  EXPECT_EQ(ChebyshevSecondKind(2), (std::vector<double>{1.0, -1.0}));
  EXPECT_EQ(ChebyshevSecondKind(3), (std::vector<double>{1.0, 0.0, -1.0}));
  const auto four = ChebyshevSecondKind(4);
  ASSERT_EQ(four.size(), 4u);
  EXPECT_NEAR(four[1], 0.5, 1e-15);
  EXPECT_NEAR(four[2], -0.5, 1e-15);
  EXPECT_EQ(CodeOf([] { ChebyshevSecondKind(1); }), ErrorCode::kInvalidArgument);
}

TEST(ShiftedFirstKind, Examples) {
  EXPECT_EQ(ShiftedFirstKind(1, 10.0), std::vector<double>{10.0});
  const auto two = ShiftedFirstKind(2, 10.0);
  EXPECT_NEAR(two[0], 10.7071067811865476, 1e-14);
  EXPECT_NEAR(two[1], 9.2928932188134524, 1e-14);
  EXPECT_EQ(ShiftedFirstKind(2, 0.0), ChebyshevFirstKind(2));
}

TEST(InterpolationGrid, SmallGrid) {
  const auto grid = InterpolationGrid::Build(2, 0, 4);
  ASSERT_EQ(grid.alphas().size(), 2u);
  EXPECT_NEAR(grid.alphas()[0], std::numbers::sqrt2 / 2, 2e-16);
  const std::vector<double> zs(grid.zs().begin(), grid.zs().end());
  ASSERT_EQ(zs.size(), 4u);
  EXPECT_EQ(zs[0], 1.0);
  EXPECT_NEAR(zs[1], 0.5, 1e-15);
  EXPECT_NEAR(zs[2], -0.5, 1e-15);
  EXPECT_EQ(zs[3], -1.0);
}

TEST(InterpolationGrid, OddCountsCollideAtZero) {
  EXPECT_EQ(CodeOf([] { InterpolationGrid::Build(3, 0, 3); }), ErrorCode::kGridCollision);
}

TEST(InterpolationGrid, ReferenceOperatingPoint) {
  const auto grid = InterpolationGrid::Build(1000, 1000, 200, 10.0);
  EXPECT_EQ(grid.K(), 1000u);
  EXPECT_EQ(grid.T(), 1000u);
  EXPECT_EQ(grid.N(), 200u);
  EXPECT_EQ(grid.alphas().size(), 2000u);
}

TEST(InterpolationGrid, ShiftInsideDataRangeIsRejected) {
  EXPECT_EQ(CodeOf([] { InterpolationGrid::Build(4, 2, 8, 1.5); }), ErrorCode::kInvalidShift);
  EXPECT_EQ(CodeOf([] { InterpolationGrid::Build(4, 2, 8, -2.0); }), ErrorCode::kInvalidShift);
  EXPECT_NO_THROW(InterpolationGrid::Build(4, 2, 8, -10.0));
}

TEST(InterpolationGrid, CustomEvaluationPointsAreChecked) {
  const double alpha = ChebyshevFirstKind(2)[0];
  EXPECT_EQ(CodeOf([&] { InterpolationGrid::WithEvaluationPoints(2, 0, {alpha, 0.1}); }),
            ErrorCode::kGridCollision);
  EXPECT_NO_THROW(InterpolationGrid::WithEvaluationPoints(2, 1, {0.2, 0.1}));
}

TEST(InterpolationGridProperty, FamiliesAreDistinctAndOrdered) {
  testing::Gen gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto grid = gen.Grid(64, 64, 256, gen.Uniform(0.0, 1.0) < 0.5 ? 10.0 : -4.0);
    for (std::size_t i = 1; i < grid.K(); ++i) {
      EXPECT_LT(grid.data_alphas()[i], grid.data_alphas()[i - 1]);
    }
    for (std::size_t i = 1; i < grid.T(); ++i) {
      EXPECT_LT(grid.mask_alphas()[i], grid.mask_alphas()[i - 1]);
    }
    for (std::size_t i = 1; i < grid.N(); ++i) EXPECT_LT(grid.zs()[i], grid.zs()[i - 1]);
    EXPECT_EQ(grid.zs().front(), 1.0);
    EXPECT_EQ(grid.zs().back(), -1.0);
    for (double z : grid.zs()) {
      for (double a : grid.alphas()) EXPECT_GT(std::abs(z - a), kCollisionGuard);
    }
  }
}

TEST(ChebyshevProperty, SymmetricAboutZero) {
  for (std::size_t n = 1; n < 200; ++n) {
    const auto first = ChebyshevFirstKind(n);
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(first[j], -first[n - 1 - j], 1e-15);
    if (n >= 2) {
      const auto second = ChebyshevSecondKind(n);
      EXPECT_EQ(second.front(), 1.0);
      EXPECT_EQ(second.back(), -1.0);
    }
  }
}

}  // namespace
}  // namespace pbacc
