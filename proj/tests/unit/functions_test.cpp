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

#include "pbacc/functions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pbacc/errors.hpp"

namespace pbacc {
namespace {

std::vector<double> SamplePoints() {
  std::vector<double> xs(10'000);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = -50.0 + 100.0 * static_cast<double>(i) / static_cast<double>(xs.size() - 1);
  }
  return xs;
}

TEST(Functions, ClosedFormsOnGrid) {
  for (double x : SamplePoints()) {
    const double sig = 1.0 / (1.0 + std::exp(-x));
    EXPECT_EQ(Relu(x), x > 0.0 ? x : 0.0);
    EXPECT_NEAR(Sigmoid(x), sig, 1e-15);
    EXPECT_NEAR(Swish(x), x * sig, 1e-13);
    EXPECT_EQ(BinaryStep(x), x > 0.0 ? 1.0 : 0.0);
  }
}

TEST(Functions, StepAtZeroIsZero) {
  EXPECT_EQ(BinaryStep(0.0), 0.0);
  EXPECT_EQ(BinaryStep(-0.0), 0.0);
  EXPECT_EQ(BinaryStep(1e-300), 1.0);
}

TEST(Functions, SigmoidSaturatesWithoutOverflow) {
  EXPECT_EQ(Sigmoid(1000.0), 1.0);
  EXPECT_EQ(Sigmoid(-1000.0), 0.0);
  EXPECT_TRUE(std::isfinite(Swish(-1000.0)));
  EXPECT_NEAR(Sigmoid(-30.0), std::exp(-30.0) / (1.0 + std::exp(-30.0)), 1e-28);
}

TEST(Functions, ApplyPointwiseDispatch) {
  EXPECT_EQ(ApplyPointwise(Function::kRelu, -2.0), 0.0);
  EXPECT_EQ(ApplyPointwise(Function::kIdentity, -2.0), -2.0);
  EXPECT_EQ(ApplyPointwise(Function::kMedian, -2.0), -2.0);
  EXPECT_THROW(ApplyPointwise(Function::kMatmul, 1.0), Error);
  Matrix m(1, 3);
  m << -1.0, 0.0, 2.0;
  ApplyInPlace(Function::kBinaryStep, m);
  EXPECT_EQ(m(0, 0), 0.0);
  EXPECT_EQ(m(0, 1), 0.0);
  EXPECT_EQ(m(0, 2), 1.0);
}

TEST(Functions, Median) {
  std::vector<double> odd{9.0, 1.0, 5.0};
  EXPECT_EQ(MedianInPlace(odd), 5.0);
  std::vector<double> even{4.0, 1.0, 3.0, 2.0};
  EXPECT_EQ(MedianInPlace(even), 2.5);
  std::vector<double> one{-7.0};
  EXPECT_EQ(MedianInPlace(one), -7.0);
  std::vector<double> none;
  EXPECT_THROW(MedianInPlace(none), Error);
}

TEST(Functions, NamesRoundTrip) {
  for (auto f : {Function::kRelu, Function::kSigmoid, Function::kSwish, Function::kBinaryStep,
                 Function::kMedian, Function::kIdentity, Function::kMatmul}) {
    EXPECT_EQ(ParseFunction(FunctionName(f)), f);
  }
  EXPECT_THROW(ParseFunction("tanh"), Error);
  EXPECT_EQ(DefaultCombine(Function::kMedian), Combine::kMedian);
  EXPECT_EQ(DefaultCombine(Function::kRelu), Combine::kSum);
}

}  // namespace
}  // namespace pbacc
