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

#ifndef PBACC_FUNCTIONS_HPP_
#define PBACC_FUNCTIONS_HPP_

#include <span>
#include <string_view>

#include "pbacc/types.hpp"

namespace pbacc {

enum class Function { kRelu, kSigmoid, kSwish, kBinaryStep, kMedian, kIdentity, kMatmul };

enum class Combine { kSum, kMedian };

std::string_view FunctionName(Function f);
/// Accepts relu, sigmoid, swish, binary_step, median, identity, matmul.
Function ParseFunction(std::string_view name);

/// kMedian pairs with the elementwise median over nodes; everything else sums.
Combine DefaultCombine(Function f);

double Relu(double x);
double Sigmoid(double x);
/// x * Sigmoid(x).
double Swish(double x);
/// 1 if x > 0, else 0 (so step(0) = 0).
double BinaryStep(double x);

/// Pointwise map applied before combining. Median and identity are the
/// identity map; matmul is not pointwise and throws invalid-argument.
double ApplyPointwise(Function f, double x);
void ApplyInPlace(Function f, Matrix& m);

/// Middle value; the mean of the two middle values for even counts.
/// Reorders `values`. Throws invalid-argument when empty.
double MedianInPlace(std::span<double> values);

}  // namespace pbacc

#endif  // PBACC_FUNCTIONS_HPP_
