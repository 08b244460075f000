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

#include <algorithm>
#include <cmath>
#include <string>

#include "pbacc/errors.hpp"

namespace pbacc {

std::string_view FunctionName(Function f) {
  switch (f) {
    case Function::kRelu:
      return "relu";
    case Function::kSigmoid:
      return "sigmoid";
    case Function::kSwish:
      return "swish";
    case Function::kBinaryStep:
      return "binary_step";
    case Function::kMedian:
      return "median";
    case Function::kIdentity:
      return "identity";
    case Function::kMatmul:
      return "matmul";
  }
  return "identity";
}

Function ParseFunction(std::string_view name) {
  for (Function f : {Function::kRelu, Function::kSigmoid, Function::kSwish, Function::kBinaryStep,
                     Function::kMedian, Function::kIdentity, Function::kMatmul}) {
    if (FunctionName(f) == name) return f;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown function '" + std::string(name) + "'");
}

Combine DefaultCombine(Function f) {
  return f == Function::kMedian ? Combine::kMedian : Combine::kSum;
}

double Relu(double x) { return x > 0.0 ? x : 0.0; }

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double Swish(double x) { return x * Sigmoid(x); }

double BinaryStep(double x) { return x > 0.0 ? 1.0 : 0.0; }

double ApplyPointwise(Function f, double x) {
  switch (f) {
    case Function::kRelu:
      return Relu(x);
    case Function::kSigmoid:
      return Sigmoid(x);
    case Function::kSwish:
      return Swish(x);
    case Function::kBinaryStep:
      return BinaryStep(x);
    case Function::kMedian:
    case Function::kIdentity:
      return x;
    case Function::kMatmul:
      break;
  }
  Fail(ErrorCode::kInvalidArgument, "matmul is not a pointwise function");
}

void ApplyInPlace(Function f, Matrix& m) {
  switch (f) {
    case Function::kRelu:
      m = m.cwiseMax(0.0);
      return;
    case Function::kSigmoid:
      m = m.unaryExpr([](double x) { return Sigmoid(x); });
      return;
    case Function::kSwish:
      m = m.unaryExpr([](double x) { return Swish(x); });
      return;
    case Function::kBinaryStep:
      m = m.unaryExpr([](double x) { return BinaryStep(x); });
      return;
    case Function::kMedian:
    case Function::kIdentity:
      return;
    case Function::kMatmul:
      break;
  }
  Fail(ErrorCode::kInvalidArgument, "matmul is not a pointwise function");
}

double MedianInPlace(std::span<double> values) {
  if (values.empty()) Fail(ErrorCode::kInvalidArgument, "median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                   values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace pbacc
