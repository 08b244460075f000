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

#ifndef PBACC_RNG_HPP_
#define PBACC_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pbacc {

// Stream labels for StreamSeed. Each (label, index...) tuple names an
// independent stream derived from one master seed.
enum class Stream : std::uint64_t {
  kInput = 1,
  kMask = 2,
  kDpNoise = 3,
  kStragglers = 4,
  kSparsity = 5,
  kScenario = 6,
  kMatrixA = 7,
  kMatrixB = 8,
  kMaskA = 9,
  kMaskB = 10,
};

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t StreamSeed(std::uint64_t master, Stream stream,
                                std::initializer_list<std::uint64_t> indices = {}) {
  std::uint64_t h = SplitMix64(master ^ 0x5042414343ULL);
  h = SplitMix64(h ^ static_cast<std::uint64_t>(stream));
  for (std::uint64_t i : indices) h = SplitMix64(h ^ (i + 0x632be59bd9b4e019ULL));
  return h;
}

using Rng = std::mt19937_64;

inline Rng MakeRng(std::uint64_t master, Stream stream,
                   std::initializer_list<std::uint64_t> indices = {}) {
  return Rng(StreamSeed(master, stream, indices));
}

}  // namespace pbacc

#endif  // PBACC_RNG_HPP_
