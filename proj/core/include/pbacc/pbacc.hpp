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

#ifndef PBACC_PBACC_HPP_
#define PBACC_PBACC_HPP_

#include "pbacc/berrut.hpp"
#include "pbacc/errors.hpp"
#include "pbacc/experiment.hpp"
#include "pbacc/functions.hpp"
#include "pbacc/grid.hpp"
#include "pbacc/matrix_codec.hpp"
#include "pbacc/pbss.hpp"
#include "pbacc/privacy.hpp"
#include "pbacc/rng.hpp"
#include "pbacc/svg.hpp"
#include "pbacc/types.hpp"

#endif  // PBACC_PBACC_HPP_
