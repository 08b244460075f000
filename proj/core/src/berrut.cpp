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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pbacc/errors.hpp"
#include "pbacc/rng.hpp"

namespace pbacc {

namespace {

void FillWeights(double z, std::span<const double> points, double* out) {
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(z - points[i]) < kPoleTolerance) {
      std::fill(out, out + n, 0.0);
      out[i] = 1.0;
      return;
    }
  }
  double denom = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double term = ((i % 2 == 0) ? 1.0 : -1.0) / (z - points[i]);
    out[i] = term;
    denom += term;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] /= denom;
}

std::vector<Share> SplitShares(const Matrix& encoded, const InterpolationGrid& grid,
                               std::size_t rows_per_point, std::size_t cols) {
  std::vector<Share> shares(grid.N());
  for (std::size_t j = 0; j < grid.N(); ++j) {
    shares[j].node_index = j;
    shares[j].z = grid.zs()[j];
    shares[j].payload = Eigen::Map<const Matrix>(encoded.row(j).data(),
                                                 static_cast<Eigen::Index>(rows_per_point),
                                                 static_cast<Eigen::Index>(cols));
  }
  return shares;
}

void CheckRowsPerPoint(std::size_t rows_per_point) {
  if (rows_per_point == 0) Fail(ErrorCode::kInvalidArgument, "rows_per_point must be >= 1");
}

}  // namespace

std::vector<double> BasisWeights(double z, std::span<const double> points) {
  std::vector<double> out(points.size());
  if (!points.empty()) FillWeights(z, points, out.data());
  return out;
}

Matrix WeightMatrix(std::span<const double> zs, std::span<const double> points) {
  Matrix out(static_cast<Eigen::Index>(zs.size()), static_cast<Eigen::Index>(points.size()));
  for (std::size_t h = 0; h < zs.size(); ++h) {
    FillWeights(zs[h], points, out.row(static_cast<Eigen::Index>(h)).data());
  }
  return out;
}

Matrix StackCoefficients(const Matrix& data, const Matrix* masks, std::size_t points,
                         std::size_t mask_points) {
  if (points == 0 || data.rows() == 0 || data.rows() % static_cast<Eigen::Index>(points) != 0) {
    std::ostringstream msg;
    msg << "data has " << data.rows() << " rows, not a positive multiple of " << points
        << " interpolation points";
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  const Eigen::Index r = data.rows() / static_cast<Eigen::Index>(points);
  const Eigen::Index width = r * data.cols();
  const Eigen::Index total = static_cast<Eigen::Index>(points + mask_points);
  Matrix stacked(total, width);
  stacked.topRows(static_cast<Eigen::Index>(points)) =
      Eigen::Map<const Matrix>(data.data(), static_cast<Eigen::Index>(points), width);
  if (mask_points > 0) {
    if (masks == nullptr || masks->cols() != data.cols() ||
        masks->rows() != static_cast<Eigen::Index>(mask_points) * r) {
      std::ostringstream msg;
      msg << "masks must be " << static_cast<Eigen::Index>(mask_points) * r << "x" << data.cols();
      Fail(ErrorCode::kInvalidArgument, msg.str());
    }
    stacked.bottomRows(static_cast<Eigen::Index>(mask_points)) =
        Eigen::Map<const Matrix>(masks->data(), static_cast<Eigen::Index>(mask_points), width);
  }
  return stacked;
}

std::vector<Share> EncodePlain(const Matrix& data, const InterpolationGrid& grid,
                               std::size_t rows_per_point) {
  CheckRowsPerPoint(rows_per_point);
  if (grid.T() != 0) Fail(ErrorCode::kInvalidArgument, "EncodePlain requires a grid with T = 0");
  if (data.rows() != static_cast<Eigen::Index>(grid.K() * rows_per_point) || data.cols() < 1) {
    Fail(ErrorCode::kInvalidArgument, "data rows must equal grid.K() * rows_per_point");
  }
  const Matrix stacked = StackCoefficients(data, nullptr, grid.K(), 0);
  const Matrix encoded = WeightMatrix(grid.zs(), grid.alphas()) * stacked;
  return SplitShares(encoded, grid, rows_per_point, static_cast<std::size_t>(data.cols()));
}

Matrix SampleMasks(const MaskSpec& spec, std::size_t cols) {
  if (spec.T == 0) Fail(ErrorCode::kInvalidArgument, "SampleMasks requires T >= 1");
  if (!(spec.sigma_n > 0.0)) Fail(ErrorCode::kInvalidArgument, "sigma_n must be > 0");
  Rng rng(StreamSeed(spec.seed, Stream::kMask));
  std::normal_distribution<double> dist(0.0,
                                        spec.sigma_n / std::sqrt(static_cast<double>(spec.T)));
  Matrix masks(static_cast<Eigen::Index>(spec.T), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < masks.size(); ++i) masks.data()[i] = dist(rng);
  return masks;
}

std::vector<Share> EncodePrivate(const Matrix& data, const InterpolationGrid& grid,
                                 const Matrix& masks, std::size_t rows_per_point) {
  CheckRowsPerPoint(rows_per_point);
  if (grid.T() == 0) Fail(ErrorCode::kInvalidArgument, "EncodePrivate requires T >= 1");
  if (data.rows() != static_cast<Eigen::Index>(grid.K() * rows_per_point) || data.cols() < 1) {
    Fail(ErrorCode::kInvalidArgument, "data rows must equal grid.K() * rows_per_point");
  }
  const Matrix stacked = StackCoefficients(data, &masks, grid.K(), grid.T());
  const Matrix encoded = WeightMatrix(grid.zs(), grid.alphas()) * stacked;
  return SplitShares(encoded, grid, rows_per_point, static_cast<std::size_t>(data.cols()));
}

std::vector<Share> EncodePrivate(const Matrix& data, const InterpolationGrid& grid,
                                 const MaskSpec& spec, std::size_t rows_per_point) {
  CheckRowsPerPoint(rows_per_point);
  if (spec.T != grid.T() * rows_per_point) {
    Fail(ErrorCode::kInvalidArgument, "mask count must equal grid.T() * rows_per_point");
  }
  return EncodePrivate(data, grid, SampleMasks(spec, static_cast<std::size_t>(data.cols())),
                       rows_per_point);
}

Matrix BerrutInterpolate(std::span<const double> nodes, const Matrix& values,
                         std::span<const double> targets, double* condition) {
  if (nodes.empty()) Fail(ErrorCode::kInsufficientResults, "no results to decode");
  if (values.rows() != static_cast<Eigen::Index>(nodes.size())) {
    Fail(ErrorCode::kInvalidArgument, "one value row per node is required");
  }
  const Matrix weights = WeightMatrix(targets, nodes);
  if (condition != nullptr) {
    *condition = weights.size() == 0 ? 1.0 : weights.cwiseAbs().rowwise().sum().maxCoeff();
  }
  Matrix out = Matrix::Zero(weights.rows(), values.cols());
  // Fixed left-to-right accumulation over nodes.
  for (Eigen::Index i = 0; i < weights.cols(); ++i) {
    out.noalias() += weights.col(i) * values.row(i);
  }
  return out;
}

DecodingResult Decode(std::span<const Share> results, const InterpolationGrid& grid) {
  if (results.empty()) Fail(ErrorCode::kInsufficientResults, "no results to decode");
  std::vector<std::size_t> order(results.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return results[a].node_index < results[b].node_index;
  });
  const Eigen::Index rows = results[order[0]].payload.rows();
  const Eigen::Index cols = results[order[0]].payload.cols();
  if (rows < 1 || cols < 1) Fail(ErrorCode::kInvalidArgument, "empty share payload");

  DecodingResult out;
  std::vector<double> nodes;
  Matrix values(static_cast<Eigen::Index>(results.size()), rows * cols);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Share& share = results[order[k]];
    if (share.node_index >= grid.N()) {
      Fail(ErrorCode::kInvalidArgument, "share from node outside the grid");
    }
    if (k > 0 && share.node_index == out.used_nodes.back()) {
      Fail(ErrorCode::kInvalidArgument, "duplicate share for one node");
    }
    if (std::abs(share.z - grid.zs()[share.node_index]) > kCollisionGuard) {
      Fail(ErrorCode::kInvalidArgument, "share z does not match the grid evaluation point");
    }
    if (share.payload.rows() != rows || share.payload.cols() != cols) {
      Fail(ErrorCode::kInvalidArgument, "share payload shapes differ");
    }
    out.used_nodes.push_back(share.node_index);
    nodes.push_back(share.z);
    values.row(static_cast<Eigen::Index>(k)) =
        Eigen::Map<const Eigen::RowVectorXd>(share.payload.data(), rows * cols);
  }
  out.n = out.used_nodes.size();
  const Matrix decoded = BerrutInterpolate(nodes, values, grid.data_alphas(), &out.condition);
  out.ill_conditioned = !(out.condition <= kIllConditionedThreshold);
  out.values = Eigen::Map<const Matrix>(decoded.data(),
                                        static_cast<Eigen::Index>(grid.K()) * rows, cols);
  return out;
}

std::string ShareToJson(const Share& share) {
  nlohmann::json j;
  j["node_index"] = share.node_index;
  j["z"] = share.z;
  j["rows"] = share.payload.rows();
  j["cols"] = share.payload.cols();
  j["data"] = std::vector<double>(share.payload.data(),
                                  share.payload.data() + share.payload.size());
  return j.dump();
}

Share ShareFromJson(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, std::string("share JSON: ") + e.what());
  }
  try {
    Share share;
    share.node_index = j.at("node_index").get<std::size_t>();
    share.z = j.at("z").get<double>();
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols) {
      Fail(ErrorCode::kInvalidArgument, "share JSON: data length does not match rows*cols");
    }
    share.payload = Eigen::Map<const Matrix>(data.data(), rows, cols);
    return share;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, std::string("share JSON: ") + e.what());
  }
}

}  // namespace pbacc
