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

#include "pbacc/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "parallel.hpp"
#include "pbacc/errors.hpp"
#include "pbacc/functions.hpp"
#include "pbacc/grid.hpp"
#include "pbacc/matrix_codec.hpp"
#include "pbacc/pbss.hpp"
#include "pbacc/privacy.hpp"
#include "pbacc/rng.hpp"
#include "pbacc/svg.hpp"

namespace pbacc {

namespace {

using Json = nlohmann::ordered_json;
using Index = Eigen::Index;

[[noreturn]] void ConfigFail(const std::string& field, const std::string& what) {
  Fail(ErrorCode::kConfig, field.empty() ? what : field + ": " + what);
}

// Reads the fields of one JSON object and rejects any it did not consume.
class FieldReader {
 public:
  FieldReader(const Json& object, std::string prefix)
      : object_(object), prefix_(std::move(prefix)) {
    if (!object_.is_object()) ConfigFail(prefix_.empty() ? "<root>" : prefix_, "expected an object");
  }

  bool Has(const char* key) const { return object_.contains(key); }

  void Read(const char* key, std::size_t& out) {
    if (const Json* v = Take(key)) {
      if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() &&
                                      v->get<std::int64_t>() < 0)) {
        ConfigFail(Path(key), "expected a non-negative integer");
      }
      out = v->get<std::size_t>();
    }
  }

  void Read(const char* key, int& out) {
    if (const Json* v = Take(key)) {
      if (!v->is_number_integer()) ConfigFail(Path(key), "expected an integer");
      out = v->get<int>();
    }
  }

  void Read(const char* key, std::uint64_t& out, bool) {
    if (const Json* v = Take(key)) {
      if (!v->is_number_unsigned()) ConfigFail(Path(key), "expected an unsigned 64-bit integer");
      out = v->get<std::uint64_t>();
    }
  }

  void Read(const char* key, double& out) {
    if (const Json* v = Take(key)) {
      if (!v->is_number()) ConfigFail(Path(key), "expected a number");
      out = v->get<double>();
    }
  }

  void Read(const char* key, std::string& out) {
    if (const Json* v = Take(key)) {
      if (!v->is_string()) ConfigFail(Path(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void Read(const char* key, std::vector<std::string>& out) {
    if (const Json* v = Take(key)) {
      if (!v->is_array()) ConfigFail(Path(key), "expected an array of strings");
      out.clear();
      for (const Json& item : *v) {
        if (!item.is_string()) ConfigFail(Path(key), "expected an array of strings");
        out.push_back(item.get<std::string>());
      }
    }
  }

  void Read(const char* key, std::vector<double>& out) {
    if (const Json* v = Take(key)) {
      if (!v->is_array()) ConfigFail(Path(key), "expected an array of numbers");
      out.clear();
      for (const Json& item : *v) {
        if (!item.is_number()) ConfigFail(Path(key), "expected an array of numbers");
        out.push_back(item.get<double>());
      }
    }
  }

  void Read(const char* key, std::vector<std::size_t>& out) {
    if (const Json* v = Take(key)) {
      if (!v->is_array()) ConfigFail(Path(key), "expected an array of non-negative integers");
      out.clear();
      for (const Json& item : *v) {
        if (!item.is_number_unsigned()) {
          ConfigFail(Path(key), "expected an array of non-negative integers");
        }
        out.push_back(item.get<std::size_t>());
      }
    }
  }

  const Json* Object(const char* key) { return Take(key); }

  std::string Path(const char* key) const {
    return prefix_.empty() ? std::string(key) : prefix_ + "." + key;
  }

  void Finish() const {
    for (const auto& item : object_.items()) {
      if (!seen_.count(item.key())) ConfigFail(Path(item.key().c_str()), "unknown field");
    }
  }

 private:
  const Json* Take(const char* key) {
    seen_.insert(key);
    auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  const Json& object_;
  std::string prefix_;
  std::set<std::string> seen_;
};

std::string LineColumn(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  std::ostringstream out;
  out << "line " << line << ", column " << column;
  return out.str();
}

InputRange ResolveRange(const std::string& range, Function f) {
  if (range == "symmetric") return InputRange::kSymmetric;
  if (range == "positive") return InputRange::kPositive;
  if (f == Function::kMedian || f == Function::kMatmul) return InputRange::kPositive;
  return InputRange::kSymmetric;
}

std::string RangeName(InputRange range) {
  return range == InputRange::kSymmetric ? "symmetric" : "positive";
}

std::vector<std::string> RunSchemes(const ExperimentConfig& config) {
  if (!config.schemes.empty()) return config.schemes;
  return {"bss", "pbss", "bss_dp"};
}

std::vector<std::string> MatmulSchemes(const ExperimentConfig& config) {
  if (!config.schemes.empty()) return config.schemes;
  return {"plain", "private"};
}

std::vector<double> SigmaList(const ExperimentConfig& config) {
  if (!config.leakage.sigma_n_list.empty()) return config.leakage.sigma_n_list;
  return {config.sigma_n};
}

std::size_t CMax(const ExperimentConfig& config) {
  return config.leakage.c_max == 0 ? config.c : config.leakage.c_max;
}

// Wraps library argument errors raised while validating as config errors.
template <class Fn>
void AsConfig(const std::string& field, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    ConfigFail(field, e.what());
  }
}

double Median(std::vector<double> values) { return MedianInPlace(values); }

std::string Format6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string Pad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text + " " : text + std::string(width - text.size(), ' ');
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

ExperimentConfig ParseConfig(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    ConfigFail("", "malformed JSON at " + LineColumn(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                       e.what());
  }
  ExperimentConfig config;
  FieldReader reader(root, "");
  if (!reader.Has("schema_version")) ConfigFail("schema_version", "missing");
  reader.Read("schema_version", config.schema_version);
  if (config.schema_version != kConfigSchemaVersion) {
    ConfigFail("schema_version", "unsupported version " + std::to_string(config.schema_version) +
                                     " (expected " + std::to_string(kConfigSchemaVersion) + ")");
  }
  reader.Read("name", config.name);
  reader.Read("N", config.N);
  reader.Read("K", config.K);
  reader.Read("L", config.L);
  reader.Read("s", config.s);
  reader.Read("sigma_n", config.sigma_n);
  reader.Read("T", config.T);
  reader.Read("c", config.c);
  reader.Read("sigma_dp", config.sigma_dp);
  reader.Read("r", config.r);
  reader.Read("block_count", config.block_count);
  reader.Read("mask_shift", config.mask_shift);
  reader.Read("stragglers", config.stragglers);
  reader.Read("functions", config.functions);
  reader.Read("schemes", config.schemes);
  reader.Read("seed", config.seed, true);
  reader.Read("repetitions", config.repetitions);
  reader.Read("input_range", config.input_range);
  if (const Json* leakage = reader.Object("leakage")) {
    FieldReader sub(*leakage, "leakage");
    sub.Read("sigma_n_list", config.leakage.sigma_n_list);
    sub.Read("c_min", config.leakage.c_min);
    sub.Read("c_max", config.leakage.c_max);
    sub.Read("policy", config.leakage.policy);
    sub.Read("samples", config.leakage.samples);
    sub.Read("floor_mode", config.leakage.floor_mode);
    sub.Read("floor", config.leakage.floor);
    sub.Read("epsilon", config.leakage.epsilon);
    sub.Finish();
  }
  if (const Json* matmul = reader.Object("matmul")) {
    FieldReader sub(*matmul, "matmul");
    sub.Read("variants", config.matmul.variants);
    sub.Read("density", config.matmul.density);
    sub.Read("masks_per_row", config.matmul.masks_per_row);
    sub.Read("block_policy", config.matmul.block_policy);
    sub.Finish();
  }
  reader.Finish();
  if (config.input_range != "auto" && config.input_range != "symmetric" &&
      config.input_range != "positive") {
    ConfigFail("input_range", "expected auto, symmetric or positive");
  }
  return config;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ConfigFail("", "cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseConfig(buffer.str());
  } catch (const Error& e) {
    Fail(ErrorCode::kConfig, path + ": " + e.what());
  }
}

std::string SerializeConfig(const ExperimentConfig& config) {
  Json root;
  root["schema_version"] = config.schema_version;
  root["name"] = config.name;
  root["N"] = config.N;
  root["K"] = config.K;
  root["L"] = config.L;
  root["s"] = config.s;
  root["sigma_n"] = config.sigma_n;
  root["T"] = config.T;
  root["c"] = config.c;
  root["sigma_dp"] = config.sigma_dp;
  root["r"] = config.r;
  root["block_count"] = config.block_count;
  root["mask_shift"] = config.mask_shift;
  root["stragglers"] = config.stragglers;
  root["functions"] = config.functions;
  root["schemes"] = config.schemes;
  root["seed"] = config.seed;
  root["repetitions"] = config.repetitions;
  root["input_range"] = config.input_range;
  Json leakage;
  leakage["sigma_n_list"] = config.leakage.sigma_n_list;
  leakage["c_min"] = config.leakage.c_min;
  leakage["c_max"] = config.leakage.c_max;
  leakage["policy"] = config.leakage.policy;
  leakage["samples"] = config.leakage.samples;
  leakage["floor_mode"] = config.leakage.floor_mode;
  leakage["floor"] = config.leakage.floor;
  leakage["epsilon"] = config.leakage.epsilon;
  root["leakage"] = leakage;
  Json matmul;
  matmul["variants"] = config.matmul.variants;
  matmul["density"] = config.matmul.density;
  matmul["masks_per_row"] = config.matmul.masks_per_row;
  matmul["block_policy"] = config.matmul.block_policy;
  root["matmul"] = matmul;
  return root.dump(2) + "\n";
}

void ValidateConfig(const ExperimentConfig& config, Command command) {
  if (config.name.empty()) ConfigFail("name", "must not be empty");
  if (config.N < 2) ConfigFail("N", "must be >= 2");
  if (!(config.s > 0.0) || !std::isfinite(config.s)) ConfigFail("s", "must be > 0");
  if (!(config.sigma_n > 0.0) || !std::isfinite(config.sigma_n)) {
    ConfigFail("sigma_n", "must be > 0");
  }
  if (config.repetitions < 1) ConfigFail("repetitions", "must be >= 1");
  if (config.K < 1) ConfigFail("K", "must be >= 1");
  if (config.L < 1) ConfigFail("L", "must be >= 1");
  if (config.r < 1) ConfigFail("r", "must be >= 1");
  if (command != Command::kLeakage) {
    for (std::size_t level : config.stragglers) {
      if (level >= config.N) ConfigFail("stragglers", "every level must be below N");
    }
    if (config.stragglers.empty()) ConfigFail("stragglers", "must list at least one level");
  }

  switch (command) {
    case Command::kRun: {
      if (config.K % config.r != 0) ConfigFail("r", "must divide K");
      if (config.T % config.r != 0) ConfigFail("r", "must divide T");
      if (config.functions.empty()) ConfigFail("functions", "must list at least one function");
      for (const std::string& name : config.functions) {
        AsConfig("functions", [&] {
          if (ParseFunction(name) == Function::kMatmul) {
            Fail(ErrorCode::kInvalidArgument, "matmul belongs to the matmul subcommand");
          }
        });
      }
      for (const std::string& name : RunSchemes(config)) {
        Scheme scheme = Scheme::kBss;
        AsConfig("schemes", [&] { scheme = ParseScheme(name); });
        if (scheme == Scheme::kPbss && config.T == 0) ConfigFail("T", "pbss needs T >= 1");
        if (scheme == Scheme::kBssDp && !(config.sigma_dp > 0.0)) {
          ConfigFail("sigma_dp", "must be > 0 for bss_dp");
        }
      }
      break;
    }
    case Command::kLeakage: {
      if (config.T < 1) ConfigFail("T", "leakage needs T >= 1");
      const std::size_t c_max = CMax(config);
      if (c_max > config.N) ConfigFail("leakage.c_max", "must not exceed N");
      if (config.leakage.c_min > c_max) ConfigFail("leakage.c_min", "must not exceed c_max");
      for (double sigma : config.leakage.sigma_n_list) {
        if (!(sigma > 0.0)) ConfigFail("leakage.sigma_n_list", "entries must be > 0");
      }
      AsConfig("leakage.policy", [&] { ParseScenarioPolicy(config.leakage.policy); });
      if (config.leakage.samples < 1) ConfigFail("leakage.samples", "must be >= 1");
      if (config.leakage.floor_mode != "relative" && config.leakage.floor_mode != "absolute") {
        ConfigFail("leakage.floor_mode", "expected relative or absolute");
      }
      if (!(config.leakage.floor > 0.0)) ConfigFail("leakage.floor", "must be > 0");
      break;
    }
    case Command::kMatmul: {
      if (config.K % config.r != 0) ConfigFail("r", "must divide K");
      if (config.matmul.variants.empty()) ConfigFail("matmul.variants", "must not be empty");
      for (const std::string& variant : config.matmul.variants) {
        if (variant != "direct" && variant != "blocked") {
          ConfigFail("matmul.variants", "expected direct or blocked, got '" + variant + "'");
        }
        if (variant == "blocked") {
          const std::size_t b = config.block_count;
          if (b < 1 || config.K % b != 0) ConfigFail("block_count", "must divide K");
          if ((config.K / b) % config.r != 0) ConfigFail("r", "must divide K / block_count");
          if (config.N < b * b) ConfigFail("block_count", "needs N >= block_count^2");
        }
      }
      for (const std::string& scheme : MatmulSchemes(config)) {
        if (scheme != "plain" && scheme != "private") {
          ConfigFail("schemes", "expected plain or private, got '" + scheme + "'");
        }
      }
      if (!(config.matmul.density > 0.0 && config.matmul.density <= 1.0)) {
        ConfigFail("matmul.density", "must lie in (0, 1]");
      }
      if (config.matmul.masks_per_row < 1) ConfigFail("matmul.masks_per_row", "must be >= 1");
      AsConfig("matmul.block_policy", [&] { ParseBlockPolicy(config.matmul.block_policy); });
      break;
    }
  }
}

std::vector<ActivationRow> RunActivationSweep(const ExperimentConfig& config, std::size_t jobs) {
  ValidateConfig(config, Command::kRun);
  const std::vector<std::string> schemes = RunSchemes(config);
  const std::size_t tasks = config.functions.size() * config.repetitions;
  std::vector<std::vector<ActivationRow>> per_task(tasks);
  const std::size_t P = config.K / config.r;
  const std::size_t S = config.T / config.r;

  internal::ParallelFor(tasks, jobs, [&](std::size_t task) {
    const std::size_t fi = task / config.repetitions;
    const std::size_t rep = task % config.repetitions;
    const Function function = ParseFunction(config.functions[fi]);
    const AggregateSpec spec = AggregateSpec::For(function);
    const std::uint64_t seed = config.seed + rep;
    const InputRange range = ResolveRange(config.input_range, function);
    const std::vector<Matrix> inputs =
        GenerateInputs(config.N, config.K, config.L, config.s, range, seed);
    std::vector<StragglerModel> models;
    for (std::size_t level : config.stragglers) models.push_back(StragglerModel::Random(level, seed));
    ProtocolOptions options;
    options.rows_per_point = config.r;
    options.seed = seed;
    options.sigma_dp = config.sigma_dp;
    for (const std::string& scheme_name : schemes) {
      const Scheme scheme = ParseScheme(scheme_name);
      const bool masked = scheme == Scheme::kPbss;
      const InterpolationGrid grid =
          InterpolationGrid::Build(P, masked ? S : 0, config.N, config.mask_shift);
      const MaskSpec mask{masked ? config.T : 0, config.sigma_n, seed, config.mask_shift};
      const std::vector<RunReport> reports =
          RunProtocol(scheme, inputs, grid, mask, spec, models, options);
      for (std::size_t k = 0; k < reports.size(); ++k) {
        ActivationRow row;
        row.experiment = config.name;
        row.scheme = scheme_name;
        row.function = config.functions[fi];
        row.N = config.N;
        row.K = config.K;
        row.L = config.L;
        row.T = masked ? config.T : 0;
        row.r = config.r;
        row.s = config.s;
        row.sigma_n = config.sigma_n;
        row.sigma_dp = config.sigma_dp;
        row.mask_shift = config.mask_shift;
        row.input_range = RangeName(range);
        row.stragglers = config.stragglers[k];
        row.n_used = reports[k].n_used;
        row.seed = seed;
        row.repetition = rep;
        row.rme = reports[k].rme;
        row.excluded = reports[k].excluded;
        per_task[task].push_back(std::move(row));
      }
    }
  });

  // Reorder into (function, scheme, straggler level, repetition).
  std::vector<ActivationRow> rows;
  for (std::size_t fi = 0; fi < config.functions.size(); ++fi) {
    for (std::size_t si = 0; si < schemes.size(); ++si) {
      for (std::size_t li = 0; li < config.stragglers.size(); ++li) {
        for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
          rows.push_back(
              per_task[fi * config.repetitions + rep][si * config.stragglers.size() + li]);
        }
      }
    }
  }
  return rows;
}

std::vector<LeakageRow> RunLeakageSweep(const ExperimentConfig& config, std::size_t jobs) {
  ValidateConfig(config, Command::kLeakage);
  const InterpolationGrid grid =
      InterpolationGrid::Build(config.K, config.T, config.N, config.mask_shift);
  const RegularizationFloor floor = config.leakage.floor_mode == "absolute"
                                        ? RegularizationFloor::Absolute(config.leakage.floor)
                                        : RegularizationFloor::Relative(config.leakage.floor);
  CurveOptions options;
  options.policy = ParseScenarioPolicy(config.leakage.policy);
  options.samples = config.leakage.samples;
  options.seed = config.seed;
  options.jobs = jobs;
  const std::vector<CurvePoint> curve = LeakageCurve(
      grid, config.s, SigmaList(config), config.leakage.c_min, CMax(config), floor, options);
  std::vector<LeakageRow> rows;
  for (const CurvePoint& p : curve) {
    LeakageRow row;
    row.experiment = config.name;
    row.policy = config.leakage.policy;
    row.N = config.N;
    row.K = config.K;
    row.T = config.T;
    row.s = config.s;
    row.mask_shift = config.mask_shift;
    row.floor_mode = config.leakage.floor_mode;
    row.floor = config.leakage.floor;
    row.c = p.c;
    row.sigma_n = p.sigma_n;
    row.I_L = p.I_L;
    row.iota_L = p.iota_L;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<MatmulRow> RunMatmulSweep(const ExperimentConfig& config, std::size_t jobs) {
  ValidateConfig(config, Command::kMatmul);
  const std::vector<std::string> schemes = MatmulSchemes(config);
  const std::vector<std::string>& variants = config.matmul.variants;
  const std::size_t per_rep = variants.size() * schemes.size();
  const std::size_t tasks = per_rep * config.repetitions;
  std::vector<std::vector<MatmulRow>> per_task(tasks);
  const std::vector<double> zs = ChebyshevSecondKind(config.N);
  const BlockPolicy policy = ParseBlockPolicy(config.matmul.block_policy);
  const InputRange range = ResolveRange(config.input_range, Function::kMatmul);

  internal::ParallelFor(tasks, jobs, [&](std::size_t task) {
    const std::size_t rep = task / per_rep;
    const std::size_t vi = (task % per_rep) / schemes.size();
    const std::size_t si = task % schemes.size();
    const std::uint64_t seed = config.seed + rep;
    const bool masked = schemes[si] == "private";

    auto generate = [&](Stream stream, std::uint64_t sparsity_index) {
      Rng rng = MakeRng(seed, stream);
      const double lo = range == InputRange::kSymmetric ? -config.s : 0.0;
      std::uniform_real_distribution<double> dist(lo, config.s);
      Matrix m(static_cast<Index>(config.K), static_cast<Index>(config.L));
      for (Index e = 0; e < m.size(); ++e) {
        double value = dist(rng);
        while (std::abs(value) < kInputZeroMargin * config.s) value = dist(rng);
        m.data()[e] = value;
      }
      if (config.matmul.density < 1.0) {
        Rng mask_rng = MakeRng(seed, Stream::kSparsity, {sparsity_index});
        std::bernoulli_distribution keep(config.matmul.density);
        for (Index e = 0; e < m.size(); ++e) {
          if (!keep(mask_rng)) m.data()[e] = 0.0;
        }
      }
      return m;
    };
    const Matrix a = generate(Stream::kMatrixA, 0);
    const Matrix b = generate(Stream::kMatrixB, 1);
    const Matrix exact = a * b.transpose();

    ProductOptions options;
    options.packing = RowPacking{config.r, config.matmul.masks_per_row};
    options.mask_shift = config.mask_shift;
    if (masked) options.masks = MatrixMaskOptions{config.sigma_n, seed};

    const bool blocked = variants[vi] == "blocked";
    std::optional<ProductRun> direct_run;
    std::optional<BlockedRun> blocked_run;
    if (blocked) {
      blocked_run = RunBlockedWorkers(a.transpose(), b.transpose(), config.block_count, zs,
                                      policy, options);
    } else {
      direct_run = RunDirectWorkers(a, b, zs, options);
    }
    for (std::size_t level : config.stragglers) {
      const std::vector<std::size_t> fast = StragglerModel::Random(level, seed).FastSet(config.N);
      const Matrix decoded =
          blocked ? DecodeBlockedRun(*blocked_run, fast) : DecodeRun(*direct_run, fast).values;
      if (!decoded.allFinite()) Fail(ErrorCode::kNumericalFailure, "decoded product is not finite");
      const RmeResult rme = Rme(decoded, exact);
      MatmulRow row;
      row.experiment = config.name;
      row.variant = variants[vi];
      row.scheme = schemes[si];
      row.N = config.N;
      row.K = config.K;
      row.d = config.L;
      row.r = config.r;
      row.v = masked ? config.matmul.masks_per_row : 0;
      row.block_count = blocked ? config.block_count : 1;
      row.block_policy = blocked ? config.matmul.block_policy : "none";
      row.density = config.matmul.density;
      row.s = config.s;
      row.sigma_n = config.sigma_n;
      row.mask_shift = config.mask_shift;
      row.stragglers = level;
      row.n_used = fast.size();
      row.seed = seed;
      row.repetition = rep;
      row.rme = rme.rme;
      row.excluded = rme.excluded;
      per_task[task].push_back(std::move(row));
    }
  });

  std::vector<MatmulRow> rows;
  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    for (std::size_t si = 0; si < schemes.size(); ++si) {
      for (std::size_t li = 0; li < config.stragglers.size(); ++li) {
        for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
          rows.push_back(per_task[rep * per_rep + vi * schemes.size() + si][li]);
        }
      }
    }
  }
  return rows;
}

std::string ActivationCsv(const std::vector<ActivationRow>& rows) {
  std::ostringstream out;
  out << "experiment,scheme,function,N,K,L,T,r,s,sigma_n,sigma_dp,mask_shift,input_range,"
         "stragglers,n_used,seed,repetition,rme,excluded\n";
  for (const ActivationRow& r : rows) {
    out << r.experiment << ',' << r.scheme << ',' << r.function << ',' << r.N << ',' << r.K << ','
        << r.L << ',' << r.T << ',' << r.r << ',' << FormatDouble(r.s) << ','
        << FormatDouble(r.sigma_n) << ',' << FormatDouble(r.sigma_dp) << ','
        << FormatDouble(r.mask_shift) << ',' << r.input_range << ',' << r.stragglers << ','
        << r.n_used << ',' << r.seed << ',' << r.repetition << ',' << FormatDouble(r.rme) << ','
        << r.excluded << '\n';
  }
  return out.str();
}

std::string LeakageCsv(const std::vector<LeakageRow>& rows) {
  std::ostringstream out;
  out << "experiment,policy,N,K,T,s,mask_shift,floor_mode,floor,c,sigma_n,I_L_bits,"
         "iota_L_bits_per_point\n";
  for (const LeakageRow& r : rows) {
    out << r.experiment << ',' << r.policy << ',' << r.N << ',' << r.K << ',' << r.T << ','
        << FormatDouble(r.s) << ',' << FormatDouble(r.mask_shift) << ',' << r.floor_mode << ','
        << FormatDouble(r.floor) << ',' << r.c << ',' << FormatDouble(r.sigma_n) << ','
        << FormatDouble(r.I_L) << ',' << FormatDouble(r.iota_L) << '\n';
  }
  return out.str();
}

std::string MatmulCsv(const std::vector<MatmulRow>& rows) {
  std::ostringstream out;
  out << "experiment,variant,scheme,N,K,d,r,v,block_count,block_policy,density,s,sigma_n,"
         "mask_shift,stragglers,n_used,seed,repetition,rme,excluded\n";
  for (const MatmulRow& r : rows) {
    out << r.experiment << ',' << r.variant << ',' << r.scheme << ',' << r.N << ',' << r.K << ','
        << r.d << ',' << r.r << ',' << r.v << ',' << r.block_count << ',' << r.block_policy << ','
        << FormatDouble(r.density) << ',' << FormatDouble(r.s) << ','
        << FormatDouble(r.sigma_n) << ',' << FormatDouble(r.mask_shift) << ',' << r.stragglers
        << ',' << r.n_used << ',' << r.seed << ',' << r.repetition << ',' << FormatDouble(r.rme)
        << ',' << r.excluded << '\n';
  }
  return out.str();
}

std::string ActivationSummary(const std::vector<ActivationRow>& rows) {
  std::vector<std::tuple<std::string, std::string, std::size_t>> order;
  std::map<std::tuple<std::string, std::string, std::size_t>, std::vector<double>> groups;
  for (const ActivationRow& r : rows) {
    auto key = std::make_tuple(r.function, r.scheme, r.stragglers);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(r.rme);
  }
  std::ostringstream out;
  out << Pad("function", 13) << Pad("scheme", 8) << Pad("stragglers", 11) << Pad("runs", 6)
      << "median_rme\n";
  for (const auto& key : order) {
    const auto& values = groups[key];
    out << Pad(std::get<0>(key), 13) << Pad(std::get<1>(key), 8)
        << Pad(std::to_string(std::get<2>(key)), 11) << Pad(std::to_string(values.size()), 6)
        << Format6(Median(values)) << '\n';
  }
  return out.str();
}

std::string LeakageSummary(const ExperimentConfig& config, const std::vector<LeakageRow>& rows) {
  std::ostringstream out;
  out << "H(X) = log2(2s) = " << Format6(UniformEntropyBits(config.s)) << " bits\n";
  out << Pad("sigma_n", 12) << Pad("c", 6) << Pad("I_L_bits", 14) << "iota_L\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool last = i + 1 == rows.size() || rows[i + 1].sigma_n != rows[i].sigma_n;
    if (!last) continue;
    out << Pad(Format6(rows[i].sigma_n), 12) << Pad(std::to_string(rows[i].c), 6)
        << Pad(Format6(rows[i].I_L), 14) << Format6(rows[i].iota_L) << '\n';
  }
  return out.str();
}

std::string MatmulSummary(const std::vector<MatmulRow>& rows) {
  std::vector<std::tuple<std::string, std::string, std::size_t>> order;
  std::map<std::tuple<std::string, std::string, std::size_t>, std::vector<double>> groups;
  for (const MatmulRow& r : rows) {
    auto key = std::make_tuple(r.variant, r.scheme, r.stragglers);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(r.rme);
  }
  std::ostringstream out;
  out << Pad("variant", 9) << Pad("scheme", 9) << Pad("stragglers", 11) << Pad("runs", 6)
      << "median_rme\n";
  for (const auto& key : order) {
    const auto& values = groups[key];
    out << Pad(std::get<0>(key), 9) << Pad(std::get<1>(key), 9)
        << Pad(std::to_string(std::get<2>(key)), 11) << Pad(std::to_string(values.size()), 6)
        << Format6(Median(values)) << '\n';
  }
  return out.str();
}

std::vector<std::pair<std::string, std::string>> ActivationPlots(
    const std::vector<ActivationRow>& rows) {
  std::vector<std::string> functions;
  std::map<std::string, std::map<std::string, std::map<std::size_t, std::vector<double>>>> data;
  std::map<std::string, std::vector<std::string>> scheme_order;
  std::string experiment = rows.empty() ? "experiment" : rows.front().experiment;
  for (const ActivationRow& r : rows) {
    if (!data.count(r.function)) functions.push_back(r.function);
    auto& schemes = data[r.function];
    if (!schemes.count(r.scheme)) scheme_order[r.function].push_back(r.scheme);
    schemes[r.scheme][r.stragglers].push_back(r.rme);
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& f : functions) {
    LineChart chart;
    chart.title = experiment + ": " + f;
    chart.x_label = "stragglers";
    chart.y_label = "median RME";
    chart.log_y = true;
    for (const std::string& scheme : scheme_order[f]) {
      ChartSeries series;
      series.name = scheme;
      for (const auto& [level, values] : data[f][scheme]) {
        series.xs.push_back(static_cast<double>(level));
        series.ys.push_back(Median(values));
      }
      chart.series.push_back(std::move(series));
    }
    out.emplace_back(experiment + "-" + f + ".svg", RenderLineChart(chart));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> LeakagePlots(
    const std::vector<LeakageRow>& rows) {
  std::string experiment = rows.empty() ? "experiment" : rows.front().experiment;
  LineChart chart;
  chart.title = experiment + ": leakage bound";
  chart.x_label = "colluding nodes c";
  chart.y_label = "I_L (bits)";
  for (const LeakageRow& r : rows) {
    const std::string name = "sigma_n=" + Format6(r.sigma_n);
    if (chart.series.empty() || chart.series.back().name != name) {
      chart.series.push_back(ChartSeries{name, {}, {}});
    }
    chart.series.back().xs.push_back(static_cast<double>(r.c));
    chart.series.back().ys.push_back(r.I_L);
  }
  return {{experiment + "-leakage.svg", RenderLineChart(chart)}};
}

std::vector<std::pair<std::string, std::string>> MatmulPlots(const std::vector<MatmulRow>& rows) {
  std::string experiment = rows.empty() ? "experiment" : rows.front().experiment;
  LineChart chart;
  chart.title = experiment + ": matrix product";
  chart.x_label = "stragglers";
  chart.y_label = "median RME";
  chart.log_y = true;
  std::vector<std::string> order;
  std::map<std::string, std::map<std::size_t, std::vector<double>>> data;
  for (const MatmulRow& r : rows) {
    const std::string name = r.variant + "/" + r.scheme;
    if (!data.count(name)) order.push_back(name);
    data[name][r.stragglers].push_back(r.rme);
  }
  for (const std::string& name : order) {
    ChartSeries series;
    series.name = name;
    for (const auto& [level, values] : data[name]) {
      series.xs.push_back(static_cast<double>(level));
      series.ys.push_back(Median(values));
    }
    chart.series.push_back(std::move(series));
  }
  return {{experiment + "-matmul.svg", RenderLineChart(chart)}};
}

}  // namespace pbacc
