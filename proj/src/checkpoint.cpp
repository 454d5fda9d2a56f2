/* Copyright 2026 The JLSE Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "jlse/checkpoint.hpp"

#include <json.hpp>

#include "jlse/csv.hpp"
#include "jlse/errors.hpp"

namespace jlse {

namespace {

using nlohmann::json;

constexpr const char* kCheckpointFormat = "jlse-checkpoint/1";

}  // namespace

std::string checkpoint_to_string(const NetworkParams& params,
                                 const CheckpointInfo& info) {
  const NetworkConfig& cfg = params.config();
  json doc;
  doc["format"] = kCheckpointFormat;
  doc["config"] = {
      {"arch", to_string(cfg.arch)},
      {"m", cfg.m},
      {"n", cfg.n},
      {"hidden", cfg.hidden},
      {"recurrent_activation", "sigmoid"},
      {"seed", cfg.seed},
      {"initial_estimate",
       std::vector<double>(cfg.initial_estimate.data(),
                           cfg.initial_estimate.data() + cfg.initial_estimate.size())}};
  doc["info"] = {{"system", info.system},
                 {"best_epoch", info.best_epoch},
                 {"best_val_loss", info.best_val_loss},
                 {"train_seconds", info.train_seconds}};
  json arrays = json::array();
  for (const NamedArray& a : params.arrays()) {
    const Matrix value = params.get(a.name);
    std::vector<double> row_major;
    row_major.reserve(static_cast<std::size_t>(value.size()));
    for (Eigen::Index r = 0; r < value.rows(); ++r) {
      for (Eigen::Index c = 0; c < value.cols(); ++c) row_major.push_back(value(r, c));
    }
    arrays.push_back({{"name", a.name},
                      {"shape", {value.rows(), value.cols()}},
                      {"values", row_major}});
  }
  doc["parameters"] = arrays;
  return doc.dump(1) + "\n";
}

Checkpoint checkpoint_from_string(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != kCheckpointFormat) {
      throw Error(ErrorKind::kMalformed, "checkpoint: unknown format");
    }
    const json& c = doc.at("config");
    NetworkConfig cfg;
    cfg.arch = parse_architecture(c.at("arch").get<std::string>());
    cfg.m = c.at("m").get<int>();
    cfg.n = c.at("n").get<int>();
    cfg.hidden = c.at("hidden").get<int>();
    if (c.at("recurrent_activation").get<std::string>() != "sigmoid") {
      throw Error(ErrorKind::kMalformed, "checkpoint: unsupported activation");
    }
    cfg.seed = c.at("seed").get<std::uint64_t>();
    const auto x0 = c.at("initial_estimate").get<std::vector<double>>();
    cfg.initial_estimate =
        Eigen::Map<const Vector>(x0.data(), static_cast<Eigen::Index>(x0.size()));

    Checkpoint out{NetworkParams(cfg), {}};
    const json& info = doc.at("info");
    out.info.system = info.at("system").get<std::string>();
    out.info.best_epoch = info.at("best_epoch").get<int>();
    out.info.best_val_loss = info.at("best_val_loss").get<double>();
    out.info.train_seconds = info.at("train_seconds").get<double>();

    std::size_t seen = 0;
    for (const json& entry : doc.at("parameters")) {
      const std::string name = entry.at("name").get<std::string>();
      const auto shape = entry.at("shape").get<std::vector<Eigen::Index>>();
      const auto values = entry.at("values").get<std::vector<double>>();
      const NamedArray& a = out.params.array(name);
      if (shape.size() != 2 || shape[0] != a.rows || shape[1] != a.cols ||
          values.size() != static_cast<std::size_t>(a.rows * a.cols)) {
        throw Error(ErrorKind::kDimensionMismatch,
                    "checkpoint: array " + name + " has the wrong shape");
      }
      Matrix value(a.rows, a.cols);
      std::size_t k = 0;
      for (Eigen::Index r = 0; r < a.rows; ++r) {
        for (Eigen::Index col = 0; col < a.cols; ++col) value(r, col) = values[k++];
      }
      out.params.set(name, value);
      ++seen;
    }
    if (seen != out.params.arrays().size()) {
      throw Error(ErrorKind::kMalformed, "checkpoint: missing parameter arrays");
    }
    if (!out.params.flat().allFinite()) {
      throw Error(ErrorKind::kMalformed, "checkpoint: non-finite parameters");
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kMalformed, std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::string& path, const NetworkParams& params,
                     const CheckpointInfo& info) {
  write_text_file(path, checkpoint_to_string(params, info));
}

Checkpoint load_checkpoint(const std::string& path) {
  return checkpoint_from_string(read_text_file(path));
}

}  // namespace jlse
