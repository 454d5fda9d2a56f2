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

// Dataset directory layout:
//
//   manifest.json   system, n, m, dt, T, count, base_seed, split indices,
//                   covariance scalars, initial-mean box, per-file seeds
//   seq_0000.csv    header t,x_1..x_n,y_1..y_m; row t holds x(t) and y(t),
//   seq_0001.csv    with the measurement fields blank at t = 0
//   ...

#include <cstdio>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "jlse/csv.hpp"
#include "jlse/dynamics.hpp"
#include "jlse/errors.hpp"

namespace jlse {

namespace {

using nlohmann::json;

constexpr const char* kDatasetFormat = "jlse-dataset/1";

std::string sequence_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "seq_%04d.csv", index);
  return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
  const Eigen::Index n = traj.states.rows();
  const Eigen::Index m = traj.measurements.rows();
  std::string out = "t";
  for (Eigen::Index i = 1; i <= n; ++i) out += ",x_" + std::to_string(i);
  for (Eigen::Index i = 1; i <= m; ++i) out += ",y_" + std::to_string(i);
  out += '\n';
  for (Eigen::Index t = 0; t < traj.states.cols(); ++t) {
    out += std::to_string(t);
    for (Eigen::Index i = 0; i < n; ++i) {
      out += ',';
      out += format_double(traj.states(i, t));
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      out += ',';
      if (t > 0) out += format_double(traj.measurements(i, t - 1));
    }
    out += '\n';
  }
  return out;
}

Trajectory parse_trajectory_csv(const std::string& text, const std::string& path,
                                int n, int m, int T, std::uint64_t seed) {
  auto mismatch = [&path](const std::string& why) {
    return Error(ErrorKind::kDimensionMismatch, path + ": " + why);
  };
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::kMalformed, path + ": empty file");
  }
  const std::size_t columns = 1 + static_cast<std::size_t>(n + m);
  if (split_fields(line).size() != columns) {
    throw mismatch("header has " + std::to_string(split_fields(line).size()) +
                   " columns, manifest implies " + std::to_string(columns));
  }
  Trajectory traj;
  traj.seed = seed;
  traj.states.resize(n, T + 1);
  traj.measurements.resize(m, T);
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row > T) throw mismatch("more than T+1 rows");
    const auto fields = split_fields(line);
    if (fields.size() != columns) {
      throw mismatch("row " + std::to_string(row) + " has " +
                     std::to_string(fields.size()) + " columns, expected " +
                     std::to_string(columns));
    }
    if (parse_double(fields[0]) != row) {
      throw Error(ErrorKind::kMalformed, path + ": rows out of order");
    }
    for (int i = 0; i < n; ++i) {
      traj.states(i, row) = parse_double(fields[1 + i]);
    }
    for (int i = 0; i < m; ++i) {
      const auto field = fields[1 + n + i];
      if (row == 0) {
        if (!field.empty()) {
          throw Error(ErrorKind::kMalformed,
                      path + ": measurement given at t = 0");
        }
      } else {
        traj.measurements(i, row - 1) = parse_double(field);
      }
    }
    ++row;
  }
  if (row != T + 1) {
    throw mismatch("expected " + std::to_string(T + 1) + " rows, found " +
                   std::to_string(row));
  }
  return traj;
}

json vector_json(const Vector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector json_vector(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

double covariance_scalar(const Matrix& cov) { return cov.rows() ? cov(0, 0) : 0.0; }

}  // namespace

void save_dataset(const Dataset& ds, const std::string& dir) {
  if (!ds.system) {
    throw Error(ErrorKind::kInvalidArgument, "save_dataset: dataset has no system");
  }
  const SystemModel& model = *ds.system;
  json manifest;
  manifest["format"] = kDatasetFormat;
  manifest["system"] = model.name;
  manifest["n"] = model.n;
  manifest["m"] = model.m;
  manifest["dt"] = model.dt;
  manifest["T"] = ds.sequence_length;
  manifest["count"] = ds.count();
  manifest["base_seed"] = ds.base_seed;
  manifest["split_ratio"] = ds.split_ratio;
  manifest["covariance"] = {
      {"process", covariance_scalar(model.process_cov)},
      {"measurement", covariance_scalar(model.measurement_cov)},
      {"initial", covariance_scalar(model.initial_cov)}};
  manifest["init_region"] = {{"lower", vector_json(ds.init_region.lower)},
                             {"upper", vector_json(ds.init_region.upper)}};

  json split = {{"train", json::array()}, {"val", json::array()},
                {"test", json::array()}};
  json sequences = json::array();
  int index = 0;
  auto emit = [&](const std::vector<Trajectory>& part, const char* key) {
    for (const Trajectory& traj : part) {
      if (traj.states.rows() != model.n || traj.measurements.rows() != model.m ||
          traj.length() != ds.sequence_length) {
        throw Error(ErrorKind::kDimensionMismatch,
                    "save_dataset: trajectory shape disagrees with the model");
      }
      const std::string file = sequence_file_name(index);
      write_text_file((std::filesystem::path(dir) / file).string(),
                      trajectory_csv(traj));
      split[key].push_back(index);
      sequences.push_back({{"file", file}, {"seed", traj.seed}});
      ++index;
    }
  };
  emit(ds.train, "train");
  emit(ds.val, "val");
  emit(ds.test, "test");
  manifest["split"] = split;
  manifest["sequences"] = sequences;
  write_text_file((std::filesystem::path(dir) / "manifest.json").string(),
                  manifest.dump(2) + "\n");
}

Dataset load_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorKind::kNotFound, "no dataset directory: " + dir);
  }
  const std::string manifest_path = (fs::path(dir) / "manifest.json").string();
  json manifest;
  try {
    manifest = json::parse(read_text_file(manifest_path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kMalformed, manifest_path + ": " + e.what());
  }

  Dataset ds;
  try {
    if (manifest.at("format").get<std::string>() != kDatasetFormat) {
      throw Error(ErrorKind::kMalformed, manifest_path + ": unknown format");
    }
    SystemModel model = model_by_name(manifest.at("system").get<std::string>());
    const int n = manifest.at("n").get<int>();
    const int m = manifest.at("m").get<int>();
    if (n != model.n || m != model.m) {
      throw Error(ErrorKind::kDimensionMismatch,
                  manifest_path + ": dimensions disagree with system '" +
                      model.name + "'");
    }
    if (manifest.at("dt").get<double>() != model.dt) {
      throw Error(ErrorKind::kMalformed, manifest_path + ": dt disagrees with system");
    }
    const auto& cov = manifest.at("covariance");
    model.process_cov = cov.at("process").get<double>() * Matrix::Identity(n, n);
    model.measurement_cov =
        cov.at("measurement").get<double>() * Matrix::Identity(m, m);
    model.initial_cov = cov.at("initial").get<double>() * Matrix::Identity(n, n);
    model.validate();

    ds.sequence_length = manifest.at("T").get<int>();
    ds.base_seed = manifest.at("base_seed").get<std::uint64_t>();
    ds.split_ratio = manifest.at("split_ratio").get<std::array<double, 3>>();
    ds.init_region.lower = json_vector(manifest.at("init_region").at("lower"));
    ds.init_region.upper = json_vector(manifest.at("init_region").at("upper"));
    if (ds.init_region.dim() != n || ds.init_region.upper.size() != n) {
      throw Error(ErrorKind::kDimensionMismatch,
                  manifest_path + ": init_region dimension differs from n");
    }
    if (ds.sequence_length < 1) {
      throw Error(ErrorKind::kMalformed, manifest_path + ": T must be >= 1");
    }
    ds.system = std::make_shared<const SystemModel>(std::move(model));

    const auto& sequences = manifest.at("sequences");
    if (sequences.size() != manifest.at("count").get<std::size_t>()) {
      throw Error(ErrorKind::kMalformed,
                  manifest_path + ": count disagrees with sequence list");
    }
    auto load_part = [&](const char* key, std::vector<Trajectory>& part) {
      for (const auto& idx_json : manifest.at("split").at(key)) {
        const auto idx = idx_json.get<std::size_t>();
        if (idx >= sequences.size()) {
          throw Error(ErrorKind::kMalformed,
                      manifest_path + ": split index out of range");
        }
        const auto& entry = sequences.at(idx);
        const std::string path =
            (fs::path(dir) / entry.at("file").get<std::string>()).string();
        part.push_back(parse_trajectory_csv(read_text_file(path), path, n, m,
                                            ds.sequence_length,
                                            entry.at("seed").get<std::uint64_t>()));
      }
    };
    load_part("train", ds.train);
    load_part("val", ds.val);
    load_part("test", ds.test);
    if (static_cast<std::size_t>(ds.count()) != sequences.size()) {
      throw Error(ErrorKind::kMalformed,
                  manifest_path + ": splits do not cover every sequence");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kMalformed, manifest_path + ": " + e.what());
  }
  return ds;
}

}  // namespace jlse
