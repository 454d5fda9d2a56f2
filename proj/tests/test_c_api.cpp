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
#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "jlse/c_api.h"

namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("jlse_test_capi_" + name);
  fs::remove_all(p);
  return p.string();
}

struct Dataset {
  jlse_dataset* ptr = nullptr;
  ~Dataset() { jlse_dataset_free(ptr); }
};

struct Network {
  jlse_network* ptr = nullptr;
  ~Network() { jlse_network_free(ptr); }
};

void collect(const char* line, void* user) {
  static_cast<std::vector<std::string>*>(user)->push_back(line);
}

}  // namespace

TEST_CASE("version") {
  REQUIRE(jlse_version() != nullptr);
  CHECK(std::strlen(jlse_version()) > 0);
}

TEST_CASE("dataset lifecycle") {
  Dataset ds;
  REQUIRE(jlse_dataset_generate("vdp", 20, 10, 5, &ds.ptr) == JLSE_OK);
  jlse_dataset_info info{};
  REQUIRE(jlse_dataset_info_get(ds.ptr, &info) == JLSE_OK);
  CHECK(std::string(info.system) == "vdp");
  CHECK(info.n == 2);
  CHECK(info.m == 1);
  CHECK(info.dt == 0.1);
  CHECK(info.sequence_length == 20);
  CHECK(info.train_count == 8);
  CHECK(info.val_count == 1);
  CHECK(info.test_count == 1);
  CHECK(info.base_seed == 5);

  std::vector<double> states(21 * 2), meas(20);
  REQUIRE(jlse_dataset_sequence(ds.ptr, JLSE_SPLIT_TRAIN, 3, states.data(), meas.data()) ==
          JLSE_OK);
  // y = x1 + noise with variance 0.01: residuals stay small.
  for (int t = 0; t < 20; ++t) CHECK(std::abs(meas[t] - states[(t + 1) * 2]) < 0.6);
  CHECK(jlse_dataset_sequence(ds.ptr, JLSE_SPLIT_TEST, 1, states.data(), nullptr) ==
        JLSE_ERR_USAGE);

  const std::string dir = scratch("ds");
  REQUIRE(jlse_dataset_save(ds.ptr, dir.c_str()) == JLSE_OK);
  Dataset back;
  REQUIRE(jlse_dataset_load(dir.c_str(), &back.ptr) == JLSE_OK);
  std::vector<double> states2(states.size()), meas2(meas.size());
  REQUIRE(jlse_dataset_sequence(back.ptr, JLSE_SPLIT_TRAIN, 3, states2.data(), meas2.data()) ==
          JLSE_OK);
  CHECK(states == states2);
  CHECK(meas == meas2);

  std::vector<double> est(20 * 2);
  REQUIRE(jlse_filter_run(ds.ptr, JLSE_SPLIT_TEST, 0, est.data()) == JLSE_OK);
  for (double v : est) CHECK(std::isfinite(v));
  fs::remove_all(dir);
}

TEST_CASE("dataset errors") {
  jlse_dataset* ds = nullptr;
  CHECK(jlse_dataset_generate("vdp", 20, 5, 1, &ds) == JLSE_ERR_USAGE);
  CHECK(ds == nullptr);
  CHECK(std::string(jlse_last_error()).find("10") != std::string::npos);
  CHECK(jlse_dataset_generate("lorenz", 20, 10, 1, &ds) == JLSE_ERR_USAGE);
  CHECK(jlse_dataset_generate("vdp", 20, 10, 1, nullptr) == JLSE_ERR_USAGE);
  CHECK(jlse_dataset_load("/nonexistent/jlse", &ds) == JLSE_ERR_IO);
  CHECK(jlse_last_error_detail() == JLSE_DETAIL_NOT_FOUND);
  CHECK(jlse_dataset_info_get(nullptr, nullptr) == JLSE_ERR_USAGE);
  jlse_dataset_free(nullptr);
}

TEST_CASE("networks") {
  Network net;
  REQUIRE(jlse_network_create("jlstm", 1, 2, 50, 3, &net.ptr) == JLSE_OK);
  CHECK(jlse_network_param_count(net.ptr) == 902);
  Network el;
  REQUIRE(jlse_network_create("ELSTM", 1, 2, 50, 3, &el.ptr) == JLSE_OK);
  CHECK(jlse_network_param_count(el.ptr) == 10502);
  jlse_network* bad = nullptr;
  CHECK(jlse_network_create("gru", 1, 2, 50, 3, &bad) == JLSE_ERR_USAGE);
  CHECK(jlse_network_create("jlstm", 1, 2, 0, 3, &bad) == JLSE_ERR_USAGE);

  std::vector<double> y(15), x(30), x2(30);
  for (int t = 0; t < 15; ++t) y[t] = std::sin(0.3 * t);
  REQUIRE(jlse_network_predict(net.ptr, y.data(), 15, x.data()) == JLSE_OK);
  const std::string path = scratch("net") + "/c.json";
  REQUIRE(jlse_network_save(net.ptr, path.c_str()) == JLSE_OK);
  Network back;
  REQUIRE(jlse_network_load(path.c_str(), &back.ptr) == JLSE_OK);
  REQUIRE(jlse_network_predict(back.ptr, y.data(), 15, x2.data()) == JLSE_OK);
  CHECK(x == x2);
  CHECK(jlse_network_load("/nonexistent/c.json", &bad) == JLSE_ERR_IO);
}

TEST_CASE("network training") {
  Dataset ds;
  REQUIRE(jlse_dataset_generate("vdp", 20, 10, 2, &ds.ptr) == JLSE_OK);
  Network net;
  REQUIRE(jlse_network_train(ds.ptr, "jlstm",
                             R"({"max_epochs": 2, "hidden": 4, "batch_size": 4})", 1,
                             &net.ptr) == JLSE_OK);
  CHECK(jlse_network_param_count(net.ptr) == 4 * 4 + 4 * 4 * 2 + 4 * 4 + 2 * 4 + 2);
  jlse_network* bad = nullptr;
  CHECK(jlse_network_train(ds.ptr, "jlstm", R"({"batch_size": 50})", 1, &bad) ==
        JLSE_ERR_USAGE);
  CHECK(jlse_network_train(ds.ptr, "jlstm", R"({"learning_rate": 1e300, "batch_size": 4,
                                                 "max_epochs": 3, "hidden": 4})",
                           1, &bad) == JLSE_ERR_NUMERIC);
  CHECK(jlse_last_error_detail() == JLSE_DETAIL_TRAINING_DIVERGED);
  CHECK(jlse_network_train(ds.ptr, "jlstm", "{not json", 1, &bad) == JLSE_ERR_USAGE);
  CHECK(jlse_network_train(ds.ptr, "jlstm", R"({"bogus": 1})", 1, &bad) == JLSE_ERR_USAGE);
}

TEST_CASE("metrics") {
  const double truth[] = {0.0, 0.0};
  const double est[] = {1.0, 3.0};
  double value = 0.0;
  REQUIRE(jlse_nmse(truth, est, 1, 2, 1, &value) == JLSE_OK);
  CHECK(value == 5.0);
  double curve[2];
  REQUIRE(jlse_error_curve(truth, est, 1, 2, 1, curve) == JLSE_OK);
  CHECK(curve[0] == 1.0);
  CHECK(curve[1] == 9.0);
  CHECK(jlse_nmse(truth, est, 0, 2, 1, &value) == JLSE_ERR_USAGE);
}

TEST_CASE("commands") {
  const std::string out = scratch("cmd");
  const std::string spec = R"({"system": "vdp", "seed": 4, "sequence_count": 10,
      "sequence_length": 15, "out": ")" + out + R"(", "hidden": 4, "batch_size": 4,
      "max_epochs": 2, "threads": 1})";
  std::vector<std::string> log;
  REQUIRE(jlse_cmd_generate(spec.c_str(), collect, &log) == JLSE_OK);
  CHECK(fs::exists(out + "/dataset/manifest.json"));
  CHECK_FALSE(log.empty());
  REQUIRE(jlse_cmd_train(spec.c_str(), "jlstm", nullptr, nullptr) == JLSE_OK);
  CHECK(fs::exists(out + "/jlstm/checkpoint.json"));
  CHECK(fs::exists(out + "/jlstm/train_log.csv"));
  CHECK(jlse_cmd_train(spec.c_str(), "gru", nullptr, nullptr) == JLSE_ERR_USAGE);

  const std::string small = R"({"system": "vdp", "sequence_count": 5, "out": ")" + out + "\"}";
  CHECK(jlse_cmd_generate(small.c_str(), nullptr, nullptr) == JLSE_ERR_USAGE);

  // A vdp checkpoint cannot evaluate a springs dataset.
  const std::string springs_out = scratch("cmd_springs");
  const std::string sspec = R"({"system": "springs", "sequence_count": 10,
      "sequence_length": 10, "out": ")" + springs_out + R"(", "estimators": ["kf", "jlstm"],
      "checkpoints": {"jlstm": ")" + out + R"(/jlstm/checkpoint.json"}})";
  REQUIRE(jlse_cmd_generate(sspec.c_str(), nullptr, nullptr) == JLSE_OK);
  CHECK(jlse_cmd_evaluate(sspec.c_str(), nullptr, nullptr) == JLSE_ERR_IO);
  CHECK(jlse_last_error_detail() == JLSE_DETAIL_DIMENSION_MISMATCH);
  fs::remove_all(out);
  fs::remove_all(springs_out);
}
