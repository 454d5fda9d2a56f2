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

// jlse: command-line driver for dataset generation, training, evaluation
// and full reproduction runs. Talks to the library only through the C API.
//
// Exit status: 0 success, 1 usage, 2 I/O, 3 numerical divergence.

#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jlse/c_api.h"

namespace {

struct CommonFlags {
  std::optional<std::string> system;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> config;
  std::optional<int> threads;
  bool desk_scale = false;
  std::optional<int> sequence_count;
  std::optional<int> sequence_length;
  std::optional<std::string> dataset;
  std::optional<int> hidden;
  std::optional<double> learning_rate;
  std::optional<int> batch_size;
  std::optional<int> max_epochs;
  std::optional<int> patience;
  std::optional<int> truncation_window;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--system", f.system, "springs, pendulum or vdp");
  cmd->add_option("--seed", f.seed, "experiment seed");
  cmd->add_option("--out", f.out, "run directory (default runs/<system>)");
  cmd->add_option("--config", f.config, "JSON settings file; flags take precedence");
  cmd->add_option("--threads", f.threads, "worker threads (1 = bitwise reference)");
  cmd->add_flag("--desk-scale", f.desk_scale, "reduced desktop configuration");
  cmd->add_option("--sequence-count", f.sequence_count, "number of sequences (>= 10)");
  cmd->add_option("--sequence-length", f.sequence_length, "steps per sequence");
  cmd->add_option("--dataset", f.dataset, "dataset directory (default <out>/dataset)");
  cmd->add_option("--hidden", f.hidden, "hidden units");
  cmd->add_option("--learning-rate", f.learning_rate, "Adam learning rate");
  cmd->add_option("--batch-size", f.batch_size, "sequences per batch");
  cmd->add_option("--max-epochs", f.max_epochs, "epoch limit");
  cmd->add_option("--patience", f.patience, "early-stopping patience");
  cmd->add_option("--truncation-window", f.truncation_window, "BPTT window (0 = full)");
  cmd->add_flag("-q,--quiet", f.quiet, "suppress progress output");
}

template <typename T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

nlohmann::json to_json(const CommonFlags& f) {
  nlohmann::json j = nlohmann::json::object();
  put(j, "system", f.system);
  put(j, "seed", f.seed);
  put(j, "out", f.out);
  put(j, "config", f.config);
  put(j, "threads", f.threads);
  if (f.desk_scale) j["desk_scale"] = true;
  put(j, "sequence_count", f.sequence_count);
  put(j, "sequence_length", f.sequence_length);
  put(j, "dataset", f.dataset);
  put(j, "hidden", f.hidden);
  put(j, "learning_rate", f.learning_rate);
  put(j, "batch_size", f.batch_size);
  put(j, "max_epochs", f.max_epochs);
  put(j, "patience", f.patience);
  put(j, "truncation_window", f.truncation_window);
  return j;
}

void log_to_stderr(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

int report(jlse_status status) {
  if (status != JLSE_OK) {
    std::fprintf(stderr, "jlse: error: %s\n", jlse_last_error());
  }
  // Internal failures share the I/O status; the documented range is 0..3.
  return status == JLSE_ERR_INTERNAL ? 2 : static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrent-network and Kalman-filter state estimation benchmarks"};
  app.require_subcommand(1);

  CommonFlags generate_flags, train_flags, evaluate_flags, reproduce_flags;

  auto* generate = app.add_subcommand("generate", "generate and save a dataset");
  add_common(generate, generate_flags);

  auto* train = app.add_subcommand("train", "train one network on a saved dataset");
  add_common(train, train_flags);
  std::string arch;
  train->add_option("--arch", arch, "ern, jrn, elstm or jlstm")->required();

  auto* evaluate = app.add_subcommand("evaluate", "score estimators on the test split");
  add_common(evaluate, evaluate_flags);
  std::string estimators;
  bool oor = false;
  std::vector<std::string> checkpoints;
  evaluate->add_option("--estimators", estimators,
                       "comma list of kf, ekf, ern, jrn, elstm, jlstm");
  evaluate->add_flag("--oor", oor, "also score an out-of-region test set");
  evaluate->add_option("--checkpoint", checkpoints, "ARCH=PATH checkpoint override");

  auto* reproduce = app.add_subcommand(
      "reproduce", "generate, train JLSTM and ELSTM, evaluate against the filter");
  add_common(reproduce, reproduce_flags);
  std::optional<std::string> reproduce_system;
  reproduce->add_option("SYSTEM", reproduce_system, "springs, pendulum or vdp");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto run = [](const CommonFlags& f, nlohmann::json spec, auto&& call) {
    const std::string text = spec.dump();
    return report(call(text.c_str(), f.quiet ? nullptr : log_to_stderr));
  };

  if (generate->parsed()) {
    return run(generate_flags, to_json(generate_flags),
               [](const char* s, jlse_log_fn log) {
                 return jlse_cmd_generate(s, log, nullptr);
               });
  }
  if (train->parsed()) {
    return run(train_flags, to_json(train_flags),
               [&arch](const char* s, jlse_log_fn log) {
                 return jlse_cmd_train(s, arch.c_str(), log, nullptr);
               });
  }
  if (evaluate->parsed()) {
    nlohmann::json spec = to_json(evaluate_flags);
    if (!estimators.empty()) spec["estimators"] = estimators;
    if (oor) spec["oor"] = true;
    if (!checkpoints.empty()) {
      nlohmann::json map = nlohmann::json::object();
      for (const std::string& entry : checkpoints) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) {
          std::fprintf(stderr, "jlse: error: --checkpoint expects ARCH=PATH\n");
          return 1;
        }
        map[entry.substr(0, eq)] = entry.substr(eq + 1);
      }
      spec["checkpoints"] = map;
    }
    return run(evaluate_flags, spec, [](const char* s, jlse_log_fn log) {
      return jlse_cmd_evaluate(s, log, nullptr);
    });
  }
  nlohmann::json spec = to_json(reproduce_flags);
  if (reproduce_system) {
    if (reproduce_flags.system && *reproduce_flags.system != *reproduce_system) {
      std::fprintf(stderr, "jlse: error: conflicting system names\n");
      return 1;
    }
    spec["system"] = *reproduce_system;
  }
  return run(reproduce_flags, spec, [](const char* s, jlse_log_fn log) {
    return jlse_cmd_reproduce(s, log, nullptr);
  });
}
