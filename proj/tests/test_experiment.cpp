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
#include <string>

#include "doctest.h"
#include "jlse/errors.hpp"
#include "jlse/experiment.hpp"
#include "jlse/rng.hpp"

using namespace jlse;

TEST_CASE("paper defaults") {
  const ExperimentSpec s = resolve_spec(R"({"system": "springs"})");
  CHECK(s.sequence_count == 100);
  CHECK(s.sequence_length == 500);
  CHECK_FALSE(s.desk_scale);
  CHECK(s.out == "runs/springs");
  CHECK(s.dataset_path() == "runs/springs/dataset");
  CHECK(resolve_training(s, Architecture::kJLSTM).training.max_epochs == 8000);
  CHECK(resolve_spec(R"({"system": "pendulum"})").sequence_length == 4000);
  CHECK(resolve_spec("{}").system == "vdp");
  CHECK(resolve_spec("{}").sequence_length == 300);
}

TEST_CASE("desk scale") {
  const DeskScale d = desk_scale_config("vdp");
  CHECK(d.sequence_count == 100);
  CHECK(d.sequence_length == 300);
  CHECK(d.max_epochs == 400);
  const ExperimentSpec s = resolve_spec(R"({"system": "vdp", "desk_scale": true})");
  for (Architecture a : {Architecture::kJLSTM, Architecture::kELSTM}) {
    const TrainingPreset p = resolve_training(s, a);
    CHECK(p.network.hidden == 50);
    CHECK(p.training.max_epochs == 400);
    CHECK(p.training.patience == 15);
    CHECK(p.training.batch_size == 20);
  }
  CHECK(resolve_training(s, Architecture::kJLSTM).training.learning_rate == 1e-2);
  CHECK(resolve_training(s, Architecture::kELSTM).training.learning_rate == 1e-3);
  // Explicit settings win over the desk preset.
  const ExperimentSpec o =
      resolve_spec(R"({"system": "vdp", "desk_scale": true, "max_epochs": 7})");
  CHECK(resolve_training(o, Architecture::kJLSTM).training.max_epochs == 7);
  CHECK(resolve_spec(R"({"system": "pendulum", "desk_scale": true})").truncation_window);
}

TEST_CASE("seed fan-out") {
  const ExperimentSpec s = resolve_spec(R"({"seed": 9})");
  const TrainingPreset j = resolve_training(s, Architecture::kJLSTM);
  const TrainingPreset e = resolve_training(s, Architecture::kELSTM);
  CHECK(j.network.seed == derive_seed(9, "init/jlstm"));
  CHECK(j.training.seed == derive_seed(9, "shuffle/jlstm"));
  CHECK(j.network.seed != e.network.seed);
  CHECK(derive_seed(9, "a") == derive_seed(9, "a"));
  CHECK(derive_seed(9, "a") != derive_seed(10, "a"));
}

TEST_CASE("spec validation") {
  auto kind_of = [](const std::string& text) {
    try {
      resolve_spec(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIo;  // sentinel: no error
  };
  CHECK(kind_of(R"({"sequence_count": 5})") == ErrorKind::kInvalidArgument);
  CHECK(kind_of(R"({"system": "lorenz"})") == ErrorKind::kInvalidArgument);
  CHECK(kind_of(R"({"frobnicate": 1})") == ErrorKind::kInvalidArgument);
  CHECK(kind_of(R"({"threads": 0})") == ErrorKind::kInvalidArgument);
  CHECK(kind_of(R"({"hidden": "many"})") == ErrorKind::kInvalidArgument);
  CHECK(kind_of("[1, 2]") == ErrorKind::kInvalidArgument);
  CHECK(kind_of(R"({"config": "/nonexistent/spec.json"})") == ErrorKind::kNotFound);
  CHECK(resolve_spec(R"({"estimators": "kf, jlstm"})").estimators.size() == 2);
  CHECK(resolve_spec(R"({"threads": 3})").threads == 3);
}
