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

// End-to-end experiment commands: generate, train, evaluate, reproduce.
//
// Run directory layout (all relative to ExperimentSpec::out):
//
//   dataset/                  manifest.json + seq_*.csv
//   <arch>/checkpoint.json    best-validation weights
//   <arch>/train_log.csv      epoch,train_loss,val_loss,seconds_elapsed
//   report/summary.csv        system,estimator,nmse,nmse_oor,train_seconds,test_seconds
//   report/error_curve_<system>.csv, report/error_curve_<system>_oor.csv
//
// Seeds: the dataset uses base seed `seed` (sequence i gets seed + i); the
// out-of-region set uses derive_seed(seed, "oor"); network <arch> is
// initialized from derive_seed(seed, "init/<arch>") and shuffled by
// derive_seed(seed, "shuffle/<arch>").

#ifndef JLSE_EXPERIMENT_HPP_
#define JLSE_EXPERIMENT_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jlse/evaluation.hpp"
#include "jlse/networks.hpp"
#include "jlse/training.hpp"

namespace jlse {

// Reduced configuration for desktop runs.
struct DeskScale {
  int sequence_count;
  int sequence_length;
  int max_epochs;
  int truncation_window;  // 0: none
};
DeskScale desk_scale_config(const std::string& system);

struct ExperimentSpec {
  std::string system = "vdp";
  std::uint64_t seed = 0;
  int sequence_count = 100;
  int sequence_length = 0;  // 0: system default
  bool desk_scale = false;
  int threads = 1;
  std::string out;          // default runs/<system>
  std::string dataset_dir;  // default <out>/dataset

  std::optional<int> hidden;
  std::optional<double> learning_rate;
  std::optional<int> batch_size;
  std::optional<int> max_epochs;
  std::optional<int> patience;
  std::optional<int> truncation_window;

  std::vector<std::string> estimators;            // evaluate; empty = all
  bool oor = false;                               // evaluate
  std::map<std::string, std::string> checkpoints; // arch -> path override

  std::string dataset_path() const;
  std::string arch_dir(Architecture arch) const;
  std::string report_dir() const;
};

// Builds a spec from a JSON object of overrides. A "config" key names a
// JSON file whose settings are applied first; the remaining keys win.
// Defaults come from the system presets (or the desk-scale preset).
ExperimentSpec resolve_spec(const std::string& overrides_json);

// Network and training configuration for `arch` after presets and overrides.
TrainingPreset resolve_training(const ExperimentSpec& spec, Architecture arch);

using LogSink = std::function<void(const std::string&)>;

struct GenerateOutcome {
  std::string dataset_dir;
  int count = 0;
  int sequence_length = 0;
};

struct TrainOutcome {
  std::string checkpoint_path;
  TrainRecord record;
};

struct EvaluateOutcome {
  std::vector<SummaryRow> rows;
  EvalReport in_region;
  std::optional<EvalReport> out_of_region;
};

struct ReproduceOutcome {
  std::map<std::string, TrainRecord> records;
  EvaluateOutcome evaluation;
};

GenerateOutcome cmd_generate(const ExperimentSpec& spec, const LogSink& log = {});
TrainOutcome cmd_train(const ExperimentSpec& spec, Architecture arch,
                       const LogSink& log = {});
EvaluateOutcome cmd_evaluate(const ExperimentSpec& spec, const LogSink& log = {});
// generate -> train JLSTM and ELSTM -> evaluate with filters and the
// out-of-region set. Files from completed stages are kept on failure.
ReproduceOutcome cmd_reproduce(const ExperimentSpec& spec, const LogSink& log = {});

}  // namespace jlse

#endif  // JLSE_EXPERIMENT_HPP_
