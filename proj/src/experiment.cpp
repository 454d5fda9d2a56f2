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

#include "jlse/experiment.hpp"

#include <filesystem>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "jlse/checkpoint.hpp"
#include "jlse/csv.hpp"
#include "jlse/errors.hpp"
#include "jlse/rng.hpp"

namespace jlse {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void say(const LogSink& log, const std::string& msg) {
  if (log) log(msg);
}

Error usage(const std::string& what) {
  return Error(ErrorKind::kInvalidArgument, what);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto field : split_fields(text, ',')) {
    if (!field.empty()) out.emplace_back(field);
  }
  return out;
}

std::string default_filter(const SystemModel& model) {
  return model.kind == ModelKind::kLinearZOH ? "kf" : "ekf";
}

}  // namespace

DeskScale desk_scale_config(const std::string& system) {
  if (system == "vdp") return DeskScale{100, 300, 400, 0};
  if (system == "springs") return DeskScale{100, 500, 150, 0};
  if (system == "pendulum") return DeskScale{100, 1000, 100, 100};
  throw usage("unknown system '" + system + "'");
}

std::string ExperimentSpec::dataset_path() const {
  return dataset_dir.empty() ? (fs::path(out) / "dataset").string() : dataset_dir;
}

std::string ExperimentSpec::arch_dir(Architecture arch) const {
  return (fs::path(out) / to_string(arch)).string();
}

std::string ExperimentSpec::report_dir() const {
  return (fs::path(out) / "report").string();
}

ExperimentSpec resolve_spec(const std::string& overrides_json) {
  json overrides;
  try {
    overrides = overrides_json.empty() ? json::object() : json::parse(overrides_json);
  } catch (const json::exception& e) {
    throw usage(std::string("spec is not valid JSON: ") + e.what());
  }
  if (!overrides.is_object()) throw usage("spec must be a JSON object");

  json merged = json::object();
  if (overrides.contains("config") && !overrides["config"].is_null()) {
    const std::string path = overrides["config"].get<std::string>();
    try {
      merged = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kMalformed, path + ": " + e.what());
    }
    if (!merged.is_object()) throw Error(ErrorKind::kMalformed, path + ": not an object");
  }
  for (const auto& [key, value] : overrides.items()) {
    if (key == "config" || value.is_null()) continue;
    merged[key] = value;
  }

  static const char* kKnown[] = {
      "system", "seed", "sequence_count", "sequence_length", "desk_scale",
      "threads", "out", "dataset", "hidden", "learning_rate", "batch_size",
      "max_epochs", "patience", "truncation_window", "estimators", "oor",
      "checkpoints"};
  for (const auto& [key, value] : merged.items()) {
    bool known = false;
    for (const char* k : kKnown) known = known || key == k;
    if (!known) throw usage("unknown setting '" + key + "'");
  }

  ExperimentSpec spec;
  try {
    spec.system = merged.value("system", std::string("vdp"));
    (void)model_by_name(spec.system);
    spec.desk_scale = merged.value("desk_scale", false);
    spec.seed = merged.value("seed", std::uint64_t{0});
    const unsigned hw = std::thread::hardware_concurrency();
    spec.threads = merged.value("threads", static_cast<int>(hw ? hw : 1));
    if (spec.threads < 1) throw usage("threads must be >= 1");

    std::optional<DeskScale> desk;
    if (spec.desk_scale) desk = desk_scale_config(spec.system);
    spec.sequence_count =
        merged.value("sequence_count", desk ? desk->sequence_count : 100);
    spec.sequence_length = merged.value(
        "sequence_length",
        desk ? desk->sequence_length : default_sequence_length(spec.system));
    if (spec.sequence_count < 10) {
      throw usage("sequence_count must be at least 10 (got " +
                  std::to_string(spec.sequence_count) + ")");
    }
    if (spec.sequence_length < 1) throw usage("sequence_length must be >= 1");

    spec.out = merged.value("out", (fs::path("runs") / spec.system).string());
    spec.dataset_dir = merged.value("dataset", std::string());

    auto opt_int = [&](const char* key) -> std::optional<int> {
      if (merged.contains(key)) return merged[key].get<int>();
      return std::nullopt;
    };
    spec.hidden = opt_int("hidden");
    spec.batch_size = opt_int("batch_size");
    spec.max_epochs = opt_int("max_epochs");
    spec.patience = opt_int("patience");
    spec.truncation_window = opt_int("truncation_window");
    if (merged.contains("learning_rate")) {
      spec.learning_rate = merged["learning_rate"].get<double>();
    }
    if (desk) {
      if (!spec.max_epochs) spec.max_epochs = desk->max_epochs;
      if (!spec.truncation_window && desk->truncation_window > 0) {
        spec.truncation_window = desk->truncation_window;
      }
    }

    if (merged.contains("estimators")) {
      const json& e = merged["estimators"];
      spec.estimators = e.is_string() ? split_list(e.get<std::string>())
                                      : e.get<std::vector<std::string>>();
    }
    spec.oor = merged.value("oor", false);
    if (merged.contains("checkpoints")) {
      spec.checkpoints = merged["checkpoints"].get<std::map<std::string, std::string>>();
    }
  } catch (const json::exception& e) {
    throw usage(std::string("bad setting type: ") + e.what());
  }
  return spec;
}

TrainingPreset resolve_training(const ExperimentSpec& spec, Architecture arch) {
  TrainingPreset p = preset_config(spec.system, arch);
  if (spec.hidden) p.network.hidden = *spec.hidden;
  if (spec.learning_rate) p.training.learning_rate = *spec.learning_rate;
  if (spec.batch_size) p.training.batch_size = *spec.batch_size;
  if (spec.max_epochs) p.training.max_epochs = *spec.max_epochs;
  if (spec.patience) p.training.patience = *spec.patience;
  if (spec.truncation_window) p.training.truncation_window = *spec.truncation_window;
  const std::string tag = to_string(arch);
  p.network.seed = derive_seed(spec.seed, "init/" + tag);
  p.training.seed = derive_seed(spec.seed, "shuffle/" + tag);
  return p;
}

GenerateOutcome cmd_generate(const ExperimentSpec& spec, const LogSink& log) {
  const SystemModel model = model_by_name(spec.system);
  say(log, "generating " + std::to_string(spec.sequence_count) + " " + spec.system +
               " sequences of length " + std::to_string(spec.sequence_length));
  const Dataset ds =
      generate_dataset(model, spec.sequence_length, spec.sequence_count, spec.seed);
  const std::string dir = spec.dataset_path();
  save_dataset(ds, dir);
  std::ostringstream msg;
  msg << "dataset " << dir << ": system=" << model.name << " n=" << model.n
      << " m=" << model.m << " dt=" << model.dt << " T=" << ds.sequence_length
      << " train/val/test=" << ds.train.size() << "/" << ds.val.size() << "/"
      << ds.test.size() << " base_seed=" << ds.base_seed;
  say(log, msg.str());
  return GenerateOutcome{dir, ds.count(), ds.sequence_length};
}

TrainOutcome cmd_train(const ExperimentSpec& spec, Architecture arch,
                       const LogSink& log) {
  const Dataset ds = load_dataset(spec.dataset_path());
  if (ds.system->name != spec.system) {
    throw Error(ErrorKind::kDimensionMismatch,
                "dataset holds system '" + ds.system->name + "', expected '" +
                    spec.system + "'");
  }
  const TrainingPreset preset = resolve_training(spec, arch);
  const std::string dir = spec.arch_dir(arch);
  const std::string log_path = (fs::path(dir) / "train_log.csv").string();
  const std::string ckpt_path = (fs::path(dir) / "checkpoint.json").string();

  say(log, std::string("training ") + to_string(arch) + " on " + spec.system +
               ": hidden=" + std::to_string(preset.network.hidden) +
               " lr=" + format_double(preset.training.learning_rate) +
               " batch=" + std::to_string(preset.training.batch_size) +
               " max_epochs=" + std::to_string(preset.training.max_epochs) +
               " patience=" + std::to_string(preset.training.patience));
  TrainOptions options;
  options.threads = spec.threads;
  options.on_epoch = [&](const TrainRecord& r) {
    const int e = r.epochs();
    if (e == 1 || e % 10 == 0) {
      say(log, std::string("  ") + to_string(arch) + " epoch " + std::to_string(e) +
                   " train=" + format_double(r.train_loss.back()) +
                   " val=" + format_double(r.val_loss.back()) +
                   " best=" + format_double(r.best_val_loss) + " @" +
                   std::to_string(r.best_epoch));
    }
  };

  auto persist = [&](const TrainResult& result) {
    write_text_file(log_path, train_log_csv(result.record));
    if (result.record.best_epoch > 0) {
      CheckpointInfo info{spec.system, result.record.best_epoch,
                          result.record.best_val_loss, result.record.wall_seconds};
      save_checkpoint(ckpt_path, result.params, info);
    }
  };

  try {
    const TrainResult result = train(ds, preset.network, preset.training, options);
    persist(result);
    say(log, std::string("  ") + to_string(arch) + " stopped at epoch " +
                 std::to_string(result.record.stopped_epoch) + ", best epoch " +
                 std::to_string(result.record.best_epoch) + " val=" +
                 format_double(result.record.best_val_loss) + " (" +
                 format_double(result.record.wall_seconds) + " s)");
    return TrainOutcome{ckpt_path, result.record};
  } catch (const TrainingDivergedError& e) {
    persist(e.partial());
    throw;
  }
}

EvaluateOutcome cmd_evaluate(const ExperimentSpec& spec, const LogSink& log) {
  const Dataset ds = load_dataset(spec.dataset_path());
  const auto model = ds.system;
  if (model->name != spec.system) {
    throw Error(ErrorKind::kDimensionMismatch,
                "dataset holds system '" + model->name + "', expected '" +
                    spec.system + "'");
  }
  std::vector<std::string> names = spec.estimators;
  if (names.empty()) names = {default_filter(*model), "jlstm", "elstm"};

  std::vector<std::unique_ptr<Estimator>> owned;
  std::map<std::string, double> train_seconds;
  for (const std::string& name : names) {
    if (name == "kf" || name == "ekf") {
      const FilterKind kind = name == "kf" ? FilterKind::kKF : FilterKind::kEKF;
      if ((kind == FilterKind::kKF) != (model->kind == ModelKind::kLinearZOH)) {
        throw usage(name + " does not apply to system '" + model->name + "'");
      }
      owned.push_back(std::make_unique<FilterEstimator>(model, kind));
      train_seconds[name] = 0.0;
      continue;
    }
    const Architecture arch = parse_architecture(name);
    const auto it = spec.checkpoints.find(to_string(arch));
    const std::string path = it != spec.checkpoints.end()
                                 ? it->second
                                 : (fs::path(spec.arch_dir(arch)) / "checkpoint.json").string();
    Checkpoint ckpt = load_checkpoint(path);
    const NetworkConfig& cfg = ckpt.params.config();
    if (cfg.arch != arch) {
      throw usage(path + " holds a " + to_string(cfg.arch) + " network, not " + name);
    }
    if (cfg.m != model->m || cfg.n != model->n) {
      throw Error(ErrorKind::kDimensionMismatch,
                  path + ": network maps m=" + std::to_string(cfg.m) + " to n=" +
                      std::to_string(cfg.n) + " but system '" + model->name +
                      "' has m=" + std::to_string(model->m) +
                      ", n=" + std::to_string(model->n));
    }
    if (!ckpt.info.system.empty() && ckpt.info.system != model->name) {
      say(log, "warning: " + path + " was trained on '" + ckpt.info.system + "'");
    }
    train_seconds[to_string(arch)] = ckpt.info.train_seconds;
    owned.push_back(std::make_unique<NetworkEstimator>(std::move(ckpt.params)));
  }
  std::vector<const Estimator*> estimators;
  for (const auto& e : owned) estimators.push_back(e.get());

  EvaluateOutcome outcome;
  say(log, "evaluating on " + std::to_string(ds.test.size()) + " test sequences");
  outcome.in_region = evaluate(*model, ds.test, estimators, ds.init_region);
  if (spec.oor) {
    const Box region = out_of_region_box(model->name);
    const auto oor_set = out_of_region_testset(
        *model, region, static_cast<int>(ds.test.size()),
        derive_seed(ds.base_seed, "oor"), ds.sequence_length);
    say(log, "evaluating on " + std::to_string(oor_set.size()) +
                 " out-of-region sequences");
    outcome.out_of_region = evaluate(*model, oor_set, estimators, region);
  }

  for (std::size_t k = 0; k < estimators.size(); ++k) {
    const EstimatorResult& r = outcome.in_region.results[k];
    SummaryRow row;
    row.system = model->name;
    row.estimator = r.name;
    row.nmse = r.nmse;
    if (outcome.out_of_region) row.nmse_oor = outcome.out_of_region->results[k].nmse;
    row.train_seconds = train_seconds[r.name];
    row.test_seconds = r.test_seconds;
    outcome.rows.push_back(row);
    say(log, "  " + r.name + ": nmse=" + format_double(row.nmse) +
                 (row.nmse_oor ? " nmse_oor=" + format_double(*row.nmse_oor) : "") +
                 " test_seconds=" + format_double(row.test_seconds));
  }

  const fs::path report(spec.report_dir());
  write_text_file((report / "summary.csv").string(), summary_csv(outcome.rows));
  write_text_file((report / ("error_curve_" + model->name + ".csv")).string(),
                  error_curve_csv(outcome.in_region));
  if (outcome.out_of_region) {
    write_text_file((report / ("error_curve_" + model->name + "_oor.csv")).string(),
                    error_curve_csv(*outcome.out_of_region));
  }
  return outcome;
}

ReproduceOutcome cmd_reproduce(const ExperimentSpec& spec, const LogSink& log) {
  ReproduceOutcome outcome;
  cmd_generate(spec, log);

  ExperimentSpec eval_spec = spec;
  eval_spec.oor = true;
  eval_spec.estimators = {default_filter(model_by_name(spec.system))};
  std::optional<TrainingDivergedError> failure;
  for (Architecture arch : {Architecture::kJLSTM, Architecture::kELSTM}) {
    try {
      TrainOutcome t = cmd_train(spec, arch, log);
      outcome.records[to_string(arch)] = std::move(t.record);
      eval_spec.estimators.push_back(to_string(arch));
    } catch (const TrainingDivergedError& e) {
      say(log, std::string("  ") + to_string(arch) + " diverged: " + e.what());
      outcome.records[to_string(arch)] = e.partial().record;
      if (!failure) failure.emplace(e);
    }
  }
  eval_spec.checkpoints.clear();
  outcome.evaluation = cmd_evaluate(eval_spec, log);
  if (failure) throw *failure;
  return outcome;
}

}  // namespace jlse
