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

#include "jlse/c_api.h"

#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "jlse/checkpoint.hpp"
#include "jlse/dynamics.hpp"
#include "jlse/errors.hpp"
#include "jlse/evaluation.hpp"
#include "jlse/experiment.hpp"
#include "jlse/filters.hpp"
#include "jlse/networks.hpp"
#include "jlse/rng.hpp"
#include "jlse/training.hpp"

struct jlse_dataset {
  jlse::Dataset value;
};

struct jlse_network {
  jlse::NetworkParams value;
};

namespace {

thread_local std::string g_last_error;
thread_local jlse_error_detail g_last_detail = JLSE_DETAIL_NONE;

jlse_status fail(jlse_status status, jlse_error_detail detail, std::string msg) {
  g_last_error = std::move(msg);
  g_last_detail = detail;
  return status;
}

jlse_status from_error(const jlse::Error& e) {
  using jlse::ErrorKind;
  switch (e.kind()) {
    case ErrorKind::kInvalidArgument:
      return fail(JLSE_ERR_USAGE, JLSE_DETAIL_INVALID_ARGUMENT, e.what());
    case ErrorKind::kInvalidModel:
      return fail(JLSE_ERR_USAGE, JLSE_DETAIL_INVALID_MODEL, e.what());
    case ErrorKind::kNotFound:
      return fail(JLSE_ERR_IO, JLSE_DETAIL_NOT_FOUND, e.what());
    case ErrorKind::kIo:
      return fail(JLSE_ERR_IO, JLSE_DETAIL_IO, e.what());
    case ErrorKind::kMalformed:
      return fail(JLSE_ERR_IO, JLSE_DETAIL_MALFORMED, e.what());
    case ErrorKind::kDimensionMismatch:
      return fail(JLSE_ERR_IO, JLSE_DETAIL_DIMENSION_MISMATCH, e.what());
    case ErrorKind::kSingular:
      return fail(JLSE_ERR_NUMERIC, JLSE_DETAIL_SINGULAR, e.what());
    case ErrorKind::kIntegrationDiverged:
      return fail(JLSE_ERR_NUMERIC, JLSE_DETAIL_INTEGRATION_DIVERGED, e.what());
    case ErrorKind::kTrainingDiverged:
      return fail(JLSE_ERR_NUMERIC, JLSE_DETAIL_TRAINING_DIVERGED, e.what());
  }
  return fail(JLSE_ERR_INTERNAL, JLSE_DETAIL_INTERNAL, e.what());
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
jlse_status guarded(Body&& body) {
  try {
    body();
    return JLSE_OK;
  } catch (const jlse::Error& e) {
    return from_error(e);
  } catch (const nlohmann::json::exception& e) {
    return fail(JLSE_ERR_USAGE, JLSE_DETAIL_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(JLSE_ERR_INTERNAL, JLSE_DETAIL_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(JLSE_ERR_INTERNAL, JLSE_DETAIL_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw jlse::Error(jlse::ErrorKind::kInvalidArgument, what);
}

const std::vector<jlse::Trajectory>& split_of(const jlse::Dataset& ds,
                                              jlse_split split) {
  switch (split) {
    case JLSE_SPLIT_TRAIN: return ds.train;
    case JLSE_SPLIT_VAL: return ds.val;
    case JLSE_SPLIT_TEST: return ds.test;
  }
  throw jlse::Error(jlse::ErrorKind::kInvalidArgument, "unknown split");
}

const jlse::Trajectory& sequence_of(const jlse_dataset* ds, jlse_split split,
                                    int index) {
  require(ds != nullptr, "dataset handle is NULL");
  const auto& part = split_of(ds->value, split);
  require(index >= 0 && static_cast<std::size_t>(index) < part.size(),
          "sequence index out of range");
  return part[static_cast<std::size_t>(index)];
}

// Column-per-step series <-> time-major C arrays.
void copy_out(const jlse::Series& s, double* dst) {
  Eigen::Map<jlse::Matrix>(dst, s.rows(), s.cols()) = s;
}

jlse::Series copy_in(const double* src, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const jlse::Matrix>(src, rows, cols);
}

jlse::LogSink sink(jlse_log_fn log, void* user) {
  if (!log) return {};
  return [log, user](const std::string& line) { log(line.c_str(), user); };
}

std::vector<jlse::Series> unpack(const double* data, int m_test, int steps, int n) {
  std::vector<jlse::Series> out;
  const std::size_t stride = static_cast<std::size_t>(steps) * static_cast<std::size_t>(n);
  for (int k = 0; k < m_test; ++k) out.push_back(copy_in(data + k * stride, n, steps));
  return out;
}

}  // namespace

extern "C" {

const char* jlse_version(void) { return "1.0.0"; }

const char* jlse_last_error(void) { return g_last_error.c_str(); }

jlse_error_detail jlse_last_error_detail(void) { return g_last_detail; }

jlse_status jlse_dataset_generate(const char* system, int sequence_length, int count,
                                  uint64_t base_seed, jlse_dataset** out) {
  return guarded([&] {
    require(system != nullptr && out != nullptr, "NULL argument");
    const jlse::SystemModel model = jlse::model_by_name(system);
    auto ds = std::make_unique<jlse_dataset>();
    ds->value = jlse::generate_dataset(model, sequence_length, count, base_seed);
    *out = ds.release();
  });
}

jlse_status jlse_dataset_load(const char* dir, jlse_dataset** out) {
  return guarded([&] {
    require(dir != nullptr && out != nullptr, "NULL argument");
    auto ds = std::make_unique<jlse_dataset>();
    ds->value = jlse::load_dataset(dir);
    *out = ds.release();
  });
}

jlse_status jlse_dataset_save(const jlse_dataset* ds, const char* dir) {
  return guarded([&] {
    require(ds != nullptr && dir != nullptr, "NULL argument");
    jlse::save_dataset(ds->value, dir);
  });
}

void jlse_dataset_free(jlse_dataset* ds) { delete ds; }

jlse_status jlse_dataset_info_get(const jlse_dataset* ds, jlse_dataset_info* out) {
  return guarded([&] {
    require(ds != nullptr && out != nullptr, "NULL argument");
    const jlse::Dataset& d = ds->value;
    std::memset(out, 0, sizeof(*out));
    std::strncpy(out->system, d.system->name.c_str(), sizeof(out->system) - 1);
    out->n = d.system->n;
    out->m = d.system->m;
    out->dt = d.system->dt;
    out->sequence_length = d.sequence_length;
    out->train_count = static_cast<int>(d.train.size());
    out->val_count = static_cast<int>(d.val.size());
    out->test_count = static_cast<int>(d.test.size());
    out->base_seed = d.base_seed;
  });
}

jlse_status jlse_dataset_sequence(const jlse_dataset* ds, jlse_split split, int index,
                                  double* states, double* measurements) {
  return guarded([&] {
    const jlse::Trajectory& traj = sequence_of(ds, split, index);
    if (states) copy_out(traj.states, states);
    if (measurements) copy_out(traj.measurements, measurements);
  });
}

jlse_status jlse_filter_run(const jlse_dataset* ds, jlse_split split, int index,
                            double* estimates) {
  return guarded([&] {
    require(estimates != nullptr, "NULL argument");
    const jlse::Trajectory& traj = sequence_of(ds, split, index);
    const jlse::SystemModel& model = *ds->value.system;
    const auto kind = model.kind == jlse::ModelKind::kLinearZOH ? jlse::FilterKind::kKF
                                                                : jlse::FilterKind::kEKF;
    copy_out(jlse::run_filter(model, traj, kind), estimates);
  });
}

jlse_status jlse_network_create(const char* arch, int m, int n, int hidden,
                                uint64_t seed, jlse_network** out) {
  return guarded([&] {
    require(arch != nullptr && out != nullptr, "NULL argument");
    jlse::NetworkConfig cfg;
    cfg.arch = jlse::parse_architecture(arch);
    cfg.m = m;
    cfg.n = n;
    cfg.hidden = hidden;
    cfg.seed = seed;
    auto net = std::make_unique<jlse_network>(jlse_network{jlse::init_params(cfg)});
    *out = net.release();
  });
}

jlse_status jlse_network_train(const jlse_dataset* ds, const char* arch,
                               const char* overrides_json, int threads,
                               jlse_network** out) {
  return guarded([&] {
    require(ds != nullptr && arch != nullptr && out != nullptr, "NULL argument");
    const jlse::Dataset& d = ds->value;
    const jlse::Architecture a = jlse::parse_architecture(arch);
    jlse::TrainingPreset preset = jlse::preset_config(d.system->name, a);
    if (overrides_json && *overrides_json) {
      const auto j = nlohmann::json::parse(overrides_json);
      require(j.is_object(), "overrides must be a JSON object");
      for (const auto& [key, value] : j.items()) {
        if (key == "learning_rate") preset.training.learning_rate = value.get<double>();
        else if (key == "batch_size") preset.training.batch_size = value.get<int>();
        else if (key == "max_epochs") preset.training.max_epochs = value.get<int>();
        else if (key == "patience") preset.training.patience = value.get<int>();
        else if (key == "truncation_window") preset.training.truncation_window = value.get<int>();
        else if (key == "hidden") preset.network.hidden = value.get<int>();
        else if (key == "seed") {
          preset.network.seed = jlse::derive_seed(value.get<uint64_t>(), "init");
          preset.training.seed = jlse::derive_seed(value.get<uint64_t>(), "shuffle");
        } else {
          require(false, "unknown training override");
        }
      }
    }
    jlse::TrainOptions options;
    options.threads = threads;
    jlse::TrainResult result = jlse::train(d, preset.network, preset.training, options);
    *out = new jlse_network{std::move(result.params)};
  });
}

jlse_status jlse_network_load(const char* path, jlse_network** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "NULL argument");
    *out = new jlse_network{jlse::load_checkpoint(path).params};
  });
}

jlse_status jlse_network_save(const jlse_network* net, const char* path) {
  return guarded([&] {
    require(net != nullptr && path != nullptr, "NULL argument");
    jlse::save_checkpoint(path, net->value);
  });
}

void jlse_network_free(jlse_network* net) { delete net; }

long jlse_network_param_count(const jlse_network* net) {
  return net ? jlse::count_params(net->value.config()) : -1;
}

jlse_status jlse_network_predict(const jlse_network* net, const double* measurements,
                                 int sequence_length, double* estimates) {
  return guarded([&] {
    require(net != nullptr && measurements != nullptr && estimates != nullptr,
            "NULL argument");
    require(sequence_length >= 1, "sequence_length must be >= 1");
    const auto& cfg = net->value.config();
    copy_out(jlse::predict(net->value, copy_in(measurements, cfg.m, sequence_length)),
             estimates);
  });
}

jlse_status jlse_nmse(const double* truth, const double* estimates, int m_test,
                      int sequence_length, int n, double* out) {
  return guarded([&] {
    require(truth && estimates && out, "NULL argument");
    require(m_test >= 1 && sequence_length >= 1 && n >= 1, "sizes must be >= 1");
    *out = jlse::nmse(unpack(truth, m_test, sequence_length, n),
                      unpack(estimates, m_test, sequence_length, n));
  });
}

jlse_status jlse_error_curve(const double* truth, const double* estimates, int m_test,
                             int sequence_length, int n, double* curve) {
  return guarded([&] {
    require(truth && estimates && curve, "NULL argument");
    require(m_test >= 1 && sequence_length >= 1 && n >= 1, "sizes must be >= 1");
    const jlse::Vector c = jlse::error_curve(unpack(truth, m_test, sequence_length, n),
                                             unpack(estimates, m_test, sequence_length, n));
    Eigen::Map<jlse::Vector>(curve, c.size()) = c;
  });
}

jlse_status jlse_cmd_generate(const char* spec_json, jlse_log_fn log, void* user) {
  return guarded([&] {
    jlse::cmd_generate(jlse::resolve_spec(spec_json ? spec_json : ""), sink(log, user));
  });
}

jlse_status jlse_cmd_train(const char* spec_json, const char* arch, jlse_log_fn log,
                           void* user) {
  return guarded([&] {
    require(arch != nullptr, "NULL architecture");
    jlse::cmd_train(jlse::resolve_spec(spec_json ? spec_json : ""),
                    jlse::parse_architecture(arch), sink(log, user));
  });
}

jlse_status jlse_cmd_evaluate(const char* spec_json, jlse_log_fn log, void* user) {
  return guarded([&] {
    jlse::cmd_evaluate(jlse::resolve_spec(spec_json ? spec_json : ""), sink(log, user));
  });
}

jlse_status jlse_cmd_reproduce(const char* spec_json, jlse_log_fn log, void* user) {
  return guarded([&] {
    jlse::cmd_reproduce(jlse::resolve_spec(spec_json ? spec_json : ""), sink(log, user));
  });
}

}  // extern "C"
