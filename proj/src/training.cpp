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

#include "jlse/training.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "jlse/csv.hpp"
#include "jlse/rng.hpp"
#include "parallel.hpp"

namespace jlse {

namespace {

Series targets_of(const Trajectory& traj) {
  return traj.states.rightCols(traj.length());
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// Fisher-Yates driven by the portable Rng.
void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace

void TrainConfig::validate(int train_count) const {
  auto fail = [](const std::string& why) {
    throw Error(ErrorKind::kInvalidArgument, "train config: " + why);
  };
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    fail("learning_rate must be positive");
  }
  if (batch_size < 1 || batch_size > train_count) {
    fail("batch_size must lie in [1, |train|] = [1, " +
         std::to_string(train_count) + "]");
  }
  if (max_epochs < 1) fail("max_epochs must be >= 1");
  if (patience < 1) fail("patience must be >= 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 >= 0.0 && adam_beta2 < 1.0) || !(adam_eps > 0.0)) {
    fail("Adam constants out of range");
  }
  if (truncation_window < 0) fail("truncation_window must be >= 0");
}

void adam_update(NetworkParams& params, const GradientSet& grads,
                 AdamMoments& moments, const TrainConfig& cfg) {
  if (!params.same_shape(grads)) {
    throw Error(ErrorKind::kDimensionMismatch, "adam_update: gradient shape");
  }
  if (!grads.flat().allFinite()) {
    throw Error(ErrorKind::kTrainingDiverged, "adam_update: non-finite gradient");
  }
  const Eigen::Index size = params.size();
  if (moments.first.size() != size) {
    moments.first = Vector::Zero(size);
    moments.second = Vector::Zero(size);
    moments.step = 0;
  }
  ++moments.step;
  const double b1 = cfg.adam_beta1;
  const double b2 = cfg.adam_beta2;
  const auto& g = grads.flat().array();
  moments.first = b1 * moments.first.array() + (1.0 - b1) * g;
  moments.second = b2 * moments.second.array() + (1.0 - b2) * g.square();
  const double t = static_cast<double>(moments.step);
  const double c1 = 1.0 - std::pow(b1, t);
  const double c2 = 1.0 - std::pow(b2, t);
  params.flat().array() -=
      cfg.learning_rate * (moments.first.array() / c1) /
      ((moments.second.array() / c2).sqrt() + cfg.adam_eps);
}

bool EarlyStopping::observe(int epoch, double val_loss) {
  if (val_loss < best_loss_ - 1e-12) {
    best_loss_ = val_loss;
    best_epoch_ = epoch;
    since_best_ = 0;
    return true;
  }
  ++since_best_;
  return false;
}

double mean_sequence_loss(const NetworkParams& params,
                          const std::vector<Trajectory>& sequences, int threads) {
  if (sequences.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "mean_sequence_loss: no sequences");
  }
  std::vector<double> losses(sequences.size());
  detail::parallel_for(sequences.size(), threads, [&](std::size_t k) {
    const Trajectory& traj = sequences[k];
    losses[k] = sequence_loss(predict(params, traj.measurements), targets_of(traj));
  });
  double sum = 0.0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(losses.size());
}

TrainResult train(const Dataset& ds, NetworkConfig cfg, const TrainConfig& tcfg,
                  const TrainOptions& options) {
  if (!ds.system || ds.train.empty() || ds.val.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "train: dataset needs non-empty train and validation splits");
  }
  const SystemModel& model = *ds.system;
  tcfg.validate(static_cast<int>(ds.train.size()));
  cfg.m = model.m;
  cfg.n = model.n;
  if (cfg.initial_estimate.size() == 0) {
    cfg.initial_estimate = model.init_region.centroid();
  }
  cfg.validate();

  const auto start = std::chrono::steady_clock::now();
  TrainResult result{init_params(cfg), {}};
  NetworkParams params = result.params;
  AdamMoments moments;
  EarlyStopping stopper(tcfg.patience);
  TrainRecord& record = result.record;
  Rng shuffle_rng(derive_seed(tcfg.seed, "shuffle"));

  std::vector<std::size_t> order(ds.train.size());
  std::vector<LossAndGradients> slots(static_cast<std::size_t>(tcfg.batch_size));
  GradientSet batch_grads(params.config());

  for (int epoch = 1; epoch <= tcfg.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_indices(order, shuffle_rng);

    double epoch_loss = 0.0;
    for (std::size_t first = 0; first < order.size();
         first += static_cast<std::size_t>(tcfg.batch_size)) {
      const std::size_t members =
          std::min(order.size() - first, static_cast<std::size_t>(tcfg.batch_size));
      detail::parallel_for(members, options.threads, [&](std::size_t k) {
        const Trajectory& traj = ds.train[order[first + k]];
        const ForwardResult fwd = forward_sequence(params, traj.measurements);
        slots[k] = bptt_gradients(params, fwd.tape, targets_of(traj),
                                  tcfg.truncation_window);
      });
      // Ordered reduction keeps the sum independent of the worker count.
      batch_grads.flat().setZero();
      for (std::size_t k = 0; k < members; ++k) {
        batch_grads.flat() += slots[k].grads.flat();
        epoch_loss += slots[k].loss;
      }
      batch_grads.flat() /= static_cast<double>(members);
      try {
        adam_update(params, batch_grads, moments, tcfg);
      } catch (const Error& e) {
        record.stopped_epoch = epoch;
        record.wall_seconds = elapsed_since(start);
        throw TrainingDivergedError(e.what(), result);
      }
    }
    const double train_loss = epoch_loss / static_cast<double>(order.size());
    const double val_loss = mean_sequence_loss(params, ds.val, options.threads);

    record.train_loss.push_back(train_loss);
    record.val_loss.push_back(val_loss);
    record.seconds_elapsed.push_back(elapsed_since(start));
    record.stopped_epoch = epoch;
    if (!std::isfinite(train_loss) || !std::isfinite(val_loss)) {
      record.wall_seconds = elapsed_since(start);
      throw TrainingDivergedError(
          "train: non-finite loss at epoch " + std::to_string(epoch), result);
    }
    if (stopper.observe(epoch, val_loss)) {
      result.params = params;
      record.best_epoch = epoch;
      record.best_val_loss = val_loss;
    }
    if (options.on_epoch) options.on_epoch(record);
    if (stopper.should_stop()) break;
  }
  record.wall_seconds = elapsed_since(start);
  return result;
}

TrainingPreset preset_config(const std::string& system, Architecture arch) {
  TrainingPreset p;
  p.network.arch = arch;
  p.network.hidden = 50;
  TrainConfig& t = p.training;
  const bool jordan = is_jordan(arch);
  if (system == "springs") {
    t.batch_size = 10;
    t.patience = 50;
    t.max_epochs = 8000;
    t.learning_rate = 1e-3;
  } else if (system == "pendulum") {
    t.batch_size = 20;
    t.patience = 50;
    t.max_epochs = 3000;
    t.learning_rate = jordan ? 1e-3 : 1e-4;
  } else if (system == "vdp") {
    t.batch_size = 20;
    t.patience = 15;
    t.max_epochs = 3000;
    t.learning_rate = jordan ? 1e-2 : 1e-3;
  } else {
    throw Error(ErrorKind::kInvalidArgument, "no preset for system '" + system + "'");
  }
  return p;
}

std::string train_log_csv(const TrainRecord& record) {
  std::string out = "epoch,train_loss,val_loss,seconds_elapsed\n";
  for (std::size_t e = 0; e < record.val_loss.size(); ++e) {
    out += std::to_string(e + 1) + ',' + format_double(record.train_loss[e]) + ',' +
           format_double(record.val_loss[e]) + ',' +
           format_double(record.seconds_elapsed[e]) + '\n';
  }
  return out;
}

}  // namespace jlse
