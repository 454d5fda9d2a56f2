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

#ifndef JLSE_TRAINING_HPP_
#define JLSE_TRAINING_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "jlse/dynamics.hpp"
#include "jlse/errors.hpp"
#include "jlse/networks.hpp"

namespace jlse {

struct TrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 20;
  int max_epochs = 3000;
  int patience = 15;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-7;
  std::uint64_t seed = 0;     // shuffling stream
  int truncation_window = 0;  // 0: full-sequence BPTT

  void validate(int train_count) const;
};

struct AdamMoments {
  Vector first;
  Vector second;
  long step = 0;  // number of updates applied so far
};

// One bias-corrected Adam update of every parameter; increments
// moments.step. Throws kTrainingDiverged on a non-finite gradient.
void adam_update(NetworkParams& params, const GradientSet& grads,
                 AdamMoments& moments, const TrainConfig& cfg);

// Patience bookkeeping on the validation loss. An epoch improves when its
// loss is below the best so far by at least 1e-12.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}

  // Returns true when `val_loss` is a new best.
  bool observe(int epoch, double val_loss);
  bool should_stop() const { return since_best_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }

 private:
  int patience_;
  int best_epoch_ = 0;
  int since_best_ = 0;
  double best_loss_ = std::numeric_limits<double>::infinity();
};

struct TrainRecord {
  std::vector<double> train_loss;       // per epoch, index 0 = epoch 1
  std::vector<double> val_loss;
  std::vector<double> seconds_elapsed;
  int best_epoch = 0;
  double best_val_loss = std::numeric_limits<double>::infinity();
  int stopped_epoch = 0;
  double wall_seconds = 0.0;

  int epochs() const { return static_cast<int>(val_loss.size()); }
};

struct TrainOptions {
  int threads = 1;
  // Called after every epoch with the record so far.
  std::function<void(const TrainRecord&)> on_epoch;
};

struct TrainResult {
  NetworkParams params;  // restored from the best validation epoch
  TrainRecord record;
};

class TrainingDivergedError : public Error {
 public:
  TrainingDivergedError(const std::string& what, TrainResult partial)
      : Error(ErrorKind::kTrainingDiverged, what), partial_(std::move(partial)) {}
  const TrainResult& partial() const { return partial_; }

 private:
  TrainResult partial_;
};

// Mean over sequences of the per-sequence loss of predict() against
// x(1..T). Deterministic for any thread count.
double mean_sequence_loss(const NetworkParams& params,
                          const std::vector<Trajectory>& sequences,
                          int threads = 1);

// Trains on ds.train with early stopping on ds.val. The network's m and n
// are taken from the dataset; an empty cfg.initial_estimate is replaced by
// the centroid of the system's training box.
TrainResult train(const Dataset& ds, NetworkConfig cfg, const TrainConfig& tcfg,
                  const TrainOptions& options = {});

struct TrainingPreset {
  NetworkConfig network;
  TrainConfig training;
};

// Hyperparameters used for each benchmark system at full scale.
TrainingPreset preset_config(const std::string& system, Architecture arch);

// epoch,train_loss,val_loss,seconds_elapsed
std::string train_log_csv(const TrainRecord& record);

}  // namespace jlse

#endif  // JLSE_TRAINING_HPP_
