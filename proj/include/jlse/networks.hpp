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

// Recurrent state estimators.
//
// Four architectures map a measurement sequence y(1..T) to state estimates
// x-hat(1..T). They differ in what is fed back into the next step:
//
//   ERN    a(t) = sig(W_ay y + W_aa a(t-1) + b_a)            hidden feedback
//   JRN    a(t) = sig(W_ay y + W_ax x-hat(t-1) + b_a)        output feedback
//   ELSTM  gates from (y, a(t-1)), LSTM cell update          hidden feedback
//   JLSTM  gates from (y, x-hat(t-1)), LSTM cell update      output feedback
//
// and every variant reads out x-hat(t) = W_xa a(t) + b_x.
//
// Parameters live in one flat buffer so the optimizer, finite-difference
// checks and checkpoints can treat them uniformly. Gate matrices are stored
// stacked (rows f, i, o, c~ for the LSTMs) and exposed individually through
// named views.

#ifndef JLSE_NETWORKS_HPP_
#define JLSE_NETWORKS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jlse/linalg.hpp"

namespace jlse {

enum class Architecture { kERN, kJRN, kELSTM, kJLSTM };
enum class Activation { kSigmoid };

const char* to_string(Architecture arch) noexcept;
// Case-insensitive "ern", "jrn", "elstm", "jlstm".
Architecture parse_architecture(const std::string& name);
bool is_lstm(Architecture arch) noexcept;
bool is_jordan(Architecture arch) noexcept;

struct NetworkConfig {
  Architecture arch = Architecture::kJLSTM;
  int m = 1;        // measurement (input) dimension
  int n = 1;        // state (output) dimension
  int hidden = 50;
  Activation recurrent_activation = Activation::kSigmoid;
  std::uint64_t seed = 0;
  // x-hat(0) fed to Jordan variants at t = 1; zeros when empty.
  Vector initial_estimate;

  int recurrent_dim() const { return is_jordan(arch) ? n : hidden; }
  int gate_rows() const { return is_lstm(arch) ? 4 * hidden : hidden; }
  void validate() const;
};

// Exact number of trainable scalars.
long count_params(const NetworkConfig& cfg);

// Location of one named parameter array inside the stacked storage.
struct NamedArray {
  std::string name;
  int slot;            // 0 W_in, 1 W_rec, 2 b_gate, 3 W_xa, 4 b_x
  Eigen::Index row0;   // first row inside the slot
  Eigen::Index rows;
  Eigen::Index cols;
};

class ParamBuffer {
 public:
  ParamBuffer() = default;
  explicit ParamBuffer(const NetworkConfig& cfg);  // zero-filled

  const NetworkConfig& config() const { return cfg_; }
  NetworkConfig& config() { return cfg_; }

  Vector& flat() { return flat_; }
  const Vector& flat() const { return flat_; }
  Eigen::Index size() const { return flat_.size(); }

  // Stacked storage: W_in (G x m), W_rec (G x r), b_gate (G), W_xa (n x h),
  // b_x (n), where G = gate_rows() and r = recurrent_dim().
  Eigen::Map<Matrix> slot(int index);
  Eigen::Map<const Matrix> slot(int index) const;

  Eigen::Map<Matrix> w_in() { return slot(0); }
  Eigen::Map<Matrix> w_rec() { return slot(1); }
  Eigen::Map<Matrix> b_gate() { return slot(2); }
  Eigen::Map<Matrix> w_out() { return slot(3); }
  Eigen::Map<Matrix> b_out() { return slot(4); }
  Eigen::Map<const Matrix> w_in() const { return slot(0); }
  Eigen::Map<const Matrix> w_rec() const { return slot(1); }
  Eigen::Map<const Matrix> b_gate() const { return slot(2); }
  Eigen::Map<const Matrix> w_out() const { return slot(3); }
  Eigen::Map<const Matrix> b_out() const { return slot(4); }

  // Named arrays in canonical order, e.g. W_fy, W_iy, ..., b_x.
  const std::vector<NamedArray>& arrays() const { return arrays_; }
  const NamedArray& array(const std::string& name) const;
  // Copy of / assignment to one named array.
  Matrix get(const std::string& name) const;
  void set(const std::string& name, const Matrix& value);

  bool same_shape(const ParamBuffer& other) const;
  bool operator==(const ParamBuffer& other) const {
    return same_shape(other) && flat_ == other.flat_;
  }

 private:
  NetworkConfig cfg_;
  Vector flat_;
  std::vector<Eigen::Index> slot_offset_;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> slot_shape_;
  std::vector<NamedArray> arrays_;
};

using NetworkParams = ParamBuffer;
using GradientSet = ParamBuffer;

// Glorot-uniform input and recurrent matrices, orthogonal W_xa, zero biases.
NetworkParams init_params(const NetworkConfig& cfg);

struct NetworkState {
  Vector a;       // hidden
  Vector c;       // cell (LSTM)
  Vector x_prev;  // previous estimate (Jordan)
  // Activations recorded by the last step (LSTM).
  Vector f, i, o, c_tilde;
};

// a = 0, c = 0, x_prev = cfg.initial_estimate.
NetworkState initial_state(const NetworkConfig& cfg);

struct StepResult {
  NetworkState state;
  Vector estimate;
};

StepResult ern_step(const NetworkParams& params, const NetworkState& state,
                    const Vector& y);
StepResult jrn_step(const NetworkParams& params, const NetworkState& state,
                    const Vector& y);
StepResult elstm_step(const NetworkParams& params, const NetworkState& state,
                      const Vector& y);
StepResult jlstm_step(const NetworkParams& params, const NetworkState& state,
                      const Vector& y);
// Dispatches on params.config().arch.
StepResult network_step(const NetworkParams& params, const NetworkState& state,
                        const Vector& y);

// Everything the backward pass needs, one column per step.
struct Tape {
  Series inputs;      // m x T
  Series recurrent;   // r x T, the recurrent input consumed at each step
  Series gates;       // G x T, activated gate values (f, i, o, c~) or a
  Series cell_prev;   // h x T (LSTM)
  Series cell_tanh;   // h x T, tanh(c(t)) (LSTM)
  Series hidden;      // h x T
  Series estimates;   // n x T
};

struct ForwardResult {
  Series estimates;  // n x T
  Tape tape;
};

ForwardResult forward_sequence(const NetworkParams& params,
                               const Series& measurements,
                               const NetworkState& init);
ForwardResult forward_sequence(const NetworkParams& params,
                               const Series& measurements);

// Inference only: same estimates as forward_sequence, no tape.
Series predict(const NetworkParams& params, const Series& measurements);

// Inference over several sequences of equal length, stepped in lockstep so
// the recurrent products run as matrix-matrix products. Agrees with predict
// up to floating-point reassociation.
std::vector<Series> predict_batch(const NetworkParams& params,
                                  const std::vector<Series>& measurements);

struct LossAndGradients {
  double loss = 0.0;
  GradientSet grads;
};

// Mean squared error over all T*n entries and its exact gradient by
// backpropagation through time. A positive truncation_window cuts gradient
// flow across chunk boundaries at multiples of the window.
LossAndGradients bptt_gradients(const NetworkParams& params, const Tape& tape,
                                const Series& targets,
                                int truncation_window = 0);

// Mean squared error of a forward pass against targets, without gradients.
double sequence_loss(const Series& estimates, const Series& targets);

}  // namespace jlse

#endif  // JLSE_NETWORKS_HPP_
