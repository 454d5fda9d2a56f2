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

#include "jlse/networks.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "jlse/errors.hpp"
#include "jlse/rng.hpp"

namespace jlse {

namespace {

// Logistic and tanh on whole blocks through the vectorized exp. Both
// saturate cleanly: exp overflowing to inf gives exactly 0 or -1.
template <typename Block>
void sigmoid_inplace(Block&& z) {
  z = (1.0 + (-z.array()).exp()).inverse().matrix();
}
template <typename Block>
void tanh_inplace(Block&& z) {
  z = (2.0 * (1.0 + (-2.0 * z.array()).exp()).inverse() - 1.0).matrix();
}

constexpr const char* kGateNames[4] = {"f", "i", "o", "c"};

// Forward pass for one step. Writes the gate activations into `gates` and
// the new hidden/cell vectors; `pre` is W_in y + b_gate for this step.
struct StepKernel {
  const NetworkParams& params;
  bool lstm;
  Eigen::Index h;

  void run(const Eigen::Ref<const Vector>& pre,
           const Eigen::Ref<const Vector>& recurrent,
           const Eigen::Ref<const Vector>& cell_prev, Vector& gates,
           Vector& cell, Vector& cell_tanh, Vector& hidden) const {
    gates.noalias() = params.w_rec() * recurrent;
    gates += pre;
    if (!lstm) {
      sigmoid_inplace(gates);
      hidden = gates;
      return;
    }
    sigmoid_inplace(gates.head(3 * h));
    tanh_inplace(gates.tail(h));
    const auto f = gates.segment(0, h);
    const auto i = gates.segment(h, h);
    const auto o = gates.segment(2 * h, h);
    const auto g = gates.segment(3 * h, h);
    cell = f.cwiseProduct(cell_prev) + i.cwiseProduct(g);
    cell_tanh = cell;
    tanh_inplace(cell_tanh);
    hidden = o.cwiseProduct(cell_tanh);
  }
};

void check_input(const NetworkParams& params, const Series& measurements) {
  const NetworkConfig& cfg = params.config();
  if (measurements.rows() != cfg.m) {
    throw Error(ErrorKind::kDimensionMismatch,
                "network input has " + std::to_string(measurements.rows()) +
                    " rows, expected m = " + std::to_string(cfg.m));
  }
  if (measurements.cols() < 1) {
    throw Error(ErrorKind::kInvalidArgument, "empty measurement sequence");
  }
}

void check_state(const NetworkConfig& cfg, const NetworkState& s) {
  if (s.a.size() != cfg.hidden || s.c.size() != cfg.hidden ||
      s.x_prev.size() != cfg.n) {
    throw Error(ErrorKind::kDimensionMismatch, "network state has wrong shape");
  }
}

// Shared roll-out; records a tape when `tape` is non-null.
Series roll_out(const NetworkParams& params, const Series& measurements,
                const NetworkState& init, Tape* tape) {
  check_input(params, measurements);
  const NetworkConfig& cfg = params.config();
  check_state(cfg, init);
  const Eigen::Index steps = measurements.cols();
  const Eigen::Index h = cfg.hidden;
  const bool lstm = is_lstm(cfg.arch);
  const bool jordan = is_jordan(cfg.arch);

  Matrix pre = params.w_in() * measurements;
  pre.colwise() += params.b_gate().col(0);

  Series estimates(cfg.n, steps);
  if (tape) {
    tape->inputs = measurements;
    tape->recurrent.resize(cfg.recurrent_dim(), steps);
    tape->gates.resize(cfg.gate_rows(), steps);
    tape->hidden.resize(h, steps);
    if (lstm) {
      tape->cell_prev.resize(h, steps);
      tape->cell_tanh.resize(h, steps);
    }
  }

  const StepKernel kernel{params, lstm, h};
  Vector recurrent = jordan ? init.x_prev : init.a;
  Vector cell = init.c;
  Vector cell_next(h), cell_tanh(h), hidden(h), gates(cfg.gate_rows());
  Vector estimate(cfg.n);
  for (Eigen::Index t = 0; t < steps; ++t) {
    if (tape) {
      tape->recurrent.col(t) = recurrent;
      if (lstm) tape->cell_prev.col(t) = cell;
    }
    kernel.run(pre.col(t), recurrent, cell, gates, cell_next, cell_tanh, hidden);
    estimate.noalias() = params.w_out() * hidden;
    estimate += params.b_out().col(0);
    estimates.col(t) = estimate;
    if (tape) {
      tape->gates.col(t) = gates;
      tape->hidden.col(t) = hidden;
      if (lstm) tape->cell_tanh.col(t) = cell_tanh;
    }
    if (lstm) cell.swap(cell_next);
    if (jordan) {
      recurrent = estimate;
    } else {
      recurrent = hidden;
    }
  }
  if (tape) tape->estimates = estimates;
  return estimates;
}

StepResult single_step(const NetworkParams& params, const NetworkState& state,
                       const Vector& y, Architecture expected) {
  const NetworkConfig& cfg = params.config();
  if (cfg.arch != expected) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string("step for ") + to_string(expected) +
                    " called with " + to_string(cfg.arch) + " parameters");
  }
  check_state(cfg, state);
  if (y.size() != cfg.m) {
    throw Error(ErrorKind::kDimensionMismatch, "measurement has wrong dimension");
  }
  const Eigen::Index h = cfg.hidden;
  const bool lstm = is_lstm(cfg.arch);
  Vector pre = params.w_in() * y + params.b_gate().col(0);
  const Vector& recurrent = is_jordan(cfg.arch) ? state.x_prev : state.a;
  Vector gates(cfg.gate_rows()), cell(h), cell_tanh(h), hidden(h);
  StepKernel{params, lstm, h}.run(pre, recurrent, state.c, gates, cell,
                                  cell_tanh, hidden);
  StepResult out;
  out.estimate = params.w_out() * hidden + params.b_out().col(0);
  out.state.a = hidden;
  out.state.c = lstm ? cell : state.c;
  out.state.x_prev = is_jordan(cfg.arch) ? out.estimate : state.x_prev;
  if (lstm) {
    out.state.f = gates.segment(0, h);
    out.state.i = gates.segment(h, h);
    out.state.o = gates.segment(2 * h, h);
    out.state.c_tilde = gates.segment(3 * h, h);
  }
  return out;
}

}  // namespace

const char* to_string(Architecture arch) noexcept {
  switch (arch) {
    case Architecture::kERN: return "ern";
    case Architecture::kJRN: return "jrn";
    case Architecture::kELSTM: return "elstm";
    case Architecture::kJLSTM: return "jlstm";
  }
  return "unknown";
}

Architecture parse_architecture(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ern") return Architecture::kERN;
  if (lower == "jrn") return Architecture::kJRN;
  if (lower == "elstm") return Architecture::kELSTM;
  if (lower == "jlstm") return Architecture::kJLSTM;
  throw Error(ErrorKind::kInvalidArgument, "unknown architecture '" + name + "'");
}

bool is_lstm(Architecture arch) noexcept {
  return arch == Architecture::kELSTM || arch == Architecture::kJLSTM;
}

bool is_jordan(Architecture arch) noexcept {
  return arch == Architecture::kJRN || arch == Architecture::kJLSTM;
}

void NetworkConfig::validate() const {
  if (m < 1 || n < 1 || hidden < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "network dimensions m, n and hidden must be >= 1");
  }
  if (initial_estimate.size() != 0 && initial_estimate.size() != n) {
    throw Error(ErrorKind::kDimensionMismatch,
                "initial estimate must have n entries");
  }
}

long count_params(const NetworkConfig& cfg) {
  const long g = cfg.gate_rows();
  return g * cfg.m + g * cfg.recurrent_dim() + g +
         static_cast<long>(cfg.n) * cfg.hidden + cfg.n;
}

ParamBuffer::ParamBuffer(const NetworkConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.initial_estimate.size() == 0) {
    cfg_.initial_estimate = Vector::Zero(cfg_.n);
  }
  const Eigen::Index g = cfg_.gate_rows();
  const Eigen::Index h = cfg_.hidden;
  slot_shape_ = {{g, cfg_.m}, {g, cfg_.recurrent_dim()}, {g, 1}, {cfg_.n, h},
                 {cfg_.n, 1}};
  Eigen::Index offset = 0;
  for (const auto& [rows, cols] : slot_shape_) {
    slot_offset_.push_back(offset);
    offset += rows * cols;
  }
  flat_ = Vector::Zero(offset);

  const char rec = is_jordan(cfg_.arch) ? 'x' : 'a';
  if (is_lstm(cfg_.arch)) {
    for (int k = 0; k < 4; ++k) {
      arrays_.push_back({std::string("W_") + kGateNames[k] + "y", 0, k * h, h, cfg_.m});
    }
    for (int k = 0; k < 4; ++k) {
      arrays_.push_back({std::string("W_") + kGateNames[k] + rec, 1, k * h, h,
                         cfg_.recurrent_dim()});
    }
    for (int k = 0; k < 4; ++k) {
      arrays_.push_back({std::string("b_") + kGateNames[k], 2, k * h, h, 1});
    }
  } else {
    arrays_.push_back({"W_ay", 0, 0, h, cfg_.m});
    arrays_.push_back({std::string("W_a") + rec, 1, 0, h, cfg_.recurrent_dim()});
    arrays_.push_back({"b_a", 2, 0, h, 1});
  }
  arrays_.push_back({"W_xa", 3, 0, cfg_.n, h});
  arrays_.push_back({"b_x", 4, 0, cfg_.n, 1});
}

Eigen::Map<Matrix> ParamBuffer::slot(int index) {
  const auto& [rows, cols] = slot_shape_.at(index);
  return Eigen::Map<Matrix>(flat_.data() + slot_offset_[index], rows, cols);
}

Eigen::Map<const Matrix> ParamBuffer::slot(int index) const {
  const auto& [rows, cols] = slot_shape_.at(index);
  return Eigen::Map<const Matrix>(flat_.data() + slot_offset_[index], rows, cols);
}

const NamedArray& ParamBuffer::array(const std::string& name) const {
  for (const NamedArray& a : arrays_) {
    if (a.name == name) return a;
  }
  throw Error(ErrorKind::kInvalidArgument, "no parameter array named " + name);
}

Matrix ParamBuffer::get(const std::string& name) const {
  const NamedArray& a = array(name);
  return slot(a.slot).block(a.row0, 0, a.rows, a.cols);
}

void ParamBuffer::set(const std::string& name, const Matrix& value) {
  const NamedArray& a = array(name);
  if (value.rows() != a.rows || value.cols() != a.cols) {
    throw Error(ErrorKind::kDimensionMismatch, "wrong shape for " + name);
  }
  slot(a.slot).block(a.row0, 0, a.rows, a.cols) = value;
}

bool ParamBuffer::same_shape(const ParamBuffer& other) const {
  return cfg_.arch == other.cfg_.arch && cfg_.m == other.cfg_.m &&
         cfg_.n == other.cfg_.n && cfg_.hidden == other.cfg_.hidden;
}

NetworkParams init_params(const NetworkConfig& cfg) {
  NetworkParams params(cfg);
  Rng glorot(derive_seed(cfg.seed, "glorot"));
  for (const NamedArray& a : params.arrays()) {
    if (a.slot != 0 && a.slot != 1) continue;
    const double limit = std::sqrt(6.0 / static_cast<double>(a.rows + a.cols));
    auto block = params.slot(a.slot).block(a.row0, 0, a.rows, a.cols);
    for (Eigen::Index r = 0; r < a.rows; ++r) {
      for (Eigen::Index c = 0; c < a.cols; ++c) {
        block(r, c) = glorot.uniform(-limit, limit);
      }
    }
  }

  // Orthogonal read-out: rows (or columns, when n > hidden) of the Q factor
  // of a Gaussian matrix, signs fixed so that R has a positive diagonal.
  Rng ortho(derive_seed(cfg.seed, "orthogonal"));
  const Eigen::Index h = cfg.hidden;
  const Eigen::Index dim = std::max<Eigen::Index>(h, cfg.n);
  Matrix gaussian(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) gaussian(r, c) = ortho.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(gaussian);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (r(k, k) < 0.0) q.col(k) = -q.col(k);
  }
  params.w_out() = q.topLeftCorner(cfg.n, h);
  return params;
}

NetworkState initial_state(const NetworkConfig& cfg) {
  NetworkState s;
  s.a = Vector::Zero(cfg.hidden);
  s.c = Vector::Zero(cfg.hidden);
  s.x_prev = cfg.initial_estimate.size() == cfg.n ? cfg.initial_estimate
                                                   : Vector::Zero(cfg.n);
  return s;
}

StepResult ern_step(const NetworkParams& p, const NetworkState& s, const Vector& y) {
  return single_step(p, s, y, Architecture::kERN);
}
StepResult jrn_step(const NetworkParams& p, const NetworkState& s, const Vector& y) {
  return single_step(p, s, y, Architecture::kJRN);
}
StepResult elstm_step(const NetworkParams& p, const NetworkState& s, const Vector& y) {
  return single_step(p, s, y, Architecture::kELSTM);
}
StepResult jlstm_step(const NetworkParams& p, const NetworkState& s, const Vector& y) {
  return single_step(p, s, y, Architecture::kJLSTM);
}
StepResult network_step(const NetworkParams& p, const NetworkState& s,
                        const Vector& y) {
  return single_step(p, s, y, p.config().arch);
}

ForwardResult forward_sequence(const NetworkParams& params,
                               const Series& measurements,
                               const NetworkState& init) {
  ForwardResult out;
  out.estimates = roll_out(params, measurements, init, &out.tape);
  return out;
}

ForwardResult forward_sequence(const NetworkParams& params,
                               const Series& measurements) {
  return forward_sequence(params, measurements, initial_state(params.config()));
}

Series predict(const NetworkParams& params, const Series& measurements) {
  return roll_out(params, measurements, initial_state(params.config()), nullptr);
}

std::vector<Series> predict_batch(const NetworkParams& params,
                                  const std::vector<Series>& measurements) {
  if (measurements.empty()) return {};
  const NetworkConfig& cfg = params.config();
  const Eigen::Index steps = measurements.front().cols();
  for (const Series& y : measurements) {
    check_input(params, y);
    if (y.cols() != steps) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "predict_batch: sequences must share one length");
    }
  }
  const Eigen::Index batch = static_cast<Eigen::Index>(measurements.size());
  const Eigen::Index h = cfg.hidden;
  const bool lstm = is_lstm(cfg.arch);
  const bool jordan = is_jordan(cfg.arch);

  // Column t * batch + k holds step t of sequence k.
  Matrix stacked(cfg.m, steps * batch);
  for (Eigen::Index k = 0; k < batch; ++k) {
    for (Eigen::Index t = 0; t < steps; ++t) {
      stacked.col(t * batch + k) = measurements[static_cast<std::size_t>(k)].col(t);
    }
  }
  Matrix pre = params.w_in() * stacked;
  pre.colwise() += params.b_gate().col(0);

  const NetworkState init = initial_state(cfg);
  Matrix recurrent = (jordan ? init.x_prev : init.a).replicate(1, batch);
  Matrix cell = init.c.replicate(1, batch);
  Matrix gates(cfg.gate_rows(), batch), hidden(h, batch), cell_tanh(h, batch);
  Matrix out(cfg.n, steps * batch);
  for (Eigen::Index t = 0; t < steps; ++t) {
    gates.noalias() = params.w_rec() * recurrent;
    gates += pre.middleCols(t * batch, batch);
    if (lstm) {
      sigmoid_inplace(gates.topRows(3 * h));
      tanh_inplace(gates.bottomRows(h));
      cell = gates.middleRows(0, h).cwiseProduct(cell) +
             gates.middleRows(h, h).cwiseProduct(gates.middleRows(3 * h, h));
      cell_tanh = cell;
      tanh_inplace(cell_tanh);
      hidden = gates.middleRows(2 * h, h).cwiseProduct(cell_tanh);
    } else {
      sigmoid_inplace(gates);
      hidden = gates;
    }
    auto estimate = out.middleCols(t * batch, batch);
    estimate.noalias() = params.w_out() * hidden;
    estimate.colwise() += params.b_out().col(0);
    if (jordan) {
      recurrent = estimate;
    } else {
      recurrent = hidden;
    }
  }

  std::vector<Series> estimates(measurements.size(), Series(cfg.n, steps));
  for (Eigen::Index k = 0; k < batch; ++k) {
    for (Eigen::Index t = 0; t < steps; ++t) {
      estimates[static_cast<std::size_t>(k)].col(t) = out.col(t * batch + k);
    }
  }
  return estimates;
}

double sequence_loss(const Series& estimates, const Series& targets) {
  if (estimates.rows() != targets.rows() || estimates.cols() != targets.cols()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "estimates and targets have different shapes");
  }
  return (estimates - targets).squaredNorm() /
         static_cast<double>(estimates.size());
}

LossAndGradients bptt_gradients(const NetworkParams& params, const Tape& tape,
                                const Series& targets, int truncation_window) {
  const NetworkConfig& cfg = params.config();
  const Series& est = tape.estimates;
  if (targets.rows() != est.rows() || targets.cols() != est.cols()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "bptt_gradients: targets must be n x T like the estimates");
  }
  const Eigen::Index steps = est.cols();
  const Eigen::Index h = cfg.hidden;
  const bool lstm = is_lstm(cfg.arch);
  const bool jordan = is_jordan(cfg.arch);

  LossAndGradients out;
  out.loss = sequence_loss(est, targets);
  out.grads = GradientSet(cfg);

  const double scale = 2.0 / static_cast<double>(est.size());
  Matrix d_gates(cfg.gate_rows(), steps);
  Matrix d_est(cfg.n, steps);

  const auto w_out = params.w_out();
  const auto w_rec = params.w_rec();
  Vector carry_x = Vector::Zero(cfg.n);   // dL/dx-hat(t) from step t+1
  Vector carry_a = Vector::Zero(h);       // dL/da(t) from step t+1
  Vector carry_c = Vector::Zero(h);       // dL/dc(t) from step t+1
  Vector dx(cfg.n), da(h), dc(h), dr(cfg.recurrent_dim());

  for (Eigen::Index t = steps - 1; t >= 0; --t) {
    dx = scale * (est.col(t) - targets.col(t));
    if (jordan) dx += carry_x;
    d_est.col(t) = dx;
    da.noalias() = w_out.transpose() * dx;
    if (!jordan) da += carry_a;

    auto dz = d_gates.col(t);
    if (lstm) {
      const auto gates = tape.gates.col(t);
      const auto f = gates.segment(0, h);
      const auto i = gates.segment(h, h);
      const auto o = gates.segment(2 * h, h);
      const auto g = gates.segment(3 * h, h);
      const auto tc = tape.cell_tanh.col(t);
      const auto c_prev = tape.cell_prev.col(t);
      dc = carry_c.array() +
           da.array() * o.array() * (1.0 - tc.array().square());
      dz.segment(0, h) = (dc.array() * c_prev.array()) * f.array() * (1.0 - f.array());
      dz.segment(h, h) = (dc.array() * g.array()) * i.array() * (1.0 - i.array());
      dz.segment(2 * h, h) = (da.array() * tc.array()) * o.array() * (1.0 - o.array());
      dz.segment(3 * h, h) = (dc.array() * i.array()) * (1.0 - g.array().square());
      carry_c = dc.cwiseProduct(f);
    } else {
      const auto a = tape.gates.col(t);
      dz = da.array() * a.array() * (1.0 - a.array());
    }
    dr.noalias() = w_rec.transpose() * dz;
    if (jordan) {
      carry_x = dr;
    } else {
      carry_a = dr;
    }
    if (truncation_window > 0 && t % truncation_window == 0) {
      carry_x.setZero();
      carry_a.setZero();
      carry_c.setZero();
    }
  }

  GradientSet& grads = out.grads;
  grads.w_in().noalias() = d_gates * tape.inputs.transpose();
  grads.w_rec().noalias() = d_gates * tape.recurrent.transpose();
  grads.b_gate() = d_gates.rowwise().sum();
  grads.w_out().noalias() = d_est * tape.hidden.transpose();
  grads.b_out() = d_est.rowwise().sum();
  return out;
}

}  // namespace jlse
