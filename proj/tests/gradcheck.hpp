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
// Finite-difference check of the backpropagated gradients, shared by the
// unit tests and the acceptance runner.

#ifndef JLSE_TESTS_GRADCHECK_HPP_
#define JLSE_TESTS_GRADCHECK_HPP_

#include <algorithm>
#include <cmath>
#include <random>

#include "jlse/networks.hpp"
#include "oracles.hpp"

namespace gradcheck {

struct Problem {
  jlse::NetworkParams params;
  jlse::Series inputs;   // m x T
  jlse::Series targets;  // n x T
};

// Glorot/orthogonal initialization, then every scalar (biases included)
// jittered so no gradient is structurally zero.
inline Problem random_problem(jlse::Architecture arch, int m, int n, int hidden, int T,
                              std::uint64_t seed) {
  jlse::NetworkConfig cfg;
  cfg.arch = arch;
  cfg.m = m;
  cfg.n = n;
  cfg.hidden = hidden;
  cfg.seed = seed;
  std::mt19937_64 gen(seed * 7919 + 1);
  cfg.initial_estimate = oracle::random_matrix(gen, n, 1, 0.5);
  Problem p{jlse::init_params(cfg), {}, {}};
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  for (Eigen::Index k = 0; k < p.params.size(); ++k) p.params.flat()(k) += jitter(gen);
  p.inputs = oracle::random_matrix(gen, m, T, 1.0);
  p.targets = oracle::random_matrix(gen, n, T, 1.0);
  return p;
}

// |a - b| / max(|a|, |b|, floor). With a step of 1e-5 the central
// difference carries ~1e-11 of rounding noise, so entries smaller than the
// floor are in effect checked to an absolute 1e-11.
inline double relative_error(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Largest entrywise relative error between the BPTT gradient and central
// differences with step h.
inline double max_relative_error(const Problem& p, double h = 1e-5, int window = 0) {
  const jlse::ForwardResult fwd = jlse::forward_sequence(p.params, p.inputs);
  const jlse::LossAndGradients lg = jlse::bptt_gradients(p.params, fwd.tape, p.targets, window);
  jlse::NetworkParams probe = p.params;
  auto loss = [&](const oracle::Vec& flat) {
    probe.flat() = flat;
    return jlse::sequence_loss(jlse::predict(probe, p.inputs), p.targets);
  };
  const oracle::Vec fd = oracle::central_gradient(loss, p.params.flat(), h);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < fd.size(); ++k) {
    worst = std::max(worst, relative_error(lg.grads.flat()(k), fd(k)));
  }
  return worst;
}

}  // namespace gradcheck

#endif  // JLSE_TESTS_GRADCHECK_HPP_
