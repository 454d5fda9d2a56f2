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

// Benchmark dynamical systems, their discretization, and noisy trajectory
// generation.
//
// All systems follow the discrete-time noisy model
//
//   x(t+1) = step(x(t)) + w(t+1),   w ~ N(0, Q)
//   y(t+1) = C x(t+1)   + v(t+1),   v ~ N(0, R)
//   x(0)   = u + e,                 u ~ Uniform(init_region), e ~ N(0, P0)
//
// where step() is either the exact zero-order-hold transition of a linear
// ODE or one classical RK4 step of a nonlinear vector field.

#ifndef JLSE_DYNAMICS_HPP_
#define JLSE_DYNAMICS_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "jlse/linalg.hpp"

namespace jlse {

// Axis-aligned box in R^n.
struct Box {
  Vector lower;
  Vector upper;

  static Box cube(Eigen::Index n, double lo, double hi);

  Eigen::Index dim() const { return lower.size(); }
  Vector centroid() const { return 0.5 * (lower + upper); }
  // Per-axis variance of a uniform draw from the box, (hi - lo)^2 / 12.
  Vector variance() const;
  bool contains(const Vector& x) const;
  // True when the interiors do not intersect; shared faces are allowed.
  bool disjoint(const Box& other) const;

  bool operator==(const Box& other) const {
    return lower == other.lower && upper == other.upper;
  }
};

enum class ModelKind { kLinearZOH, kNonlinearRK };

using Drift = std::function<Vector(const Vector&)>;

struct SystemModel {
  std::string name;
  int n = 0;  // state dimension
  int m = 0;  // measurement dimension
  double dt = 0.0;
  ModelKind kind = ModelKind::kLinearZOH;

  Drift drift;        // continuous-time vector field (kNonlinearRK)
  Matrix transition;  // discrete transition A_d (kLinearZOH)
  Matrix measurement; // C, m x n; every benchmark measures a linear map

  Matrix process_cov;      // Q
  Matrix measurement_cov;  // R
  Matrix initial_cov;      // P0
  Box init_region;         // training box for initial means

  // Deterministic part of the transition, x -> f(x).
  Vector step(const Vector& x) const;
  Vector measure(const Vector& x) const { return measurement * x; }

  // Throws kInvalidModel on any violated invariant.
  void validate() const;
};

// exp(a * dt) by scaling and squaring of the truncated Taylor series.
Matrix zoh_discretize(const Matrix& a, double dt);

// One classical fourth-order Runge-Kutta step.
Vector rk4_step(const Drift& drift, const Vector& x, double dt);

// Damped pendulum: g = 9.8, m = 2, b = 0.9, l = 1.
Vector pendulum_drift(const Vector& x);
// Van der Pol oscillator run backwards in time.
Vector vdp_drift(const Vector& x);

// Continuous-time matrix of the chain of ten springs (m=10, d=6, k=800),
// state ordered as (positions x_1..x_10, velocities v_1..v_10).
Matrix springs_system_matrix();

SystemModel springs_model();
SystemModel pendulum_model();
SystemModel vdp_model();

// "springs", "pendulum", "vdp"; throws kInvalidArgument otherwise.
SystemModel model_by_name(const std::string& name);
int default_sequence_length(const std::string& system);
// Initial-mean box for out-of-region testing.
Box out_of_region_box(const std::string& system);

SystemModel make_linear_model(std::string name, Matrix transition,
                              Matrix measurement, double dt, Matrix q,
                              Matrix r, Matrix p0, Box init_region);
SystemModel make_nonlinear_model(std::string name, int n, Drift drift,
                                 Matrix measurement, double dt, Matrix q,
                                 Matrix r, Matrix p0, Box init_region);

struct Trajectory {
  Series states;        // n x (T+1); column 0 is x(0)
  Series measurements;  // m x T; column t-1 is y(t)
  std::uint64_t seed = 0;

  int length() const { return static_cast<int>(measurements.cols()); }
  bool operator==(const Trajectory& other) const {
    return seed == other.seed && states == other.states &&
           measurements == other.measurements;
  }
};

// Mean of the initial condition for a sequence seeded with `seed`.
Vector sample_initial_mean(const Box& region, std::uint64_t seed);

Trajectory generate_trajectory(const SystemModel& model, int T,
                               const Box& init_region, std::uint64_t seed);

// Like generate_trajectory, but a sequence that diverges (the reversed Van
// der Pol oscillator has an unstable limit cycle that noise can push a state
// across) is redrawn with seed derive_seed(seed, "retry/<k>"), k = 1, 2, ...
// The returned trajectory records the seed that produced it.
Trajectory generate_finite_trajectory(const SystemModel& model, int T,
                                      const Box& init_region, std::uint64_t seed,
                                      int max_attempts = 100);

struct Dataset {
  std::shared_ptr<const SystemModel> system;
  int sequence_length = 0;
  std::uint64_t base_seed = 0;
  Box init_region;
  std::array<double, 3> split_ratio{0.8, 0.1, 0.1};
  std::vector<Trajectory> train;
  std::vector<Trajectory> val;
  std::vector<Trajectory> test;

  int count() const {
    return static_cast<int>(train.size() + val.size() + test.size());
  }
  bool operator==(const Dataset& other) const;
};

struct SplitSizes {
  int train, val, test;
};
SplitSizes split_sizes(int count);

// `count` sequences seeded base_seed + i, split 80:10:10 in order.
Dataset generate_dataset(const SystemModel& model, int T, int count,
                         std::uint64_t base_seed);
Dataset generate_dataset(const SystemModel& model, int T, int count,
                         std::uint64_t base_seed, const Box& init_region);

// Dataset directory: manifest.json + seq_0000.csv ...
void save_dataset(const Dataset& ds, const std::string& dir);
Dataset load_dataset(const std::string& dir);

}  // namespace jlse

#endif  // JLSE_DYNAMICS_HPP_
