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

// Model-based baselines: the Kalman filter for linear models and the
// extended Kalman filter for RK4-discretized nonlinear models.

#ifndef JLSE_FILTERS_HPP_
#define JLSE_FILTERS_HPP_

#include <optional>

#include "jlse/dynamics.hpp"
#include "jlse/linalg.hpp"

namespace jlse {

struct FilterState {
  Vector mean;  // x-hat
  Matrix cov;   // P
};

enum class FilterKind { kKF, kEKF };

// Both initializers place the mean at the centroid of the model's training
// box (unless given) and widen P0 by the variance of the uniform mean draw.
FilterState kf_init(const SystemModel& model,
                    const std::optional<Vector>& init_mean = std::nullopt);
FilterState ekf_init(const SystemModel& model,
                     const std::optional<Vector>& init_mean = std::nullopt);

FilterState kf_step(const FilterState& state, const SystemModel& model,
                    const Vector& y);
FilterState ekf_step(const FilterState& state, const SystemModel& model,
                     const Vector& y);

// Jacobian of the discrete step map by central differences with step
// 1e-6 * (1 + |x_i|) per coordinate.
Matrix step_jacobian(const SystemModel& model, const Vector& x);

// Estimates x-hat(1..T) as an n x T series. Only reads traj.measurements.
Series run_filter(const SystemModel& model, const Trajectory& traj,
                  FilterKind kind);
Series run_filter(const SystemModel& model, const Series& measurements,
                  FilterKind kind, const FilterState& init);

}  // namespace jlse

#endif  // JLSE_FILTERS_HPP_
