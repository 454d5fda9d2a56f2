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

#include "jlse/filters.hpp"

#include <cmath>

#include "jlse/errors.hpp"

namespace jlse {

namespace {

FilterState init_common(const SystemModel& model,
                        const std::optional<Vector>& init_mean) {
  FilterState state;
  if (init_mean) {
    if (init_mean->size() != model.n) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "filter init: mean has wrong dimension");
    }
    state.mean = *init_mean;
  } else {
    state.mean = model.init_region.centroid();
  }
  state.cov = model.initial_cov;
  state.cov.diagonal() += model.init_region.variance();
  return state;
}

// Measurement update shared by KF and EKF, given the predicted moments.
FilterState correct(const Vector& mean_pred, const Matrix& cov_pred,
                    const SystemModel& model, const Vector& y) {
  if (y.size() != model.m) {
    throw Error(ErrorKind::kDimensionMismatch,
                "filter update: measurement has wrong dimension");
  }
  if (!y.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "filter update: non-finite measurement");
  }
  const Matrix& c = model.measurement;
  const Matrix pct = cov_pred * c.transpose();
  FilterState out;
  // With no cross-covariance the gain is identically zero, whatever S is.
  if (pct.isZero(0.0)) {
    out.mean = mean_pred;
    out.cov = cov_pred;
    return out;
  }
  const Matrix s = c * pct + model.measurement_cov;
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::kSingular,
                "filter update: innovation covariance is not positive definite");
  }
  // K = P C^T S^-1, computed as (S^-1 C P)^T with S symmetric.
  const Matrix gain = llt.solve(pct.transpose()).transpose();
  out.mean = mean_pred + gain * (y - c * mean_pred);
  const Eigen::Index n = mean_pred.size();
  out.cov = (Matrix::Identity(n, n) - gain * c) * cov_pred;
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

void require_kind(const SystemModel& model, ModelKind kind, const char* who) {
  if (model.kind != kind) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string(who) + ": model '" + model.name +
                    "' has the wrong kind for this filter");
  }
}

}  // namespace

FilterState kf_init(const SystemModel& model,
                    const std::optional<Vector>& init_mean) {
  require_kind(model, ModelKind::kLinearZOH, "kf_init");
  return init_common(model, init_mean);
}

FilterState ekf_init(const SystemModel& model,
                     const std::optional<Vector>& init_mean) {
  require_kind(model, ModelKind::kNonlinearRK, "ekf_init");
  return init_common(model, init_mean);
}

FilterState kf_step(const FilterState& state, const SystemModel& model,
                    const Vector& y) {
  require_kind(model, ModelKind::kLinearZOH, "kf_step");
  const Matrix& a = model.transition;
  const Vector mean_pred = a * state.mean;
  const Matrix cov_pred = a * state.cov * a.transpose() + model.process_cov;
  return correct(mean_pred, cov_pred, model, y);
}

Matrix step_jacobian(const SystemModel& model, const Vector& x) {
  const Eigen::Index n = x.size();
  Matrix jac(n, n);
  Vector probe = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = 1e-6 * (1.0 + std::abs(x[j]));
    probe[j] = x[j] + h;
    const Vector plus = model.step(probe);
    probe[j] = x[j] - h;
    const Vector minus = model.step(probe);
    probe[j] = x[j];
    jac.col(j) = (plus - minus) / (2.0 * h);
  }
  return jac;
}

FilterState ekf_step(const FilterState& state, const SystemModel& model,
                     const Vector& y) {
  require_kind(model, ModelKind::kNonlinearRK, "ekf_step");
  const Vector mean_pred = model.step(state.mean);
  const Matrix f = step_jacobian(model, state.mean);
  const Matrix cov_pred = f * state.cov * f.transpose() + model.process_cov;
  return correct(mean_pred, cov_pred, model, y);
}

Series run_filter(const SystemModel& model, const Series& measurements,
                  FilterKind kind, const FilterState& init) {
  Series estimates(model.n, measurements.cols());
  FilterState state = init;
  for (Eigen::Index t = 0; t < measurements.cols(); ++t) {
    state = kind == FilterKind::kKF ? kf_step(state, model, measurements.col(t))
                                    : ekf_step(state, model, measurements.col(t));
    estimates.col(t) = state.mean;
  }
  return estimates;
}

Series run_filter(const SystemModel& model, const Trajectory& traj,
                  FilterKind kind) {
  const FilterState init =
      kind == FilterKind::kKF ? kf_init(model) : ekf_init(model);
  return run_filter(model, traj.measurements, kind, init);
}

}  // namespace jlse
