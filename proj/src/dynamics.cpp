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

#include "jlse/dynamics.hpp"

#include <cmath>
#include <utility>

#include "jlse/errors.hpp"
#include "jlse/rng.hpp"

namespace jlse {

namespace {

constexpr double kGravity = 9.8;
constexpr double kPendulumMass = 2.0;
constexpr double kPendulumDamping = 0.9;
constexpr double kPendulumLength = 1.0;

constexpr int kSprings = 10;
constexpr double kSpringMass = 10.0;
constexpr double kSpringDamping = 6.0;
constexpr double kSpringStiffness = 800.0;

constexpr double kNoiseScale = 0.01;

bool is_symmetric_psd(const Matrix& s) {
  if (s.rows() != s.cols() || !s.allFinite()) return false;
  const double scale = 1.0 + s.cwiseAbs().maxCoeff();
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) return false;
  if (s.rows() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -1e-10 * scale;
}

Matrix scaled_identity(int n) { return kNoiseScale * Matrix::Identity(n, n); }

}  // namespace

Box Box::cube(Eigen::Index n, double lo, double hi) {
  return Box{Vector::Constant(n, lo), Vector::Constant(n, hi)};
}

Vector Box::variance() const {
  return (upper - lower).array().square().matrix() / 12.0;
}

bool Box::contains(const Vector& x) const {
  if (x.size() != dim()) return false;
  return (x.array() >= lower.array()).all() &&
         (x.array() <= upper.array()).all();
}

bool Box::disjoint(const Box& other) const {
  if (other.dim() != dim()) return true;
  for (Eigen::Index i = 0; i < dim(); ++i) {
    if (upper[i] <= other.lower[i] || other.upper[i] <= lower[i]) return true;
  }
  return false;
}

Vector SystemModel::step(const Vector& x) const {
  if (kind == ModelKind::kLinearZOH) return transition * x;
  return rk4_step(drift, x, dt);
}

void SystemModel::validate() const {
  auto fail = [this](const std::string& why) {
    throw Error(ErrorKind::kInvalidModel, "model '" + name + "': " + why);
  };
  if (n < 1 || m < 1) fail("dimensions must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
  if (measurement.rows() != m || measurement.cols() != n) {
    fail("measurement matrix must be m x n");
  }
  if (!measurement.allFinite()) fail("measurement matrix is not finite");
  if (kind == ModelKind::kLinearZOH) {
    if (transition.rows() != n || transition.cols() != n) {
      fail("transition matrix must be n x n");
    }
    if (!transition.allFinite()) fail("transition matrix is not finite");
  } else if (!drift) {
    fail("nonlinear model without a drift");
  }
  if (process_cov.rows() != n || !is_symmetric_psd(process_cov)) {
    fail("Q must be n x n symmetric PSD");
  }
  if (measurement_cov.rows() != m || !is_symmetric_psd(measurement_cov)) {
    fail("R must be m x m symmetric PSD");
  }
  if (initial_cov.rows() != n || !is_symmetric_psd(initial_cov)) {
    fail("P0 must be n x n symmetric PSD");
  }
  if (init_region.dim() != n || init_region.upper.size() != n ||
      (init_region.upper.array() < init_region.lower.array()).any()) {
    fail("initial region must be a non-empty box in R^n");
  }
}

Matrix zoh_discretize(const Matrix& a, double dt) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::kInvalidModel, "zoh_discretize: matrix not square");
  }
  if (!a.allFinite() || !std::isfinite(dt)) {
    throw Error(ErrorKind::kInvalidModel, "zoh_discretize: non-finite input");
  }
  if (!(dt > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "zoh_discretize: dt must be > 0");
  }
  const Eigen::Index n = a.rows();
  Matrix scaled = a * dt;
  // Scale so that the 1-norm is at most 1/2, where 20 Taylor terms are far
  // below double precision.
  const double norm = scaled.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    scaled /= std::ldexp(1.0, squarings);
  }
  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * result.cwiseAbs().maxCoeff()) {
      break;
    }
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

Vector rk4_step(const Drift& drift, const Vector& x, double dt) {
  auto checked = [](Vector v) {
    if (!v.allFinite()) {
      throw Error(ErrorKind::kIntegrationDiverged,
                  "rk4_step: non-finite stage");
    }
    return v;
  };
  const Vector k1 = checked(drift(x));
  const Vector k2 = checked(drift(x + 0.5 * dt * k1));
  const Vector k3 = checked(drift(x + 0.5 * dt * k2));
  const Vector k4 = checked(drift(x + dt * k3));
  return checked(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

Vector pendulum_drift(const Vector& x) {
  Vector dx(2);
  dx[0] = x[1];
  dx[1] = -(kGravity / kPendulumLength) * std::sin(x[0]) -
          (kPendulumDamping / kPendulumMass) * x[1];
  return dx;
}

Vector vdp_drift(const Vector& x) {
  Vector dx(2);
  dx[0] = -x[1];
  dx[1] = x[0] + (x[0] * x[0] - 1.0) * x[1];
  return dx;
}

Matrix springs_system_matrix() {
  constexpr int n = kSprings;
  // Mass i is tied to mass i-1 (the wall for i = 0) by spring/damper i and
  // to mass i+1 by spring/damper i+1; the last mass is free on one side.
  Matrix stiffness = Matrix::Zero(n, n);
  Matrix damping = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    stiffness(i, i) -= kSpringStiffness;
    damping(i, i) -= kSpringDamping;
    if (i > 0) {
      stiffness(i, i - 1) += kSpringStiffness;
      damping(i, i - 1) += kSpringDamping;
    }
    if (i + 1 < n) {
      stiffness(i, i) -= kSpringStiffness;
      stiffness(i, i + 1) += kSpringStiffness;
      damping(i, i) -= kSpringDamping;
      damping(i, i + 1) += kSpringDamping;
    }
  }
  Matrix a = Matrix::Zero(2 * n, 2 * n);
  a.topRightCorner(n, n).setIdentity();
  a.bottomLeftCorner(n, n) = stiffness / kSpringMass;
  a.bottomRightCorner(n, n) = damping / kSpringMass;
  return a;
}

SystemModel make_linear_model(std::string name, Matrix transition,
                              Matrix measurement, double dt, Matrix q,
                              Matrix r, Matrix p0, Box init_region) {
  SystemModel model;
  model.name = std::move(name);
  model.kind = ModelKind::kLinearZOH;
  model.n = static_cast<int>(transition.rows());
  model.m = static_cast<int>(measurement.rows());
  model.dt = dt;
  model.transition = std::move(transition);
  model.measurement = std::move(measurement);
  model.process_cov = std::move(q);
  model.measurement_cov = std::move(r);
  model.initial_cov = std::move(p0);
  model.init_region = std::move(init_region);
  model.validate();
  return model;
}

SystemModel make_nonlinear_model(std::string name, int n, Drift drift,
                                 Matrix measurement, double dt, Matrix q,
                                 Matrix r, Matrix p0, Box init_region) {
  SystemModel model;
  model.name = std::move(name);
  model.kind = ModelKind::kNonlinearRK;
  model.n = n;
  model.m = static_cast<int>(measurement.rows());
  model.dt = dt;
  model.drift = std::move(drift);
  model.measurement = std::move(measurement);
  model.process_cov = std::move(q);
  model.measurement_cov = std::move(r);
  model.initial_cov = std::move(p0);
  model.init_region = std::move(init_region);
  model.validate();
  return model;
}

SystemModel springs_model() {
  constexpr int n = 2 * kSprings;
  constexpr double dt = 0.1;
  Matrix c = Matrix::Zero(kSprings, n);
  c.leftCols(kSprings).setIdentity();
  return make_linear_model("springs", zoh_discretize(springs_system_matrix(), dt),
                           std::move(c), dt, scaled_identity(n),
                           scaled_identity(kSprings), scaled_identity(n),
                           Box::cube(n, -1.0, 1.0));
}

SystemModel pendulum_model() {
  Matrix c(1, 2);
  c << 1.0, 0.0;
  return make_nonlinear_model("pendulum", 2, pendulum_drift, std::move(c), 0.01,
                              scaled_identity(2), scaled_identity(1),
                              scaled_identity(2), Box::cube(2, -2.0, 2.0));
}

SystemModel vdp_model() {
  Matrix c(1, 2);
  c << 1.0, 0.0;
  return make_nonlinear_model("vdp", 2, vdp_drift, std::move(c), 0.1,
                              scaled_identity(2), scaled_identity(1),
                              scaled_identity(2), Box::cube(2, -1.0, 1.0));
}

SystemModel model_by_name(const std::string& name) {
  if (name == "springs") return springs_model();
  if (name == "pendulum") return pendulum_model();
  if (name == "vdp") return vdp_model();
  throw Error(ErrorKind::kInvalidArgument, "unknown system '" + name + "'");
}

int default_sequence_length(const std::string& system) {
  if (system == "springs") return 500;
  if (system == "pendulum") return 4000;
  if (system == "vdp") return 300;
  throw Error(ErrorKind::kInvalidArgument, "unknown system '" + system + "'");
}

Box out_of_region_box(const std::string& system) {
  if (system == "springs") return Box::cube(20, 1.0, 1.5);
  if (system == "pendulum") return Box::cube(2, 2.0, 2.5);
  if (system == "vdp") return Box::cube(2, 1.0, 1.5);
  throw Error(ErrorKind::kInvalidArgument, "unknown system '" + system + "'");
}

Vector sample_initial_mean(const Box& region, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "init_mean"));
  Vector u(region.dim());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    u[i] = rng.uniform(region.lower[i], region.upper[i]);
  }
  return u;
}

Trajectory generate_trajectory(const SystemModel& model, int T,
                               const Box& init_region, std::uint64_t seed) {
  if (T < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "generate_trajectory: T must be >= 1");
  }
  if (init_region.dim() != model.n) {
    throw Error(ErrorKind::kDimensionMismatch,
                "generate_trajectory: region dimension differs from n");
  }
  const GaussianSampler init_noise(model.initial_cov);
  const GaussianSampler process(model.process_cov);
  const GaussianSampler meas(model.measurement_cov);
  Rng init_rng(derive_seed(seed, "init_noise"));
  Rng process_rng(derive_seed(seed, "process"));
  Rng meas_rng(derive_seed(seed, "measurement"));

  Trajectory traj;
  traj.seed = seed;
  traj.states.resize(model.n, T + 1);
  traj.measurements.resize(model.m, T);

  Vector x = sample_initial_mean(init_region, seed) + init_noise.sample(init_rng);
  traj.states.col(0) = x;
  for (int t = 1; t <= T; ++t) {
    x = model.step(x) + process.sample(process_rng);
    if (!x.allFinite()) {
      throw Error(ErrorKind::kIntegrationDiverged,
                  "generate_trajectory: state diverged at step " +
                      std::to_string(t));
    }
    traj.states.col(t) = x;
    traj.measurements.col(t - 1) = model.measure(x) + meas.sample(meas_rng);
  }
  return traj;
}

Trajectory generate_finite_trajectory(const SystemModel& model, int T,
                                      const Box& init_region, std::uint64_t seed,
                                      int max_attempts) {
  std::uint64_t attempt_seed = seed;
  for (int attempt = 1;; ++attempt) {
    try {
      return generate_trajectory(model, T, init_region, attempt_seed);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kIntegrationDiverged || attempt >= max_attempts) {
        throw;
      }
    }
    attempt_seed = derive_seed(seed, "retry/" + std::to_string(attempt));
  }
}

bool Dataset::operator==(const Dataset& other) const {
  if ((system == nullptr) != (other.system == nullptr)) return false;
  if (system && (system->name != other.system->name ||
                 system->n != other.system->n || system->m != other.system->m ||
                 system->dt != other.system->dt)) {
    return false;
  }
  return sequence_length == other.sequence_length &&
         base_seed == other.base_seed && init_region == other.init_region &&
         split_ratio == other.split_ratio && train == other.train &&
         val == other.val && test == other.test;
}

SplitSizes split_sizes(int count) {
  const int train = (count * 8) / 10;
  const int val = count / 10;
  return SplitSizes{train, val, count - train - val};
}

Dataset generate_dataset(const SystemModel& model, int T, int count,
                         std::uint64_t base_seed) {
  return generate_dataset(model, T, count, base_seed, model.init_region);
}

Dataset generate_dataset(const SystemModel& model, int T, int count,
                         std::uint64_t base_seed, const Box& init_region) {
  if (count < 10) {
    throw Error(ErrorKind::kInvalidArgument,
                "generate_dataset: at least 10 sequences are required, got " +
                    std::to_string(count));
  }
  Dataset ds;
  ds.system = std::make_shared<const SystemModel>(model);
  ds.sequence_length = T;
  ds.base_seed = base_seed;
  ds.init_region = init_region;
  const SplitSizes sizes = split_sizes(count);
  for (int i = 0; i < count; ++i) {
    Trajectory traj = generate_finite_trajectory(
        model, T, init_region, base_seed + static_cast<std::uint64_t>(i));
    if (i < sizes.train) {
      ds.train.push_back(std::move(traj));
    } else if (i < sizes.train + sizes.val) {
      ds.val.push_back(std::move(traj));
    } else {
      ds.test.push_back(std::move(traj));
    }
  }
  return ds;
}

}  // namespace jlse
