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
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "jlse/dynamics.hpp"
#include "jlse/errors.hpp"
#include "jlse/filters.hpp"
#include "oracles.hpp"

using namespace jlse;

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

SystemModel scalar_model(double a, double c, double q, double r) {
  return make_linear_model("scalar", scalar(a), scalar(c), 0.1, scalar(q), scalar(r),
                           scalar(0.0), Box::cube(1, -1, 1));
}

FilterState state_of(const Vector& mean, const Matrix& cov) { return {mean, cov}; }

double min_eig(const Matrix& p) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(p).eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("kf init") {
  const SystemModel s = springs_model();
  const FilterState st = kf_init(s);
  CHECK(st.mean == Vector::Zero(20));
  for (int i = 0; i < 20; ++i) {
    CHECK(st.cov(i, i) == doctest::Approx(0.01 + 4.0 / 12.0).epsilon(1e-15));
  }
  CHECK(st.cov(0, 0) == doctest::Approx(0.3433).epsilon(1e-4));
  CHECK((st.cov - Matrix(st.cov.diagonal().asDiagonal())).norm() == 0.0);
  const FilterState explicit_init = kf_init(s, Vector(Vector::Ones(20)));
  CHECK(explicit_init.mean == Vector::Ones(20));
  CHECK_THROWS_AS(kf_init(vdp_model()), Error);
  CHECK_THROWS_AS(ekf_init(s), Error);
  CHECK(ekf_init(pendulum_model()).mean == Vector::Zero(2));
}

TEST_CASE("scalar kalman update by hand") {
  const SystemModel m = scalar_model(1.0, 1.0, 0.0, 1.0);
  const FilterState out = kf_step(state_of(Vector::Zero(1), scalar(1.0)), m, Vector::Constant(1, 2.0));
  CHECK(out.mean(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(out.cov(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("huge measurement noise ignores the measurement") {
  std::mt19937_64 gen(3);
  const Matrix a = oracle::random_matrix(gen, 3, 3, 0.5);
  const Matrix c = oracle::random_matrix(gen, 2, 3);
  const SystemModel m = make_linear_model("m", a, c, 0.1, 0.01 * Matrix::Identity(3, 3),
                                          1e12 * Matrix::Identity(2, 2),
                                          0.01 * Matrix::Identity(3, 3), Box::cube(3, -1, 1));
  Vector x(3);
  x << 0.3, -0.2, 1.0;
  Vector y(2);
  y << 50.0, -20.0;
  const FilterState out = kf_step(state_of(x, Matrix::Identity(3, 3)), m, y);
  CHECK((out.mean - a * x).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("exact full-state measurement") {
  const Matrix a = (Matrix(2, 2) << 0.9, 0.1, -0.2, 0.8).finished();
  const SystemModel m = make_linear_model("m", a, Matrix::Identity(2, 2), 0.1, Matrix::Zero(2, 2),
                                          Matrix::Zero(2, 2), Matrix::Zero(2, 2), Box::cube(2, -1, 1));
  Vector y(2);
  y << 0.7, -1.3;
  const FilterState out = kf_step(state_of(Vector::Zero(2), Matrix::Identity(2, 2)), m, y);
  CHECK((out.mean - y).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(out.cov.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("singular innovation covariance") {
  // Two identical measurement rows with R = 0 make S rank deficient.
  const SystemModel blind = make_linear_model(
      "blind", Matrix::Identity(2, 2), (Matrix(2, 2) << 1, 0, 1, 0).finished(), 0.1,
      Matrix::Zero(2, 2), Matrix::Zero(2, 2), Matrix::Zero(2, 2), Box::cube(2, -1, 1));
  try {
    kf_step(state_of(Vector::Zero(2), Matrix::Identity(2, 2)), blind, Vector::Zero(2));
    FAIL("expected singular");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSingular);
  }
}

TEST_CASE("ekf at pendulum equilibrium") {
  const SystemModel p = pendulum_model();
  const Matrix z = Matrix::Zero(2, 2);
  const SystemModel quiet = make_nonlinear_model("quiet", 2, pendulum_drift, p.measurement, p.dt,
                                                 z, Matrix::Zero(1, 1), z, p.init_region);
  const FilterState out = ekf_step(state_of(Vector::Zero(2), z), quiet, Vector::Zero(1));
  CHECK(out.mean == Vector::Zero(2));
  CHECK(out.cov.norm() == 0.0);
}

TEST_CASE("ekf jacobian matches linearized exponential") {
  const Matrix a_lin = (Matrix(2, 2) << 0.0, 1.0, -9.8, -0.45).finished();
  const Matrix f = step_jacobian(pendulum_model(), Vector::Zero(2));
  const Matrix ref = oracle::expm_eigen(a_lin, 0.01);
  CHECK((f - ref).cwiseAbs().maxCoeff() < 1e-6);
  // H for y = x1.
  CHECK(pendulum_model().measurement == (Matrix(1, 2) << 1.0, 0.0).finished());
  CHECK(vdp_model().measurement == (Matrix(1, 2) << 1.0, 0.0).finished());
}

TEST_CASE("ekf jacobian against central differences of the step") {
  const SystemModel v = vdp_model();
  std::mt19937_64 gen(5);
  for (int k = 0; k < 10; ++k) {
    const Vector x = oracle::random_matrix(gen, 2, 1, 1.5);
    const Matrix f = step_jacobian(v, x);
    for (int j = 0; j < 2; ++j) {
      Vector up = x, down = x;
      up(j) += 1e-5;
      down(j) -= 1e-5;
      const Vector col = (v.step(up) - v.step(down)) / 2e-5;
      CHECK((f.col(j) - col).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("run_filter shape and noiseless consistency") {
  const Matrix a = (Matrix(2, 2) << 0.95, 0.1, -0.1, 0.95).finished();
  const Matrix z = Matrix::Zero(2, 2);
  const SystemModel m = make_linear_model("quiet", a, (Matrix(1, 2) << 1, 0).finished(), 0.1, z,
                                          Matrix::Zero(1, 1), z, Box::cube(2, -1, 1));
  const Trajectory tr = generate_trajectory(m, 40, m.init_region, 12);
  const Series est = run_filter(m, tr.measurements, FilterKind::kKF,
                                state_of(tr.states.col(0), z));
  CHECK(est.cols() == 40);
  CHECK(est.rows() == 2);
  CHECK((est - tr.states.rightCols(40)).cwiseAbs().maxCoeff() < 1e-8);

  const SystemModel s = springs_model();
  const Trajectory ts = generate_trajectory(s, 25, s.init_region, 1);
  CHECK(run_filter(s, ts, FilterKind::kKF).cols() == 25);
}

TEST_CASE("run_filter never reads the true states") {
  const SystemModel v = vdp_model();
  Trajectory tr = generate_trajectory(v, 30, v.init_region, 2);
  const Series a = run_filter(v, tr, FilterKind::kEKF);
  tr.states.setConstant(1e6);
  const Series b = run_filter(v, tr, FilterKind::kEKF);
  CHECK(a == b);
}

TEST_CASE("kalman recursion equals batch gaussian posterior") {
  std::mt19937_64 gen(2024);
  for (int sys = 0; sys < 20; ++sys) {
    const int n = 1 + sys % 3;
    const int m = 1 + (sys / 3) % n;
    const int T = 1 + sys % 5;
    const Matrix a = oracle::random_matrix(gen, n, n, 1.0);
    const Matrix c = oracle::random_matrix(gen, m, n, 1.0);
    const Matrix q = oracle::random_spd(gen, n, 0.05);
    const Matrix r = oracle::random_spd(gen, m, 0.05);
    const Matrix p0 = oracle::random_spd(gen, n, 0.1);
    const Vector mu0 = oracle::random_matrix(gen, n, 1, 1.0);
    const SystemModel model = make_linear_model("rand", a, c, 0.1, q, r, p0, Box::cube(n, -1, 1));
    std::vector<Vector> ys;
    FilterState st = state_of(mu0, p0);
    for (int t = 0; t < T; ++t) {
      ys.push_back(oracle::random_matrix(gen, m, 1, 2.0));
      st = kf_step(st, model, ys.back());
      const Vector ref = oracle::batch_posterior_mean(a, c, q, r, mu0, p0, ys);
      CHECK((st.mean - ref).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("three step scalar kalman vs batch posterior") {
  const SystemModel m = scalar_model(0.9, 1.0, 0.5, 0.25);
  const std::vector<Vector> ys = {Vector::Constant(1, 0.4), Vector::Constant(1, -0.1),
                                  Vector::Constant(1, 0.8)};
  FilterState st = state_of(Vector::Constant(1, 0.2), scalar(1.0));
  for (const auto& y : ys) st = kf_step(st, m, y);
  const Vector ref = oracle::batch_posterior_mean(scalar(0.9), scalar(1.0), scalar(0.5),
                                                  scalar(0.25), Vector::Constant(1, 0.2),
                                                  scalar(1.0), ys);
  CHECK(std::abs(st.mean(0) - ref(0)) < 1e-10);
}

TEST_CASE("covariance stays symmetric psd") {
  std::mt19937_64 gen(99);
  const int n = 3;
  const Matrix a = oracle::random_matrix(gen, n, n, 0.7);
  const Matrix c = oracle::random_matrix(gen, 2, n, 1.0);
  const SystemModel m = make_linear_model("psd", a, c, 0.1, 1e-4 * Matrix::Identity(n, n),
                                          1e-4 * Matrix::Identity(2, 2),
                                          0.01 * Matrix::Identity(n, n), Box::cube(n, -1, 1));
  FilterState st = kf_init(m);
  std::normal_distribution<double> nd(0.0, 1.0);
  double worst = 0.0;
  bool symmetric = true;
  for (int k = 0; k < 10000; ++k) {
    Vector y(2);
    y << nd(gen), nd(gen);
    st = kf_step(st, m, y);
    symmetric = symmetric && (st.cov - st.cov.transpose()).norm() == 0.0;
    worst = std::min(worst, min_eig(st.cov));
  }
  CHECK(symmetric);
  CHECK(worst >= -1e-10);

  // Same for the EKF on the pendulum.
  const SystemModel p = pendulum_model();
  const Trajectory tr = generate_trajectory(p, 10000, p.init_region, 4);
  st = ekf_init(p);
  worst = 0.0;
  for (int t = 0; t < tr.length(); ++t) {
    st = ekf_step(st, p, tr.measurements.col(t));
    symmetric = symmetric && (st.cov - st.cov.transpose()).norm() == 0.0;
    worst = std::min(worst, min_eig(st.cov));
  }
  CHECK(symmetric);
  CHECK(worst >= -1e-10);
}

TEST_CASE("ekf on a linear drift matches the kalman filter") {
  const Matrix a_c = (Matrix(2, 2) << 0.0, 1.0, -2.0, -0.3).finished();
  const double dt = 0.05;
  // The RK4 step of a linear field is the matrix polynomial below.
  const Matrix h = a_c * dt;
  const Matrix I = Matrix::Identity(2, 2);
  const Matrix a_d = I + h + h * h / 2.0 + h * h * h / 6.0 + h * h * h * h / 24.0;
  const Matrix c = (Matrix(1, 2) << 1.0, 0.0).finished();
  const Matrix q = 0.01 * I;
  const Matrix r = 0.01 * Matrix::Identity(1, 1);
  const Box box = Box::cube(2, -1, 1);
  const SystemModel lin = make_linear_model("lin", a_d, c, dt, q, r, 0.01 * I, box);
  const SystemModel nl = make_nonlinear_model(
      "nl", 2, [a_c](const Vector& x) { return Vector(a_c * x); }, c, dt, q, r, 0.01 * I, box);
  const Trajectory tr = generate_trajectory(lin, 200, box, 8);
  FilterState k = kf_init(lin);
  FilterState e = ekf_init(nl);
  double worst = 0.0;
  for (int t = 0; t < tr.length(); ++t) {
    k = kf_step(k, lin, tr.measurements.col(t));
    e = ekf_step(e, nl, tr.measurements.col(t));
    worst = std::max(worst, (k.mean - e.mean).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("trace of covariance is non-increasing without process noise") {
  std::mt19937_64 gen(17);
  const int n = 3;
  const Matrix c = oracle::random_matrix(gen, 2, n, 1.0);
  const SystemModel m = make_linear_model("mono", Matrix::Identity(n, n), c, 0.1,
                                          Matrix::Zero(n, n), oracle::random_spd(gen, 2, 0.1),
                                          Matrix::Identity(n, n), Box::cube(n, -1, 1));
  FilterState st = state_of(Vector::Zero(n), oracle::random_spd(gen, n, 0.5));
  const Vector y = Vector::Constant(2, 0.3);
  double prev = st.cov.trace();
  for (int k = 0; k < 200; ++k) {
    st = kf_step(st, m, y);
    CHECK(st.cov.trace() <= prev + 1e-15);
    prev = st.cov.trace();
  }
}

TEST_CASE("filters reject malformed measurements") {
  const SystemModel s = springs_model();
  CHECK_THROWS_AS(kf_step(kf_init(s), s, Vector::Zero(3)), Error);
  Vector y = Vector::Zero(10);
  y(2) = std::nan("");
  CHECK_THROWS_AS(kf_step(kf_init(s), s, y), Error);
  CHECK_THROWS_AS(kf_step(kf_init(s), vdp_model(), Vector::Zero(1)), Error);
}
