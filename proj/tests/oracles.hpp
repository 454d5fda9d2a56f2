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
// Reference computations used to check the library. Each one takes a
// different route to the same quantity so a shared bug cannot hide.

#ifndef JLSE_TESTS_ORACLES_HPP_
#define JLSE_TESTS_ORACLES_HPP_

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// exp(A dt) through the eigendecomposition A = V D V^-1 (A diagonalizable).
inline Mat expm_eigen(const Mat& a, double dt) {
  Eigen::EigenSolver<Mat> es(a);
  const Eigen::MatrixXcd v = es.eigenvectors();
  Eigen::VectorXcd d = es.eigenvalues();
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::exp(d(i) * dt);
  const Eigen::MatrixXcd out = v * d.asDiagonal() * v.inverse();
  return out.real();
}

// Upper estimate of the spectral radius by Gelfand's formula,
// ||A^k||^(1/k), with k a power of two reached by repeated squaring.
inline double spectral_radius_gelfand(const Mat& a, int squarings = 12) {
  Mat p = a;
  double log_scale = 0.0;  // p = A^(2^s) / exp(log_scale)
  for (int s = 0; s < squarings; ++s) {
    p = p * p;
    log_scale *= 2.0;
    const double nrm = p.norm();
    if (nrm == 0.0) return 0.0;
    p /= nrm;
    log_scale += std::log(nrm);
  }
  return std::exp(log_scale / std::pow(2.0, squarings));
}

// Filtered mean E[x(T) | y(1..T)] of the linear-Gaussian model
//   x(0) ~ N(mu0, P0), x(t+1) = A x(t) + w, y(t) = C x(t) + v
// by solving the stacked weighted least-squares problem over x(0..T).
inline Vec batch_posterior_mean(const Mat& a, const Mat& c, const Mat& q,
                                const Mat& r, const Vec& mu0, const Mat& p0,
                                const std::vector<Vec>& ys) {
  const Eigen::Index n = a.rows();
  const Eigen::Index T = static_cast<Eigen::Index>(ys.size());
  const Eigen::Index dim = n * (T + 1);
  Mat info = Mat::Zero(dim, dim);
  Vec rhs = Vec::Zero(dim);
  const Mat p0i = p0.inverse();
  const Mat qi = q.inverse();
  const Mat ri = r.inverse();
  info.block(0, 0, n, n) += p0i;
  rhs.segment(0, n) += p0i * mu0;
  for (Eigen::Index t = 0; t < T; ++t) {
    // residual x(t+1) - A x(t) = [-A  I] [x(t); x(t+1)]
    Mat j(n, 2 * n);
    j << -a, Mat::Identity(n, n);
    info.block(t * n, t * n, 2 * n, 2 * n) += j.transpose() * qi * j;
    // residual y(t+1) - C x(t+1)
    info.block((t + 1) * n, (t + 1) * n, n, n) += c.transpose() * ri * c;
    rhs.segment((t + 1) * n, n) += c.transpose() * ri * ys[t];
  }
  const Vec x = info.ldlt().solve(rhs);
  return x.segment(T * n, n);
}

// Central difference of a scalar function along every coordinate of p.
inline Vec central_gradient(const std::function<double(const Vec&)>& f,
                            Vec p, double h) {
  Vec g(p.size());
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const double keep = p(k);
    p(k) = keep + h;
    const double up = f(p);
    p(k) = keep - h;
    const double down = f(p);
    p(k) = keep;
    g(k) = (up - down) / (2.0 * h);
  }
  return g;
}

inline Mat random_matrix(std::mt19937_64& gen, Eigen::Index r, Eigen::Index c,
                         double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = u(gen);
  return m;
}

inline Mat random_spd(std::mt19937_64& gen, Eigen::Index n, double floor) {
  const Mat b = random_matrix(gen, n, n);
  return b * b.transpose() + floor * Mat::Identity(n, n);
}

}  // namespace oracle

#endif  // JLSE_TESTS_ORACLES_HPP_
