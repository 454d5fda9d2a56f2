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

#include "jlse/rng.hpp"

#include <cmath>

#include "jlse/errors.hpp"

namespace jlse {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : tag) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(parent) ^ h);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

Vector Rng::normal_vector(Eigen::Index n) {
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = normal();
  return out;
}

GaussianSampler::GaussianSampler(const Matrix& cov) {
  if (cov.rows() != cov.cols()) {
    throw Error(ErrorKind::kInvalidModel, "covariance must be square");
  }
  if (!cov.allFinite()) {
    throw Error(ErrorKind::kInvalidModel, "covariance has non-finite entries");
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * (1.0 + cov.cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::kInvalidModel, "covariance is not symmetric");
  }
  zero_ = cov.isZero(0.0);
  if (zero_) {
    factor_ = Matrix::Zero(cov.rows(), cov.cols());
    return;
  }
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() == Eigen::Success) {
    factor_ = llt.matrixL();
    return;
  }
  // Singular PSD: fall back to the symmetric square root.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const Vector& lambda = eig.eigenvalues();
  if (lambda.minCoeff() < -1e-10 * (1.0 + lambda.cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::kInvalidModel,
                "covariance is not positive semi-definite");
  }
  factor_ = eig.eigenvectors() *
            lambda.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

Vector GaussianSampler::sample(Rng& rng) const {
  if (zero_) return Vector::Zero(factor_.rows());
  return factor_ * rng.normal_vector(factor_.cols());
}

}  // namespace jlse
