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

#ifndef JLSE_RNG_HPP_
#define JLSE_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

#include "jlse/linalg.hpp"

namespace jlse {

// Stream splitting. Every random quantity in the library is drawn from an
// Rng whose seed is derive_seed(parent, "<tag>"), so a single experiment seed
// fans out into independent, named child streams:
//
//   sequence i of a dataset      seed = base_seed + i
//     initial mean               derive_seed(seq, "init_mean")
//     initial-condition noise    derive_seed(seq, "init_noise")
//     process noise              derive_seed(seq, "process")
//     measurement noise          derive_seed(seq, "measurement")
//
// derive_seed hashes the tag with FNV-1a and mixes it into the parent with
// SplitMix64, which is fully specified and therefore platform independent.
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag) noexcept;

// 64-bit Mersenne Twister with portable uniform and normal transforms.
// std::normal_distribution is implementation defined, so the Gaussian
// transform (Marsaglia polar method) lives here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Vector normal_vector(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Draws N(0, cov) samples through a fixed square-root factor of cov.
// Positive semi-definite (including all-zero) covariances are supported.
class GaussianSampler {
 public:
  explicit GaussianSampler(const Matrix& cov);

  Vector sample(Rng& rng) const;
  const Matrix& factor() const { return factor_; }
  bool is_zero() const { return zero_; }

 private:
  Matrix factor_;
  bool zero_ = false;
};

}  // namespace jlse

#endif  // JLSE_RNG_HPP_
