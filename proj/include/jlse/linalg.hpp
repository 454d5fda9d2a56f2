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

#ifndef JLSE_LINALG_HPP_
#define JLSE_LINALG_HPP_

#include <Eigen/Dense>

namespace jlse {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Time series are stored column-wise: column t is the vector at step t.
using Series = Eigen::MatrixXd;

inline bool all_finite(const Eigen::Ref<const Matrix>& m) {
  return m.allFinite();
}

}  // namespace jlse

#endif  // JLSE_LINALG_HPP_
