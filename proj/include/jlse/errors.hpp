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

#ifndef JLSE_ERRORS_HPP_
#define JLSE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace jlse {

// Failure categories. The C API and the CLI map these onto error codes and
// exit statuses, so the numbering is part of the public surface.
enum class ErrorKind {
  kInvalidArgument,      // bad configuration, unknown names, violated preconditions
  kInvalidModel,         // non-finite or inconsistent model definition
  kNotFound,             // missing file or directory
  kIo,                   // read/write failure
  kMalformed,            // unparseable manifest, CSV or checkpoint
  kDimensionMismatch,    // shapes disagree with a manifest, model or checkpoint
  kSingular,             // innovation covariance not positive definite
  kIntegrationDiverged,  // non-finite Runge-Kutta stage or state
  kTrainingDiverged,     // non-finite loss or gradient during training
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace jlse

#endif  // JLSE_ERRORS_HPP_
