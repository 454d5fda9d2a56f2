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

#include "jlse/errors.hpp"

namespace jlse {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kInvalidModel: return "invalid-model";
    case ErrorKind::kNotFound: return "not-found";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kMalformed: return "malformed";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kSingular: return "singular";
    case ErrorKind::kIntegrationDiverged: return "integration-diverged";
    case ErrorKind::kTrainingDiverged: return "training-diverged";
  }
  return "unknown";
}

}  // namespace jlse
