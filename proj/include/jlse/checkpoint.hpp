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

// Network checkpoints: a JSON document with the configuration and every
// named parameter array as {name, shape, row-major values}. Doubles are
// written in shortest round-trip form, so save/load is bit-exact.

#ifndef JLSE_CHECKPOINT_HPP_
#define JLSE_CHECKPOINT_HPP_

#include <string>

#include "jlse/networks.hpp"

namespace jlse {

// Provenance stored next to the weights.
struct CheckpointInfo {
  std::string system;
  int best_epoch = 0;
  double best_val_loss = 0.0;
  double train_seconds = 0.0;
};

struct Checkpoint {
  NetworkParams params;
  CheckpointInfo info;
};

std::string checkpoint_to_string(const NetworkParams& params,
                                 const CheckpointInfo& info);
Checkpoint checkpoint_from_string(const std::string& text);

void save_checkpoint(const std::string& path, const NetworkParams& params,
                     const CheckpointInfo& info = {});
Checkpoint load_checkpoint(const std::string& path);

}  // namespace jlse

#endif  // JLSE_CHECKPOINT_HPP_
