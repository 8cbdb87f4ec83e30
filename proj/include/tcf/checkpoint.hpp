// Copyright 2026 the tcforecast authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TCF_CHECKPOINT_HPP
#define TCF_CHECKPOINT_HPP

#include <string>
#include <vector>

#include "tcf/model.hpp"

namespace tcf {

struct MetricRow {
  int stage = 0;
  int epoch = 0;
  double train_loss = 0.0;
  double val_metric = 0.0;  // mean MDE km where tracked, else 0
};

/// Snapshot of a training state ("TCFCKPT1" binary container). Parameters
/// are stored as raw little-endian doubles, so save -> load -> forward is
/// bit-exact.
struct Checkpoint {
  std::string stage_tag;       // "stage1" | "stage2" | "stage3" | "init"
  uint64_t dataset_signature = 0;
  ModelConfig config;
  NormStats stats;
  std::vector<std::string> param_names;
  std::vector<Tensor> param_values;
  std::vector<MetricRow> history;

  static Checkpoint from_net(const DbfNet& net, const std::string& stage_tag,
                             uint64_t dataset_signature);
  DbfNet to_net() const;
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace tcf

#endif  // TCF_CHECKPOINT_HPP
