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

#ifndef TCF_CONFIG_HPP
#define TCF_CONFIG_HPP

#include <map>
#include <string>

#include "tcf/model.hpp"
#include "tcf/synth.hpp"

namespace tcf {

struct TrainConfig {
  ModelConfig arch;
  double learning_rate = 0.001;
  double lr_decay = 0.0;  // inverse-time: lr / (1 + lr_decay * epoch)
  int batch_size = 64;
  double alpha = 1.2;      // weight of the height-field loss
  double beta = 1e-5;      // weight decay
  double rms_decay = 0.9;  // RMSProp running-average constant
  double rms_eps = 1e-8;
  int epochs_stage1 = 50;
  int epochs_stage2 = 50;
  int epochs_stage3 = 100;
  int patience = 10;        // early stop on validation metric (stage 3)
  double clip_norm = 5.0;   // global gradient-norm clip; <= 0 disables
  uint64_t seed = 1;
  bool tc_only = false;
  bool pressure_only = false;
  bool with_gph_decoder = true;
  bool check_finite = false;

  void validate() const;
  Ablation ablation() const;
};

/// Key/value text config ("key = value", '#' comments). Unknown keys are
/// an error so typos never pass silently. Later assignments win, which is
/// also how CLI flags override file values.
class ConfigMap {
 public:
  static ConfigMap from_file(const std::string& path);
  static ConfigMap from_text(const std::string& text, const std::string& origin);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  TrainConfig to_train_config() const;
  SynthConfig to_synth_config() const;
  IngestOptions to_ingest_options() const;

  /// Canonical "key = value" text of the resolved map, sorted by key.
  std::string resolved_text() const;

 private:
  std::map<std::string, std::string> kv_;
  double get_num(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
};

}  // namespace tcf

#endif  // TCF_CONFIG_HPP
