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

#include "tcf/config.hpp"

#include <set>
#include <sstream>

#include "tcf/util.hpp"

namespace tcf {

void TrainConfig::validate() const {
  if (alpha < 0.0 || beta < 0.0) throw InputError("config: alpha and beta must be >= 0");
  if (batch_size < 1) throw InputError("config: batch_size must be >= 1");
  if (learning_rate <= 0.0) throw InputError("config: learning_rate must be > 0");
  if (lr_decay < 0.0) throw InputError("config: lr_decay must be >= 0");
  if (rms_decay <= 0.0 || rms_decay >= 1.0) throw InputError("config: rms_decay must be in (0,1)");
  if (tc_only && pressure_only)
    throw InputError("config: tc_only and pressure_only are mutually exclusive");
}

Ablation TrainConfig::ablation() const {
  if (tc_only) return Ablation::tc_only;
  if (pressure_only) return Ablation::pressure_only;
  return Ablation::full;
}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      // architecture
      "m", "tau", "q", "resolution", "hidden", "d_gph", "leaky_slope",
      // training
      "learning_rate", "lr_decay", "batch_size", "alpha", "beta", "rms_decay", "rms_eps",
      "epochs_stage1", "epochs_stage2", "epochs_stage3", "patience", "clip_norm", "seed",
      "tc_only", "pressure_only", "with_gph_decoder", "check_finite",
      // synth worlds
      "train_storms", "val_storms", "test_storms", "min_steps", "max_steps", "noise_level",
      "bump_count", "grid_margin", "substeps", "steer_gain", "beta_dlat", "beta_dlon", "base_gph",
      // ingest
      "min_track_obs"};
  return keys;
}

}  // namespace

ConfigMap ConfigMap::from_file(const std::string& path) {
  return from_text(read_file(path), path);
}

ConfigMap ConfigMap::from_text(const std::string& text, const std::string& origin) {
  ConfigMap cm;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw InputError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    cm.set(key, value);
  }
  return cm;
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  if (!known_keys().count(key)) throw InputError("config: unknown key '" + key + "'");
  kv_[key] = value;
}

double ConfigMap::get_num(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    throw InputError("config: key '" + key + "' has non-numeric value '" + it->second + "'");
  }
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw InputError("config: key '" + key + "' must be true/false, got '" + it->second + "'");
}

TrainConfig ConfigMap::to_train_config() const {
  TrainConfig c;
  c.arch.m = static_cast<int>(get_num("m", c.arch.m));
  c.arch.tau = static_cast<int>(get_num("tau", c.arch.tau));
  c.arch.q = static_cast<int>(get_num("q", c.arch.q));
  c.arch.resolution = get_num("resolution", c.arch.resolution);
  c.arch.hidden = static_cast<int>(get_num("hidden", c.arch.hidden));
  c.arch.d_gph = static_cast<int>(get_num("d_gph", c.arch.d_gph));
  c.arch.leaky_slope = get_num("leaky_slope", c.arch.leaky_slope);
  c.learning_rate = get_num("learning_rate", c.learning_rate);
  c.lr_decay = get_num("lr_decay", c.lr_decay);
  c.batch_size = static_cast<int>(get_num("batch_size", c.batch_size));
  c.alpha = get_num("alpha", c.alpha);
  c.beta = get_num("beta", c.beta);
  c.rms_decay = get_num("rms_decay", c.rms_decay);
  c.rms_eps = get_num("rms_eps", c.rms_eps);
  c.epochs_stage1 = static_cast<int>(get_num("epochs_stage1", c.epochs_stage1));
  c.epochs_stage2 = static_cast<int>(get_num("epochs_stage2", c.epochs_stage2));
  c.epochs_stage3 = static_cast<int>(get_num("epochs_stage3", c.epochs_stage3));
  c.patience = static_cast<int>(get_num("patience", c.patience));
  c.clip_norm = get_num("clip_norm", c.clip_norm);
  c.seed = static_cast<uint64_t>(get_num("seed", static_cast<double>(c.seed)));
  c.tc_only = get_bool("tc_only", c.tc_only);
  c.pressure_only = get_bool("pressure_only", c.pressure_only);
  c.with_gph_decoder = get_bool("with_gph_decoder", c.with_gph_decoder);
  c.check_finite = get_bool("check_finite", c.check_finite);
  c.validate();
  return c;
}

SynthConfig ConfigMap::to_synth_config() const {
  SynthConfig c;
  c.train_storms = static_cast<int>(get_num("train_storms", c.train_storms));
  c.val_storms = static_cast<int>(get_num("val_storms", c.val_storms));
  c.test_storms = static_cast<int>(get_num("test_storms", c.test_storms));
  c.min_steps = static_cast<int>(get_num("min_steps", c.min_steps));
  c.max_steps = static_cast<int>(get_num("max_steps", c.max_steps));
  c.noise_level = get_num("noise_level", c.noise_level);
  c.bump_count = static_cast<int>(get_num("bump_count", c.bump_count));
  c.q = static_cast<int>(get_num("q", c.q));
  c.resolution = get_num("resolution", c.resolution);
  c.grid_margin = static_cast<int>(get_num("grid_margin", c.grid_margin));
  c.substeps = static_cast<int>(get_num("substeps", c.substeps));
  c.steer_gain = get_num("steer_gain", c.steer_gain);
  c.beta_dlat = get_num("beta_dlat", c.beta_dlat);
  c.beta_dlon = get_num("beta_dlon", c.beta_dlon);
  c.base_gph = get_num("base_gph", c.base_gph);
  if (c.train_storms < 0 || c.val_storms < 0 || c.test_storms < 0)
    throw InputError("config: storm counts must be >= 0");
  if (c.min_steps > c.max_steps) throw InputError("config: min_steps > max_steps");
  return c;
}

IngestOptions ConfigMap::to_ingest_options() const {
  IngestOptions o;
  o.m = static_cast<int>(get_num("m", o.m));
  o.tau = static_cast<int>(get_num("tau", o.tau));
  o.q = static_cast<int>(get_num("q", o.q));
  o.resolution = get_num("resolution", o.resolution);
  o.min_track_obs = static_cast<int>(get_num("min_track_obs", o.min_track_obs));
  return o;
}

std::string ConfigMap::resolved_text() const {
  std::ostringstream os;
  for (const auto& [k, v] : kv_) os << k << " = " << v << "\n";
  return os.str();
}

}  // namespace tcf
