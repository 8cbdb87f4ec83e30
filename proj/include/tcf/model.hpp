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

#ifndef TCF_MODEL_HPP
#define TCF_MODEL_HPP

#include <string>

#include "tcf/dataset.hpp"
#include "tcf/features.hpp"
#include "tcf/fusion_decoder.hpp"
#include "tcf/pressure_branch.hpp"
#include "tcf/tc_encoder.hpp"

namespace tcf {

struct ModelConfig {
  int m = 4;       // m+1 input points; the pressure branch pins m+1 == 5
  int tau = 4;
  int q = 51;
  double resolution = 0.5;
  int hidden = 128;
  int d_gph = 128;
  double leaky_slope = 0.01;
};

enum class Ablation { full, tc_only, pressure_only };
Ablation ablation_from_string(const std::string& s);
const char* ablation_name(Ablation a);

/// tau x 2 displacement forecast plus reconstructed absolute positions.
struct Forecast {
  Tensor deltas;    // (tau, 2) degrees
  Tensor absolute;  // (tau, 2): origin + delta, exactly
  double origin_lat = 0.0, origin_lon = 0.0;
  Time origin_time;
};

Forecast make_forecast(const Tensor& deltas_deg, double origin_lat, double origin_lon,
                       Time origin_time);

/// One line per horizon: lead hours, lat, lon, dlat, dlon.
std::string forecast_to_text(const Forecast& f);

/// Full forecasting network: both branch parameter sets plus the fusion
/// decoder, with the normalization stats they were trained under.
struct DbfNet {
  ModelConfig cfg;
  NormStats stats;
  ParamStore params;

  static DbfNet init(const ModelConfig& cfg, const NormStats& stats, uint64_t seed);
};

/// Graph-side forward pieces (shared by training and inference).
struct ForwardIds {
  EncoderOutput enc;     // valid unless pressure_only
  Graph::Id e_gph = -1;  // zeros under tc_only
  PressureCode pcode;    // valid only when the pressure branch ran
  RolloutIds roll;
  bool has_pressure = false;
};

ForwardIds forward_track(Graph& g, DbfNet& net, const Sample& sample, Ablation ablation);

/// Inference path: TC encoder + pressure encoder + fusion decoder only
/// (the height-field decoder is training scaffolding).
Forecast predict(DbfNet& net, const Sample& sample, Ablation ablation = Ablation::full);

/// Weight-decay scope: conv kernels and W matrices, never biases.
bool is_weight_param(const std::string& name);
Graph::Id l2_penalty(Graph& g, ParamStore& ps);

}  // namespace tcf

#endif  // TCF_MODEL_HPP
