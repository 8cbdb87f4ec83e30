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

#ifndef TCF_FUSION_DECODER_HPP
#define TCF_FUSION_DECODER_HPP

#include <vector>

#include "tcf/tc_encoder.hpp"

namespace tcf {

/// Layer-1 fused cell parameters: per gate, weights for the TC code, the
/// height-field code, the previous output, the recurrent state, and one
/// bias. Layer 2 is a plain LSTM cell consuming layer-1 latents; the
/// FC1/FC2 head is shared across decode steps.
struct FusionCellIds {
  struct Gate {
    Graph::Id W_T, W_G, W_Y, W_h, b;
  };
  Gate i, f, g, o;
};

void init_fusion_decoder(ParamStore& ps, int hidden, int d_gph, int tau_unused, Rng& rng);

FusionCellIds fusion_cell_ids(Graph& g, ParamStore& ps);

/// One fused decode step. The candidate gate takes tanh (the encoder-side
/// convention) even though the fused formulation leaves it unstated.
LstmState fused_cell_step(Graph& g, Graph::Id e_tc, Graph::Id e_gph, Graph::Id y_prev,
                          LstmState state, const FusionCellIds& p);

struct RolloutIds {
  Graph::Id deltas;               // (tau, 2) in normalized units
  std::vector<Graph::Id> steps;   // per-step (2) outputs
};

/// Rolls out tau steps: y_0 = 0, each step feeds the previous output;
/// layer-1 state starts from E_1, layer-2 from E_2.
RolloutIds rollout(Graph& g, ParamStore& ps, Graph::Id e_tc, Graph::Id e_gph, LstmState init1,
                   LstmState init2, int tau, int hidden);

/// Sum over steps and components of |pred - target|, normalized units.
Graph::Id loc_loss(Graph& g, Graph::Id deltas, Graph::Id target);

}  // namespace tcf

#endif  // TCF_FUSION_DECODER_HPP
