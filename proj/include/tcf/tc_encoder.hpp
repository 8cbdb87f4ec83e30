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

#ifndef TCF_TC_ENCODER_HPP
#define TCF_TC_ENCODER_HPP

#include <string>

#include "tcf/graph.hpp"
#include "tcf/rng.hpp"

namespace tcf {

/// Graph ids of one LSTM cell's parameters, materialized once per graph
/// so every timestep shares the same nodes.
struct LstmCellIds {
  Graph::Id W_ii, W_if, W_ig, W_io;
  Graph::Id W_hi, W_hf, W_hg, W_ho;
  Graph::Id b_ii, b_if, b_ig, b_io;
  Graph::Id b_hi, b_hf, b_hg, b_ho;
};

struct LstmState {
  Graph::Id h, c;
};

/// Uniform +-1/sqrt(hidden) init for all eight weight matrices and biases.
void init_lstm_cell(ParamStore& ps, const std::string& prefix, int input_size, int hidden,
                    Rng& rng);
LstmCellIds lstm_cell_ids(Graph& g, ParamStore& ps, const std::string& prefix);

/// i = sig(W_ii x + b_ii + W_hi h + b_hi), f/o alike, g = tanh(...);
/// c' = f*c + i*g; h' = o*tanh(c').
LstmState lstm_cell_step(Graph& g, Graph::Id x, LstmState state, const LstmCellIds& p);

struct EncoderOutput {
  Graph::Id h_seq;   // (m+1, H) top-layer latents
  LstmState final1;  // E_1
  LstmState final2;  // E_2
  Graph::Id e_tc;    // mean of h_seq rows
};

/// Two-layer stacked encoder over a normalized feature window, zero
/// initial states. Parameter prefixes "tcenc1"/"tcenc2".
void init_tc_encoder(ParamStore& ps, int input_size, int hidden, Rng& rng);
EncoderOutput encode_tc(Graph& g, ParamStore& ps, Graph::Id features, int hidden);

}  // namespace tcf

#endif  // TCF_TC_ENCODER_HPP
