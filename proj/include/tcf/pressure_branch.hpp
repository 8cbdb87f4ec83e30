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

#ifndef TCF_PRESSURE_BRANCH_HPP
#define TCF_PRESSURE_BRANCH_HPP

#include "tcf/graph.hpp"
#include "tcf/rng.hpp"

namespace tcf {

// Encoder layer stack over the (steps, q, q) height field:
//   conv1 3x3x3 1->16 (valid time, same space), pool 1x2x2
//   conv2 3x3x3 16->32 (valid time, same space), pool 1x2x2
//   conv3   3x3 32->64 (time already collapsed),  pool 2x2
//   flatten -> fc -> code
// The two valid temporal convolutions collapse 5 -> 3 -> 1, which pins
// the input window to exactly 5 steps.
struct PressureShapes {
  int steps, q;
  int t1, s1;      // after conv1+pool1 (time, spatial)
  int t2, s2;      // after conv2+pool2
  int s3;          // after conv3+pool3 (time is 1)
  int flat;        // flattened feature count entering the fc layer
};

/// Throws a shape error spelling out the time-collapse arithmetic when
/// steps != 5 or q is too small for three halvings.
PressureShapes pressure_shapes(int steps, int q);

void init_pressure_encoder(ParamStore& ps, int q, int d_gph, Rng& rng);
void init_pressure_decoder(ParamStore& ps, int q, Rng& rng);

struct PressureCode {
  Graph::Id f_gph;  // (1, s3, s3, 64) pre-flatten feature map
  Graph::Id e_gph;  // (d_gph), linear (no activation after the fc)
};

/// gph must be a normalized (steps, q, q) stack.
PressureCode encode_gph(Graph& g, ParamStore& ps, Graph::Id gph, double leaky_slope);

/// Mirror decoder: transposed convolutions undo each pool/conv with
/// output-size targeting, restoring (steps, q, q) exactly. Output is in
/// normalized height units; the final layer is linear.
Graph::Id decode_gph(Graph& g, ParamStore& ps, Graph::Id f_gph, int steps, int q,
                     double leaky_slope);

/// Sum over future steps of the per-element mean |pred - target|
/// (per-step mean over the q*q field, summed across the steps axis).
Graph::Id gph_loss(Graph& g, Graph::Id pred, Graph::Id target);

}  // namespace tcf

#endif  // TCF_PRESSURE_BRANCH_HPP
