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

#include "tcf/tc_encoder.hpp"

#include <cmath>

namespace tcf {

namespace {

Tensor uniform_init(std::vector<int> shape, double bound, Rng& rng) {
  Tensor t(std::move(shape));
  for (int i = 0; i < t.size(); ++i) t[i] = rng.uniform(-bound, bound);
  return t;
}

}  // namespace

void init_lstm_cell(ParamStore& ps, const std::string& prefix, int input_size, int hidden,
                    Rng& rng) {
  double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  const char* in_gates[] = {"W_ii", "W_if", "W_ig", "W_io"};
  const char* rec_gates[] = {"W_hi", "W_hf", "W_hg", "W_ho"};
  const char* in_biases[] = {"b_ii", "b_if", "b_ig", "b_io"};
  const char* rec_biases[] = {"b_hi", "b_hf", "b_hg", "b_ho"};
  for (auto* n : in_gates) ps.add(prefix + "." + n, uniform_init({hidden, input_size}, bound, rng));
  for (auto* n : rec_gates) ps.add(prefix + "." + n, uniform_init({hidden, hidden}, bound, rng));
  for (auto* n : in_biases) ps.add(prefix + "." + n, uniform_init({hidden}, bound, rng));
  for (auto* n : rec_biases) ps.add(prefix + "." + n, uniform_init({hidden}, bound, rng));
}

LstmCellIds lstm_cell_ids(Graph& g, ParamStore& ps, const std::string& prefix) {
  auto p = [&](const char* n) { return g.param(ps, prefix + "." + n); };
  LstmCellIds ids;
  ids.W_ii = p("W_ii"); ids.W_if = p("W_if"); ids.W_ig = p("W_ig"); ids.W_io = p("W_io");
  ids.W_hi = p("W_hi"); ids.W_hf = p("W_hf"); ids.W_hg = p("W_hg"); ids.W_ho = p("W_ho");
  ids.b_ii = p("b_ii"); ids.b_if = p("b_if"); ids.b_ig = p("b_ig"); ids.b_io = p("b_io");
  ids.b_hi = p("b_hi"); ids.b_hf = p("b_hf"); ids.b_hg = p("b_hg"); ids.b_ho = p("b_ho");
  return ids;
}

LstmState lstm_cell_step(Graph& g, Graph::Id x, LstmState s, const LstmCellIds& p) {
  auto gate = [&](Graph::Id Wx, Graph::Id bx, Graph::Id Wh, Graph::Id bh) {
    return g.add(g.affine(Wx, x, bx), g.affine(Wh, s.h, bh));
  };
  Graph::Id i = g.sigmoid(gate(p.W_ii, p.b_ii, p.W_hi, p.b_hi));
  Graph::Id f = g.sigmoid(gate(p.W_if, p.b_if, p.W_hf, p.b_hf));
  Graph::Id gg = g.tanh_(gate(p.W_ig, p.b_ig, p.W_hg, p.b_hg));
  Graph::Id o = g.sigmoid(gate(p.W_io, p.b_io, p.W_ho, p.b_ho));
  Graph::Id c_next = g.add(g.mul(f, s.c), g.mul(i, gg));
  Graph::Id h_next = g.mul(o, g.tanh_(c_next));
  return {h_next, c_next};
}

void init_tc_encoder(ParamStore& ps, int input_size, int hidden, Rng& rng) {
  Rng r1 = rng.split("tcenc1");
  Rng r2 = rng.split("tcenc2");
  init_lstm_cell(ps, "tcenc1", input_size, hidden, r1);
  init_lstm_cell(ps, "tcenc2", hidden, hidden, r2);
}

EncoderOutput encode_tc(Graph& g, ParamStore& ps, Graph::Id features, int hidden) {
  const Tensor& f = g.value(features);
  if (f.rank() != 2) throw TensorError("encode_tc: expected (steps, features) window");
  int steps = f.dim(0);
  if (steps < 1) throw TensorError("encode_tc: empty feature window");

  LstmCellIds l1 = lstm_cell_ids(g, ps, "tcenc1");
  LstmCellIds l2 = lstm_cell_ids(g, ps, "tcenc2");
  LstmState s1{g.input(Tensor({hidden})), g.input(Tensor({hidden}))};
  LstmState s2{g.input(Tensor({hidden})), g.input(Tensor({hidden}))};

  std::vector<Graph::Id> latents;
  latents.reserve(static_cast<size_t>(steps));
  for (int t = 0; t < steps; ++t) {
    Graph::Id x = g.row(features, t);
    s1 = lstm_cell_step(g, x, s1, l1);
    s2 = lstm_cell_step(g, s1.h, s2, l2);
    latents.push_back(s2.h);
  }

  EncoderOutput out;
  out.h_seq = g.stack_rows(latents);
  out.final1 = s1;
  out.final2 = s2;
  out.e_tc = g.mean_rows(out.h_seq);
  return out;
}

}  // namespace tcf
