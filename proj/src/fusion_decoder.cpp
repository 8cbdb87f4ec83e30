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

#include "tcf/fusion_decoder.hpp"

#include <cmath>

namespace tcf {

namespace {

Tensor uniform_init(std::vector<int> shape, double bound, Rng& rng) {
  Tensor t(std::move(shape));
  for (int i = 0; i < t.size(); ++i) t[i] = rng.uniform(-bound, bound);
  return t;
}

const char* kGateNames[] = {"i", "f", "g", "o"};

}  // namespace

void init_fusion_decoder(ParamStore& ps, int hidden, int d_gph, int /*tau*/, Rng& rng) {
  double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  // four summed input families per gate: halve each family's init scale
  // so the pre-activation variance matches a single-input cell
  double gate_bound = 0.5 * bound;
  Rng r = rng.split("fdec");
  for (const char* gate : kGateNames) {
    std::string p = std::string("fdec1.") + gate;
    ps.add(p + ".W_T", uniform_init({hidden, hidden}, gate_bound, r));
    ps.add(p + ".W_G", uniform_init({hidden, d_gph}, gate_bound, r));
    ps.add(p + ".W_Y", uniform_init({hidden, 2}, gate_bound, r));
    ps.add(p + ".W_h", uniform_init({hidden, hidden}, gate_bound, r));
    ps.add(p + ".b", uniform_init({hidden}, bound, r));
  }
  Rng r2 = rng.split("fdec2");
  init_lstm_cell(ps, "fdec2", hidden, hidden, r2);
  Rng rh = rng.split("fhead");
  ps.add("fc1.W", uniform_init({hidden, hidden}, bound, rh));
  ps.add("fc1.b", uniform_init({hidden}, bound, rh));
  ps.add("fc2.W", uniform_init({2, hidden}, bound, rh));
  ps.add("fc2.b", uniform_init({2}, bound, rh));
}

FusionCellIds fusion_cell_ids(Graph& g, ParamStore& ps) {
  auto gate = [&](const char* name) {
    std::string p = std::string("fdec1.") + name;
    FusionCellIds::Gate out;
    out.W_T = g.param(ps, p + ".W_T");
    out.W_G = g.param(ps, p + ".W_G");
    out.W_Y = g.param(ps, p + ".W_Y");
    out.W_h = g.param(ps, p + ".W_h");
    out.b = g.param(ps, p + ".b");
    return out;
  };
  FusionCellIds ids;
  ids.i = gate("i");
  ids.f = gate("f");
  ids.g = gate("g");
  ids.o = gate("o");
  return ids;
}

LstmState fused_cell_step(Graph& g, Graph::Id e_tc, Graph::Id e_gph, Graph::Id y_prev,
                          LstmState s, const FusionCellIds& p) {
  auto pre = [&](const FusionCellIds::Gate& gt) {
    Graph::Id acc = g.affine(gt.W_T, e_tc, gt.b);
    acc = g.add(acc, g.matvec(gt.W_G, e_gph));
    acc = g.add(acc, g.matvec(gt.W_Y, y_prev));
    return g.add(acc, g.matvec(gt.W_h, s.h));
  };
  Graph::Id i = g.sigmoid(pre(p.i));
  Graph::Id f = g.sigmoid(pre(p.f));
  Graph::Id gg = g.tanh_(pre(p.g));
  Graph::Id o = g.sigmoid(pre(p.o));
  Graph::Id c_next = g.add(g.mul(f, s.c), g.mul(i, gg));
  Graph::Id h_next = g.mul(o, g.tanh_(c_next));
  return {h_next, c_next};
}

RolloutIds rollout(Graph& g, ParamStore& ps, Graph::Id e_tc, Graph::Id e_gph, LstmState init1,
                   LstmState init2, int tau, int hidden) {
  if (tau < 1) throw TensorError("rollout: tau must be >= 1");
  (void)hidden;
  FusionCellIds l1 = fusion_cell_ids(g, ps);
  LstmCellIds l2 = lstm_cell_ids(g, ps, "fdec2");
  Graph::Id fc1_w = g.param(ps, "fc1.W");
  Graph::Id fc1_b = g.param(ps, "fc1.b");
  Graph::Id fc2_w = g.param(ps, "fc2.W");
  Graph::Id fc2_b = g.param(ps, "fc2.b");

  RolloutIds out;
  Graph::Id y = g.input(Tensor({2}));  // initial decoder input is zero
  LstmState s1 = init1, s2 = init2;
  for (int step = 0; step < tau; ++step) {
    s1 = fused_cell_step(g, e_tc, e_gph, y, s1, l1);
    s2 = lstm_cell_step(g, s1.h, s2, l2);
    Graph::Id hidden_fc = g.relu(g.affine(fc1_w, s2.h, fc1_b));
    y = g.affine(fc2_w, hidden_fc, fc2_b);
    out.steps.push_back(y);
  }
  out.deltas = g.stack_rows(out.steps);
  return out;
}

Graph::Id loc_loss(Graph& g, Graph::Id deltas, Graph::Id target) {
  const Tensor& a = g.value(deltas);
  const Tensor& b = g.value(target);
  if (!a.same_shape(b))
    throw TensorError("loc_loss: shape mismatch " + shape_str(a.shape()) + " vs " +
                      shape_str(b.shape()));
  return g.l1_sum(deltas, target);
}

}  // namespace tcf
