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

#include <doctest.h>

#include <cmath>

#include "tcf/fusion_decoder.hpp"
#include "testutil.hpp"

using namespace tcf;
using test::random_tensor;

namespace {

ParamStore make_decoder(int hidden, int d_gph, uint64_t seed, bool zeroed = false) {
  ParamStore ps;
  Rng rng(seed);
  init_fusion_decoder(ps, hidden, d_gph, 4, rng);
  if (zeroed)
    for (int i = 0; i < ps.count(); ++i) ps.value(i).fill(0.0);
  return ps;
}

LstmState zero_state(Graph& g, int hidden) {
  return {g.input(Tensor({hidden})), g.input(Tensor({hidden}))};
}

}  // namespace

TEST_CASE("zero parameters give the fc2 bias at every step") {
  ParamStore ps = make_decoder(4, 3, 1, true);
  ps.value("fc2.b") = Tensor({2}, {0.3, -0.2});
  Graph g;
  Rng rng(2);
  Graph::Id e_tc = g.input(random_tensor({4}, rng));
  Graph::Id e_gph = g.input(Tensor({3}));
  RolloutIds out = rollout(g, ps, e_tc, e_gph, zero_state(g, 4), zero_state(g, 4), 4, 4);
  const Tensor& deltas = g.value(out.deltas);
  REQUIRE(deltas.shape() == std::vector<int>{4, 2});
  for (int i = 0; i < 4; ++i) {
    CHECK(deltas.at(i, 0) == doctest::Approx(0.3));
    CHECK(deltas.at(i, 1) == doctest::Approx(-0.2));
  }
}

TEST_CASE("zero height-field code reproduces the tc-only conditioned cell") {
  Rng rng(3);
  ParamStore with_code = make_decoder(5, 3, 7);
  ParamStore zero_wg = make_decoder(5, 3, 7);
  for (const char* gate : {"i", "f", "g", "o"})
    zero_wg.value(std::string("fdec1.") + gate + ".W_G").fill(0.0);

  Tensor e_tc = random_tensor({5}, rng);
  Tensor e_gph = random_tensor({3}, rng);

  // e_gph forced to zero with live W_G  ==  live e_gph with W_G zeroed
  Graph g1;
  RolloutIds a = rollout(g1, with_code, g1.input(e_tc), g1.input(Tensor({3})), zero_state(g1, 5),
                         zero_state(g1, 5), 3, 5);
  Graph g2;
  RolloutIds b = rollout(g2, zero_wg, g2.input(e_tc), g2.input(e_gph), zero_state(g2, 5),
                         zero_state(g2, 5), 3, 5);
  for (int i = 0; i < 6; ++i)
    CHECK(g1.value(a.deltas)[i] == doctest::Approx(g2.value(b.deltas)[i]).epsilon(1e-14));
}

TEST_CASE("tau=1 rollout equals a single fused step through the head") {
  Rng rng(5);
  ParamStore ps = make_decoder(5, 3, 11);
  Tensor e_tc = random_tensor({5}, rng);
  Tensor e_gph = random_tensor({3}, rng);
  Tensor h1 = random_tensor({5}, rng, -0.5, 0.5);
  Tensor c1 = random_tensor({5}, rng, -0.5, 0.5);
  Tensor h2 = random_tensor({5}, rng, -0.5, 0.5);
  Tensor c2 = random_tensor({5}, rng, -0.5, 0.5);

  Graph g;
  LstmState s1{g.input(h1), g.input(c1)};
  LstmState s2{g.input(h2), g.input(c2)};
  RolloutIds roll = rollout(g, ps, g.input(e_tc), g.input(e_gph), s1, s2, 1, 5);

  Graph gm;
  FusionCellIds ids = fusion_cell_ids(gm, ps);
  LstmCellIds l2 = lstm_cell_ids(gm, ps, "fdec2");
  LstmState m1{gm.input(h1), gm.input(c1)};
  LstmState m2{gm.input(h2), gm.input(c2)};
  LstmState n1 = fused_cell_step(gm, gm.input(e_tc), gm.input(e_gph), gm.input(Tensor({2})), m1, ids);
  LstmState n2 = lstm_cell_step(gm, n1.h, m2, l2);
  Graph::Id y = gm.affine(gm.param(ps, "fc2.W"),
                          gm.relu(gm.affine(gm.param(ps, "fc1.W"), n2.h, gm.param(ps, "fc1.b"))),
                          gm.param(ps, "fc2.b"));
  for (int c = 0; c < 2; ++c)
    CHECK(g.value(roll.deltas).at(0, c) == doctest::Approx(gm.value(y)[c]).epsilon(1e-14));
}

TEST_CASE("rollout length is exactly tau and deterministic") {
  ParamStore ps = make_decoder(4, 3, 13);
  Rng rng(6);
  Tensor e_tc = random_tensor({4}, rng);
  Tensor e_gph = random_tensor({3}, rng);
  for (int tau : {1, 2, 5}) {
    Graph g;
    RolloutIds out = rollout(g, ps, g.input(e_tc), g.input(e_gph), zero_state(g, 4),
                             zero_state(g, 4), tau, 4);
    CHECK(g.value(out.deltas).shape() == std::vector<int>{tau, 2});
  }
  Graph ga, gb;
  RolloutIds a = rollout(ga, ps, ga.input(e_tc), ga.input(e_gph), zero_state(ga, 4),
                         zero_state(ga, 4), 4, 4);
  RolloutIds b = rollout(gb, ps, gb.input(e_tc), gb.input(e_gph), zero_state(gb, 4),
                         zero_state(gb, 4), 4, 4);
  for (int i = 0; i < 8; ++i) CHECK(ga.value(a.deltas)[i] == gb.value(b.deltas)[i]);
}

TEST_CASE("loc loss: perfect prediction, constant offset, gradient step") {
  ParamStore ps = make_decoder(4, 3, 17);
  Rng rng(7);
  Tensor e_tc = random_tensor({4}, rng);
  Tensor e_gph = random_tensor({3}, rng);

  Graph g;
  RolloutIds roll = rollout(g, ps, g.input(e_tc), g.input(e_gph), zero_state(g, 4),
                            zero_state(g, 4), 4, 4);
  Graph::Id perfect = loc_loss(g, roll.deltas, g.input(g.value(roll.deltas)));
  CHECK(g.scalar(perfect) == 0.0);

  // constant offset eps in every component -> 2 * tau * eps
  double eps = 0.37;
  Tensor off = g.value(roll.deltas);
  for (int i = 0; i < off.size(); ++i) off[i] += eps;
  Graph::Id offset_loss = loc_loss(g, roll.deltas, g.input(off));
  CHECK(g.scalar(offset_loss) == doctest::Approx(2 * 4 * eps).epsilon(1e-12));

  // one optimizer step decreases the loss on a fixed sample
  Tensor target = random_tensor({4, 2}, rng);
  auto run = [&]() {
    Graph gg(false);
    RolloutIds r = rollout(gg, ps, gg.input(e_tc), gg.input(e_gph), zero_state(gg, 4),
                           zero_state(gg, 4), 4, 4);
    Graph::Id loss = loc_loss(gg, r.deltas, gg.input(target));
    ps.zero_grads();
    gg.backward(loss);
    return gg.scalar(loss);
  };
  double before = run();
  for (int i = 0; i < ps.count(); ++i) {
    Tensor& p = ps.value(i);
    const Tensor& gr = ps.grad(i);
    for (int j = 0; j < p.size(); ++j) p[j] -= 1e-3 * gr[j];
  }
  double after = run();
  CHECK(after < before);
}

TEST_CASE("gradient through two chained steps passes finite differences") {
  Rng rng(29);
  ParamStore ps = make_decoder(5, 3, 19);
  Tensor e_tc = random_tensor({5}, rng);
  Tensor e_gph = random_tensor({3}, rng);
  Tensor target = random_tensor({2, 2}, rng);
  auto loss_fn = [&]() {
    Graph g(false);
    RolloutIds roll = rollout(g, ps, g.input(e_tc), g.input(e_gph),
                              {g.input(Tensor({5})), g.input(Tensor({5}))},
                              {g.input(Tensor({5})), g.input(Tensor({5}))}, 2, 5);
    Graph::Id loss = g.sum_squares(g.sub(roll.deltas, g.input(target)));
    g.backward(loss);
    return g.scalar(loss);
  };
  Rng probe_sel(101);
  auto r = test::grad_check_params_sampled(ps, loss_fn, 8, probe_sel);
  CAPTURE(r.max_rel_err);
  CHECK(r.max_rel_err < 1e-5);
}
