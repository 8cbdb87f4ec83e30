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

#include "tcf/graph.hpp"
#include "tcf/rng.hpp"
#include "testutil.hpp"

using namespace tcf;
using test::grad_check_params;
using test::random_tensor;

TEST_CASE("sigmoid(0) = 0.5 and tanh(0) = 0") {
  Graph g;
  auto x = g.input(Tensor({3}));
  CHECK(g.value(g.sigmoid(x))[1] == doctest::Approx(0.5));
  CHECK(g.value(g.tanh_(x))[1] == doctest::Approx(0.0));
}

TEST_CASE("l1 of identical tensors is zero with zero gradient") {
  ParamStore ps;
  ps.add("x", Tensor({4}, {0.3, -0.2, 0.9, 0.0}));
  Graph g;
  auto x = g.param(ps, "x");
  auto y = g.input(Tensor({4}, {0.3, -0.2, 0.9, 0.0}));
  auto loss = g.l1_sum(x, y);
  CHECK(g.scalar(loss) == 0.0);
  g.backward(loss);
  for (int i = 0; i < 4; ++i) CHECK(ps.grad("x")[i] == 0.0);
}

TEST_CASE("shape mismatch errors name the op and both shapes") {
  Graph g;
  auto a = g.input(Tensor({2, 3}));
  auto b = g.input(Tensor({3, 2}));
  CHECK_THROWS_WITH_AS(g.add(a, b), doctest::Contains("add"), TensorError);
  auto w = g.input(Tensor({4, 5}));
  auto x = g.input(Tensor({4}));
  CHECK_THROWS_WITH_AS(g.matvec(w, x), doctest::Contains("(4,5)"), TensorError);
}

TEST_CASE("finite check trips on NaN when enabled") {
  Graph g(true);
  auto x = g.input(Tensor({2}, {1.0, -1.0}));
  auto big = g.scale(x, 1e308);
  CHECK_THROWS_AS(g.mul(big, big), TensorError);  // overflows to inf
}

// Gradient of every primitive against central finite differences
// (h = 1e-6, 64-bit), randomized inputs, small shapes.
TEST_CASE("primitive gradients match finite differences") {
  Rng rng(7);
  const double tol = 1e-6;
  const int trials = 100;

  for (int trial = 0; trial < trials; ++trial) {
    Rng trial_rng = rng.split("trial" + std::to_string(trial));
    ParamStore ps;
    ps.add("a", random_tensor({5}, trial_rng));
    ps.add("b", random_tensor({5}, trial_rng));
    ps.add("w", random_tensor({3, 5}, trial_rng));
    ps.add("bias", random_tensor({3}, trial_rng));

    int pick = trial % 10;
    auto loss_fn = [&]() {
      Graph g(false);
      auto a = g.param(ps, "a");
      auto b = g.param(ps, "b");
      auto w = g.param(ps, "w");
      auto bias = g.param(ps, "bias");
      Graph::Id out;
      switch (pick) {
        case 0: out = g.add(a, b); break;
        case 1: out = g.sub(a, b); break;
        case 2: out = g.mul(a, b); break;
        case 3: out = g.scale(a, 1.7); break;
        case 4: out = g.sigmoid(a); break;
        case 5: out = g.tanh_(a); break;
        case 6: out = g.relu(a); break;
        case 7: out = g.leaky_relu(a, 0.01); break;
        case 8: out = g.matvec(w, a); break;
        default: out = g.affine(w, a, bias); break;
      }
      // fixed positive weights; offset keeps |.| away from its kink
      Tensor probe(g.value(out).shape());
      Rng probe_rng = trial_rng.split("probe");
      for (int i = 0; i < probe.size(); ++i) probe[i] = probe_rng.uniform(0.5, 1.5);
      auto target = g.input(Tensor::full(g.value(out).shape(), 10.0));
      auto weighted = g.mul(out, g.input(probe));
      auto loss = g.l1_sum(weighted, target);
      g.backward(loss);
      return g.scalar(loss);
    };

    auto r = grad_check_params(ps, loss_fn);
    CAPTURE(pick);
    CAPTURE(r.worst_index);
    CAPTURE(r.analytic);
    CAPTURE(r.numeric);
    CHECK(r.max_rel_err < tol);
  }
}

TEST_CASE("reduction gradients match finite differences") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Rng trial_rng = rng.split("red" + std::to_string(trial));
    ParamStore ps;
    ps.add("a", random_tensor({4, 3}, trial_rng));
    ps.add("b", random_tensor({4, 3}, trial_rng));
    int pick = trial % 4;
    auto loss_fn = [&]() {
      Graph g(false);
      auto a = g.param(ps, "a");
      auto b = g.param(ps, "b");
      Graph::Id loss;
      switch (pick) {
        case 0: loss = g.l1_sum(a, b); break;
        case 1: loss = g.l1_mean(a, b); break;
        case 2: loss = g.sum_squares(a); break;
        default: {
          auto m = g.mean_rows(a);
          auto r2 = g.row(b, 2);
          loss = g.sum_squares(g.stack_rows({m, r2, g.mul(m, r2)}));
          break;
        }
      }
      g.backward(loss);
      return g.scalar(loss);
    };
    auto r = grad_check_params(ps, loss_fn);
    CAPTURE(pick);
    CHECK(r.max_rel_err < 1e-6);
  }
}

TEST_CASE("conv3d / conv_transpose3d / maxpool3d gradients match finite differences") {
  Rng rng(13);
  for (int trial = 0; trial < 8; ++trial) {
    Rng trial_rng = rng.split("conv" + std::to_string(trial));
    ParamStore ps;
    ps.add("x", random_tensor({3, 5, 5, 2}, trial_rng));
    ps.add("k", random_tensor({3, 3, 3, 2, 2}, trial_rng));
    ps.add("kb", random_tensor({2}, trial_rng));
    ps.add("kt", random_tensor({2, 2, 2, 2, 2}, trial_rng));

    int pick = trial % 3;
    auto loss_fn = [&]() {
      Graph g(false);
      auto x = g.param(ps, "x");
      auto k = g.param(ps, "k");
      auto kb = g.param(ps, "kb");
      auto kt = g.param(ps, "kt");
      Graph::Id out;
      if (pick == 0) {
        out = g.conv3d(x, k, kb, {1, 1, 1}, {0, 1, 1});  // valid time, same space
      } else if (pick == 1) {
        out = g.conv_transpose3d(x, kt, kb, {1, 2, 2}, {0, 0, 0}, {4, 10, 10});
      } else {
        out = g.maxpool3d(x, {1, 2, 2});
      }
      Rng probe_rng = trial_rng.split("probe");
      Tensor probe(g.value(out).shape());
      for (int i = 0; i < probe.size(); ++i) probe[i] = probe_rng.uniform(0.5, 1.5);
      auto loss = g.sum_squares(g.mul(out, g.input(probe)));
      g.backward(loss);
      return g.scalar(loss);
    };
    auto r = grad_check_params(ps, loss_fn);
    CAPTURE(pick);
    CAPTURE(r.max_rel_err);
    CHECK(r.max_rel_err < 1e-6);
  }
}

TEST_CASE("maxpool is idempotent on constant input") {
  Graph g;
  auto x = g.input(Tensor::full({2, 4, 4, 3}, 2.5));
  auto p = g.maxpool3d(x, {1, 2, 2});
  const Tensor& out = g.value(p);
  CHECK(out.shape() == std::vector<int>{2, 2, 2, 3});
  for (int i = 0; i < out.size(); ++i) CHECK(out[i] == 2.5);
}

TEST_CASE("conv with identity kernel reproduces input") {
  Rng rng(17);
  Tensor x = random_tensor({1, 6, 6, 1}, rng);
  Tensor k({1, 1, 1, 1, 1}, {1.0});
  Graph g;
  auto out = g.conv3d(g.input(x), g.input(k), g.input(Tensor({1})), {1, 1, 1}, {0, 0, 0});
  const Tensor& y = g.value(out);
  REQUIRE(y.size() == x.size());
  for (int i = 0; i < x.size(); ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-14));
}

TEST_CASE("parameter reuse across ops accumulates gradients once per use") {
  ParamStore ps;
  ps.add("w", Tensor({2}, {1.0, 2.0}));
  Graph g;
  auto w = g.param(ps, "w");
  auto s = g.add(w, w);  // y = 2w
  auto loss = g.sum_squares(s);
  g.backward(loss);
  // d/dw sum((2w)^2) = 8w
  CHECK(ps.grad("w")[0] == doctest::Approx(8.0));
  CHECK(ps.grad("w")[1] == doctest::Approx(16.0));
}
