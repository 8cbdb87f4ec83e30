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

#include "tcf/pressure_branch.hpp"
#include "testutil.hpp"

using namespace tcf;
using test::random_tensor;

TEST_CASE("shape trace matches the layer table at q=51") {
  PressureShapes sh = pressure_shapes(5, 51);
  CHECK(sh.t1 == 3);
  CHECK(sh.s1 == 25);
  CHECK(sh.t2 == 1);  // time collapsed before the 2-D conv
  CHECK(sh.s2 == 12);
  CHECK(sh.s3 == 6);
  CHECK(sh.flat == 2304);
}

TEST_CASE("wrong time depth raises the collapse-arithmetic error") {
  CHECK_THROWS_WITH_AS(pressure_shapes(4, 51), doctest::Contains("5 -> 3 -> 1"), TensorError);
  CHECK_THROWS_WITH_AS(pressure_shapes(7, 51), doctest::Contains("collapse"), TensorError);
}

TEST_CASE("encoder and decoder run the full q=51 geometry") {
  ParamStore ps;
  Rng rng(11);
  init_pressure_encoder(ps, 51, 16, rng);
  init_pressure_decoder(ps, 51, rng);
  for (int i = 0; i < ps.count(); ++i) ps.value(i).fill(0.0);  // zero params: fast + exact
  ps.value("penc.fc.b").fill(0.25);
  ps.value("pdec.conv1.b").fill(-0.5);

  Graph g;
  Graph::Id gph = g.input(Tensor({5, 51, 51}));
  PressureCode code = encode_gph(g, ps, gph, 0.01);
  CHECK(g.value(code.f_gph).shape() == std::vector<int>{1, 6, 6, 64});
  REQUIRE(g.value(code.e_gph).shape() == std::vector<int>{16});
  // all-zero input and zero weights: the code is exactly the fc bias
  for (int i = 0; i < 16; ++i) CHECK(g.value(code.e_gph)[i] == 0.25);

  Graph::Id decoded = decode_gph(g, ps, code.f_gph, 5, 51, 0.01);
  CHECK(g.value(decoded).shape() == std::vector<int>{5, 51, 51});
  // zero-parameter decoder emits a constant (bias) field
  for (int i = 0; i < g.value(decoded).size(); ++i) CHECK(g.value(decoded)[i] == -0.5);
}

TEST_CASE("loss conventions: per-step mean, summed over steps") {
  Graph g;
  Graph::Id a = g.input(Tensor::full({5, 7, 7}, 1.0));
  Graph::Id b = g.input(Tensor({5, 7, 7}));
  // off by one everywhere -> loss = number of steps
  CHECK(g.scalar(gph_loss(g, a, b)) == doctest::Approx(5.0));
  CHECK(g.scalar(gph_loss(g, b, a)) == doctest::Approx(5.0));  // symmetric
  Graph g2;
  Graph::Id same = g2.input(Tensor::full({5, 7, 7}, 3.0));
  CHECK(g2.scalar(gph_loss(g2, same, same)) == 0.0);
}

TEST_CASE("conv layers are shift-equivariant in the interior") {
  Rng rng(13);
  Tensor field = random_tensor({1, 9, 9, 1}, rng);
  Tensor shifted({1, 9, 9, 1});
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 8; ++x) shifted.at(0, y, x + 1) = field.at(0, y, x);
  Tensor kernel = random_tensor({1, 3, 3, 1, 1}, rng);
  Graph g;
  Graph::Id k = g.input(kernel);
  Graph::Id bias = g.input(Tensor({1}));
  Graph::Id out_a = g.conv3d(g.input(field), k, bias, {1, 1, 1}, {0, 1, 1});
  Graph::Id out_b = g.conv3d(g.input(shifted), k, bias, {1, 1, 1}, {0, 1, 1});
  for (int y = 1; y < 8; ++y)
    for (int x = 1; x < 7; ++x)
      CHECK(g.value(out_b).at(0, y, x + 1) ==
            doctest::Approx(g.value(out_a).at(0, y, x)).epsilon(1e-12));
}

TEST_CASE("full branch gradient check on the 5x13x13 configuration") {
  Rng rng(17);
  ParamStore ps;
  Rng init = rng.split("init");
  init_pressure_encoder(ps, 13, 4, init);
  init_pressure_decoder(ps, 13, init);
  // Zero-initialized biases put the output-padded deconvolution cells
  // exactly on the LeakyReLU kink, where central differences measure the
  // two-sided average instead of a subgradient. Nudge them off zero.
  Rng brng = rng.split("bias");
  for (int p = 0; p < ps.count(); ++p)
    if (!ps.names()[static_cast<size_t>(p)].empty() &&
        ps.names()[static_cast<size_t>(p)].back() == 'b') {
      Tensor& t = ps.value(p);
      for (int i = 0; i < t.size(); ++i) t[i] = brng.uniform(0.05, 0.2);
    }
  Tensor gph = random_tensor({5, 13, 13}, rng);
  // target shifted far from any reachable reconstruction so the l1 terms
  // stay away from their kinks during finite-difference probing
  Tensor tgph = random_tensor({5, 13, 13}, rng);
  for (int i = 0; i < tgph.size(); ++i) tgph[i] += 10.0;
  Tensor probe = random_tensor({4}, rng, 0.5, 1.5);

  auto loss_fn = [&]() {
    Graph g(false);
    PressureCode code = encode_gph(g, ps, g.input(gph), 0.01);
    Graph::Id recon = decode_gph(g, ps, code.f_gph, 5, 13, 0.01);
    Graph::Id loss = g.add(gph_loss(g, recon, g.input(tgph)),
                           g.sum_squares(g.mul(code.e_gph, g.input(probe))));
    g.backward(loss);
    return g.scalar(loss);
  };
  Rng probe_sel(99);
  auto r = test::grad_check_params_sampled(ps, loss_fn, 4, probe_sel);
  CAPTURE(r.max_rel_err);
  CHECK(r.max_rel_err < 1e-5);
}

TEST_CASE("single-sample overfit drops reconstruction error below 5%") {
  Rng rng(20260810);  // documented seed
  ParamStore ps;
  Rng init = rng.split("init");
  init_pressure_encoder(ps, 13, 8, init);
  init_pressure_decoder(ps, 13, init);
  // smooth target field, normalized-unit scale
  Tensor gph({5, 13, 13});
  Tensor tgph({5, 13, 13});
  for (int t = 0; t < 5; ++t)
    for (int y = 0; y < 13; ++y)
      for (int x = 0; x < 13; ++x) {
        gph.at(t, y, x) = std::sin(0.3 * (y + t)) * std::cos(0.25 * x);
        tgph.at(t, y, x) = std::sin(0.3 * (y + t + 1)) * std::cos(0.25 * x);
      }

  std::vector<Tensor> cache;
  for (int i = 0; i < ps.count(); ++i) cache.emplace_back(ps.value(i).shape());
  double initial = -1.0, last = -1.0;
  for (int step = 0; step < 500; ++step) {
    Graph g(false);
    PressureCode code = encode_gph(g, ps, g.input(gph), 0.01);
    Graph::Id recon = decode_gph(g, ps, code.f_gph, 5, 13, 0.01);
    Graph::Id loss = gph_loss(g, recon, g.input(tgph));
    ps.zero_grads();
    g.backward(loss);
    last = g.scalar(loss);
    if (step == 0) initial = last;
    for (int i = 0; i < ps.count(); ++i) {
      Tensor& v = cache[static_cast<size_t>(i)];
      Tensor& p = ps.value(i);
      const Tensor& gr = ps.grad(i);
      double lr = 5e-3 / (1.0 + 9.0 * step / 500.0);
      for (int j = 0; j < p.size(); ++j) {
        v[j] = 0.9 * v[j] + 0.1 * gr[j] * gr[j];
        p[j] -= lr * gr[j] / (std::sqrt(v[j]) + 1e-8);
      }
    }
  }
  CAPTURE(initial);
  CAPTURE(last);
  CHECK(last < 0.05 * initial);
}
