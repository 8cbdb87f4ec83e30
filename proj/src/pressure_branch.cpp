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

#include "tcf/pressure_branch.hpp"

#include <cmath>
#include <string>

namespace tcf {

namespace {

int halved(int s) { return (s - 2) / 2 + 1; }

Tensor fan_in_init(std::vector<int> shape, int fan_in, Rng& rng) {
  Tensor t(std::move(shape));
  double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (int i = 0; i < t.size(); ++i) t[i] = rng.uniform(-bound, bound);
  return t;
}

}  // namespace

PressureShapes pressure_shapes(int steps, int q) {
  if (steps != 5)
    throw TensorError(
        "pressure encoder: input time depth must be 5: two temporally-valid 3x3x3 convolutions "
        "collapse it 5 -> 3 -> 1 before the 2-D conv3, but got depth " +
        std::to_string(steps) + " (would collapse to " + std::to_string(steps - 4) + ")");
  PressureShapes sh;
  sh.steps = steps;
  sh.q = q;
  sh.t1 = steps - 2;
  sh.s1 = halved(q);
  sh.t2 = sh.t1 - 2;  // == 1
  sh.s2 = halved(sh.s1);
  sh.s3 = halved(sh.s2);
  if (q < 13 || q % 2 == 0)
    throw TensorError("pressure encoder: q must be odd and >= 13 to survive three 2x2 poolings, "
                      "got " + std::to_string(q));
  sh.flat = sh.s3 * sh.s3 * 64;
  return sh;
}

void init_pressure_encoder(ParamStore& ps, int q, int d_gph, Rng& rng) {
  PressureShapes sh = pressure_shapes(5, q);
  Rng r = rng.split("penc");
  ps.add("penc.conv1.k", fan_in_init({3, 3, 3, 1, 16}, 27, r));
  ps.add("penc.conv1.b", Tensor({16}));
  ps.add("penc.conv2.k", fan_in_init({3, 3, 3, 16, 32}, 27 * 16, r));
  ps.add("penc.conv2.b", Tensor({32}));
  ps.add("penc.conv3.k", fan_in_init({1, 3, 3, 32, 64}, 9 * 32, r));
  ps.add("penc.conv3.b", Tensor({64}));
  ps.add("penc.fc.W", fan_in_init({d_gph, sh.flat}, sh.flat, r));
  ps.add("penc.fc.b", Tensor({d_gph}));
}

void init_pressure_decoder(ParamStore& ps, int q, Rng& rng) {
  (void)q;
  Rng r = rng.split("pdec");
  ps.add("pdec.up3.k", fan_in_init({1, 2, 2, 64, 64}, 64, r));
  ps.add("pdec.up3.b", Tensor({64}));
  ps.add("pdec.conv3.k", fan_in_init({1, 3, 3, 64, 32}, 9 * 64, r));
  ps.add("pdec.conv3.b", Tensor({32}));
  ps.add("pdec.up2.k", fan_in_init({1, 2, 2, 32, 32}, 32, r));
  ps.add("pdec.up2.b", Tensor({32}));
  ps.add("pdec.conv2.k", fan_in_init({3, 3, 3, 32, 16}, 27 * 32, r));
  ps.add("pdec.conv2.b", Tensor({16}));
  ps.add("pdec.up1.k", fan_in_init({1, 2, 2, 16, 16}, 16, r));
  ps.add("pdec.up1.b", Tensor({16}));
  ps.add("pdec.conv1.k", fan_in_init({3, 3, 3, 16, 1}, 27 * 16, r));
  ps.add("pdec.conv1.b", Tensor({1}));
}

PressureCode encode_gph(Graph& g, ParamStore& ps, Graph::Id gph, double leaky_slope) {
  const Tensor& v = g.value(gph);
  if (v.rank() != 3)
    throw TensorError("encode_gph: expected (steps, q, q) stack, got " + shape_str(v.shape()));
  int steps = v.dim(0), q = v.dim(1);
  if (v.dim(2) != q)
    throw TensorError("encode_gph: grid not square: " + shape_str(v.shape()));
  PressureShapes sh = pressure_shapes(steps, q);

  Graph::Id x = g.reshape(gph, {steps, q, q, 1});
  auto conv_block = [&](Graph::Id in, const char* name, Graph::Dims3 pad) {
    Graph::Id k = g.param(ps, std::string("penc.") + name + ".k");
    Graph::Id b = g.param(ps, std::string("penc.") + name + ".b");
    return g.leaky_relu(g.conv3d(in, k, b, {1, 1, 1}, pad), leaky_slope);
  };

  Graph::Id c1 = conv_block(x, "conv1", {0, 1, 1});       // (3, q, q, 16)
  Graph::Id p1 = g.maxpool3d(c1, {1, 2, 2});              // (3, s1, s1, 16)
  Graph::Id c2 = conv_block(p1, "conv2", {0, 1, 1});      // (1, s1, s1, 32)
  Graph::Id p2 = g.maxpool3d(c2, {1, 2, 2});              // (1, s2, s2, 32)
  Graph::Id c3 = conv_block(p2, "conv3", {0, 1, 1});      // (1, s2, s2, 64)
  Graph::Id p3 = g.maxpool3d(c3, {1, 2, 2});              // (1, s3, s3, 64)

  PressureCode out;
  out.f_gph = p3;
  Graph::Id flat = g.reshape(p3, {sh.flat});
  Graph::Id w = g.param(ps, "penc.fc.W");
  Graph::Id b = g.param(ps, "penc.fc.b");
  out.e_gph = g.affine(w, flat, b);  // linear code
  return out;
}

Graph::Id decode_gph(Graph& g, ParamStore& ps, Graph::Id f_gph, int steps, int q,
                     double leaky_slope) {
  PressureShapes sh = pressure_shapes(steps, q);
  const Tensor& v = g.value(f_gph);
  if (v.rank() != 4 || v.dim(0) != 1 || v.dim(1) != sh.s3 || v.dim(2) != sh.s3 || v.dim(3) != 64)
    throw TensorError("decode_gph: feature map " + shape_str(v.shape()) +
                      " does not match encoder output (1," + std::to_string(sh.s3) + "," +
                      std::to_string(sh.s3) + ",64)");

  auto deconv = [&](Graph::Id in, const char* name, Graph::Dims3 stride, Graph::Dims3 pad,
                    Graph::Dims3 out_sizes, bool activate) {
    Graph::Id k = g.param(ps, std::string("pdec.") + name + ".k");
    Graph::Id b = g.param(ps, std::string("pdec.") + name + ".b");
    Graph::Id y = g.conv_transpose3d(in, k, b, stride, pad, out_sizes);
    return activate ? g.leaky_relu(y, leaky_slope) : y;
  };

  Graph::Id u3 = deconv(f_gph, "up3", {1, 2, 2}, {0, 0, 0}, {1, sh.s2, sh.s2}, true);
  Graph::Id d3 = deconv(u3, "conv3", {1, 1, 1}, {0, 1, 1}, {1, sh.s2, sh.s2}, true);
  Graph::Id u2 = deconv(d3, "up2", {1, 2, 2}, {0, 0, 0}, {1, sh.s1, sh.s1}, true);
  Graph::Id d2 = deconv(u2, "conv2", {1, 1, 1}, {0, 1, 1}, {sh.t1, sh.s1, sh.s1}, true);
  Graph::Id u1 = deconv(d2, "up1", {1, 2, 2}, {0, 0, 0}, {sh.t1, q, q}, true);
  Graph::Id d1 = deconv(u1, "conv1", {1, 1, 1}, {0, 1, 1}, {steps, q, q}, false);
  return g.reshape(d1, {steps, q, q});
}

Graph::Id gph_loss(Graph& g, Graph::Id pred, Graph::Id target) {
  const Tensor& p = g.value(pred);
  const Tensor& t = g.value(target);
  if (!p.same_shape(t))
    throw TensorError("gph_loss: shape mismatch " + shape_str(p.shape()) + " vs " +
                      shape_str(t.shape()));
  int steps = p.dim(0);
  int per_step = p.dim(1) * p.dim(2);
  std::vector<Graph::Id> terms;
  Graph::Id pief = g.reshape(pred, {steps, per_step});
  Graph::Id tief = g.reshape(target, {steps, per_step});
  for (int s = 0; s < steps; ++s)
    terms.push_back(g.l1_mean(g.row(pief, s), g.row(tief, s)));
  return g.add_n(terms);
}

}  // namespace tcf
