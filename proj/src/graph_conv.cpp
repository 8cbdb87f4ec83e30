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

// Convolutional ops over (T, H, W, C) tensors. Channel vectors are
// contiguous, so the inner loops are axpy/dot over C and run on the
// dispatched kernels.

#include <limits>

#include "tcf/graph.hpp"
#include "tcf/kernels.hpp"

namespace tcf {

namespace {

struct ConvDims {
  int T, H, W, Ci;      // input
  int kt, kh, kw, Co;   // kernel
  int To, Ho, Wo;       // output
};

int conv_out_dim(int in, int k, int s, int p, const char* op, const char* axis) {
  int span = in + 2 * p - k;
  if (span < 0)
    throw TensorError(std::string(op) + ": kernel " + std::to_string(k) + " exceeds padded " +
                      axis + " extent " + std::to_string(in + 2 * p));
  return span / s + 1;
}

ConvDims check_conv(const Tensor& x, const Tensor& k, const Tensor& b,
                    const Graph::Dims3& stride, const Graph::Dims3& pad, const char* op) {
  if (x.rank() != 4 || k.rank() != 5 || b.rank() != 1)
    throw TensorError(std::string(op) + ": expected x rank 4, kernel rank 5, bias rank 1; got x" +
                      shape_str(x.shape()) + " k" + shape_str(k.shape()) + " b" +
                      shape_str(b.shape()));
  ConvDims d;
  d.T = x.dim(0); d.H = x.dim(1); d.W = x.dim(2); d.Ci = x.dim(3);
  d.kt = k.dim(0); d.kh = k.dim(1); d.kw = k.dim(2); d.Co = k.dim(4);
  if (k.dim(3) != d.Ci)
    throw TensorError(std::string(op) + ": input channels " + std::to_string(d.Ci) +
                      " do not match kernel " + shape_str(k.shape()));
  if (b.dim(0) != d.Co)
    throw TensorError(std::string(op) + ": bias " + shape_str(b.shape()) +
                      " does not match kernel output channels " + std::to_string(d.Co));
  d.To = conv_out_dim(d.T, d.kt, stride[0], pad[0], op, "time");
  d.Ho = conv_out_dim(d.H, d.kh, stride[1], pad[1], op, "lat");
  d.Wo = conv_out_dim(d.W, d.kw, stride[2], pad[2], op, "lon");
  return d;
}

}  // namespace

Graph::Id Graph::conv3d(Id x, Id kernel, Id bias, Dims3 stride, Dims3 pad) {
  const Tensor& vx = value(x);
  const Tensor& vk = value(kernel);
  const Tensor& vb = value(bias);
  ConvDims d = check_conv(vx, vk, vb, stride, pad, "conv3d");

  Tensor out({d.To, d.Ho, d.Wo, d.Co});
  const double* px = vx.data();
  const double* pk = vk.data();
  double* po = out.data();
  for (int ot = 0; ot < d.To; ++ot)
    for (int oy = 0; oy < d.Ho; ++oy)
      for (int ox = 0; ox < d.Wo; ++ox) {
        double* o = po + (((ot * d.Ho) + oy) * d.Wo + ox) * d.Co;
        for (int c = 0; c < d.Co; ++c) o[c] = vb[c];
        for (int dt = 0; dt < d.kt; ++dt) {
          int ti = ot * stride[0] + dt - pad[0];
          if (ti < 0 || ti >= d.T) continue;
          for (int dy = 0; dy < d.kh; ++dy) {
            int yi = oy * stride[1] + dy - pad[1];
            if (yi < 0 || yi >= d.H) continue;
            for (int dx = 0; dx < d.kw; ++dx) {
              int xi = ox * stride[2] + dx - pad[2];
              if (xi < 0 || xi >= d.W) continue;
              const double* xi_p = px + (((ti * d.H) + yi) * d.W + xi) * d.Ci;
              const double* k_p = pk + (((dt * d.kh) + dy) * d.kw + dx) * d.Ci * d.Co;
              for (int ci = 0; ci < d.Ci; ++ci)
                kernels::axpy(xi_p[ci], k_p + ci * d.Co, o, d.Co);
            }
          }
        }
      }

  return emplace(std::move(out), any_needs_grad({x, kernel, bias}),
                 [x, kernel, bias, stride, pad, d](Graph& g, Id self) {
                   const double* go = g.grad_ref(self).data();
                   const double* px_ = g.value(x).data();
                   const double* pk_ = g.value(kernel).data();
                   bool need_x = g.node(x).needs_grad;
                   bool need_k = g.node(kernel).needs_grad;
                   bool need_b = g.node(bias).needs_grad;
                   double* dx_ = need_x ? g.grad_ref(x).data() : nullptr;
                   double* dk_ = need_k ? g.grad_ref(kernel).data() : nullptr;
                   double* db_ = need_b ? g.grad_ref(bias).data() : nullptr;
                   for (int ot = 0; ot < d.To; ++ot)
                     for (int oy = 0; oy < d.Ho; ++oy)
                       for (int ox = 0; ox < d.Wo; ++ox) {
                         const double* o = go + (((ot * d.Ho) + oy) * d.Wo + ox) * d.Co;
                         if (need_b) kernels::axpy(1.0, o, db_, d.Co);
                         for (int dt = 0; dt < d.kt; ++dt) {
                           int ti = ot * stride[0] + dt - pad[0];
                           if (ti < 0 || ti >= d.T) continue;
                           for (int dy = 0; dy < d.kh; ++dy) {
                             int yi = oy * stride[1] + dy - pad[1];
                             if (yi < 0 || yi >= d.H) continue;
                             for (int dx = 0; dx < d.kw; ++dx) {
                               int xi = ox * stride[2] + dx - pad[2];
                               if (xi < 0 || xi >= d.W) continue;
                               size_t xoff = (((static_cast<size_t>(ti) * d.H) + yi) * d.W + xi) * d.Ci;
                               size_t koff = (((static_cast<size_t>(dt) * d.kh) + dy) * d.kw + dx) * d.Ci * d.Co;
                               for (int ci = 0; ci < d.Ci; ++ci) {
                                 if (need_k)
                                   kernels::axpy(px_[xoff + ci], o, dk_ + koff + ci * d.Co, d.Co);
                                 if (need_x)
                                   dx_[xoff + ci] += kernels::dot(pk_ + koff + ci * d.Co, o, d.Co);
                               }
                             }
                           }
                         }
                       }
                 },
                 "conv3d");
}

Graph::Id Graph::conv_transpose3d(Id x, Id kernel, Id bias, Dims3 stride, Dims3 pad,
                                  Dims3 out_sizes) {
  const Tensor& vx = value(x);
  const Tensor& vk = value(kernel);
  const Tensor& vb = value(bias);
  if (vx.rank() != 4 || vk.rank() != 5 || vb.rank() != 1 || vk.dim(3) != vx.dim(3) ||
      vb.dim(0) != vk.dim(4))
    throw TensorError("conv_transpose3d: shape mismatch x" + shape_str(vx.shape()) + " k" +
                      shape_str(vk.shape()) + " b" + shape_str(vb.shape()));
  ConvDims d;
  d.T = vx.dim(0); d.H = vx.dim(1); d.W = vx.dim(2); d.Ci = vx.dim(3);
  d.kt = vk.dim(0); d.kh = vk.dim(1); d.kw = vk.dim(2); d.Co = vk.dim(4);
  d.To = out_sizes[0]; d.Ho = out_sizes[1]; d.Wo = out_sizes[2];
  const int in_dim[3] = {d.T, d.H, d.W};
  const int k_dim[3] = {d.kt, d.kh, d.kw};
  for (int a = 0; a < 3; ++a) {
    int lo = (in_dim[a] - 1) * stride[a] + k_dim[a] - 2 * pad[a];
    if (out_sizes[a] < lo || out_sizes[a] > lo + stride[a] - 1)
      throw TensorError("conv_transpose3d: requested output size " + std::to_string(out_sizes[a]) +
                        " on axis " + std::to_string(a) + " outside reachable [" +
                        std::to_string(lo) + "," + std::to_string(lo + stride[a] - 1) + "]");
  }

  Tensor out({d.To, d.Ho, d.Wo, d.Co});
  double* po = out.data();
  for (int i = 0; i < d.To * d.Ho * d.Wo; ++i)
    for (int c = 0; c < d.Co; ++c) po[i * d.Co + c] = vb[c];
  const double* px = vx.data();
  const double* pk = vk.data();
  for (int t = 0; t < d.T; ++t)
    for (int y = 0; y < d.H; ++y)
      for (int xw = 0; xw < d.W; ++xw) {
        const double* xi_p = px + (((t * d.H) + y) * d.W + xw) * d.Ci;
        for (int dt = 0; dt < d.kt; ++dt) {
          int ot = t * stride[0] + dt - pad[0];
          if (ot < 0 || ot >= d.To) continue;
          for (int dy = 0; dy < d.kh; ++dy) {
            int oy = y * stride[1] + dy - pad[1];
            if (oy < 0 || oy >= d.Ho) continue;
            for (int dx = 0; dx < d.kw; ++dx) {
              int ox = xw * stride[2] + dx - pad[2];
              if (ox < 0 || ox >= d.Wo) continue;
              double* o = po + (((ot * d.Ho) + oy) * d.Wo + ox) * d.Co;
              const double* k_p = pk + (((dt * d.kh) + dy) * d.kw + dx) * d.Ci * d.Co;
              for (int ci = 0; ci < d.Ci; ++ci)
                kernels::axpy(xi_p[ci], k_p + ci * d.Co, o, d.Co);
            }
          }
        }
      }

  return emplace(std::move(out), any_needs_grad({x, kernel, bias}),
                 [x, kernel, bias, stride, pad, d](Graph& g, Id self) {
                   const double* go = g.grad_ref(self).data();
                   const double* px_ = g.value(x).data();
                   const double* pk_ = g.value(kernel).data();
                   bool need_x = g.node(x).needs_grad;
                   bool need_k = g.node(kernel).needs_grad;
                   bool need_b = g.node(bias).needs_grad;
                   if (need_b) {
                     double* db_ = g.grad_ref(bias).data();
                     for (int i = 0; i < d.To * d.Ho * d.Wo; ++i)
                       kernels::axpy(1.0, go + static_cast<size_t>(i) * d.Co, db_, d.Co);
                   }
                   if (!need_x && !need_k) return;
                   double* dx_ = need_x ? g.grad_ref(x).data() : nullptr;
                   double* dk_ = need_k ? g.grad_ref(kernel).data() : nullptr;
                   for (int t = 0; t < d.T; ++t)
                     for (int y = 0; y < d.H; ++y)
                       for (int xw = 0; xw < d.W; ++xw) {
                         size_t xoff = (((static_cast<size_t>(t) * d.H) + y) * d.W + xw) * d.Ci;
                         for (int dt = 0; dt < d.kt; ++dt) {
                           int ot = t * stride[0] + dt - pad[0];
                           if (ot < 0 || ot >= d.To) continue;
                           for (int dy = 0; dy < d.kh; ++dy) {
                             int oy = y * stride[1] + dy - pad[1];
                             if (oy < 0 || oy >= d.Ho) continue;
                             for (int dx = 0; dx < d.kw; ++dx) {
                               int ox = xw * stride[2] + dx - pad[2];
                               if (ox < 0 || ox >= d.Wo) continue;
                               const double* o = go + (((static_cast<size_t>(ot) * d.Ho) + oy) * d.Wo + ox) * d.Co;
                               size_t koff = (((static_cast<size_t>(dt) * d.kh) + dy) * d.kw + dx) * d.Ci * d.Co;
                               for (int ci = 0; ci < d.Ci; ++ci) {
                                 if (need_k)
                                   kernels::axpy(px_[xoff + ci], o, dk_ + koff + ci * d.Co, d.Co);
                                 if (need_x)
                                   dx_[xoff + ci] += kernels::dot(pk_ + koff + ci * d.Co, o, d.Co);
                               }
                             }
                           }
                         }
                       }
                 },
                 "conv_transpose3d");
}

Graph::Id Graph::maxpool3d(Id x, Dims3 window) {
  const Tensor& vx = value(x);
  if (vx.rank() != 4)
    throw TensorError("maxpool3d: expected rank-4 input, got " + shape_str(vx.shape()));
  int T = vx.dim(0), H = vx.dim(1), W = vx.dim(2), C = vx.dim(3);
  int wt = window[0], wh = window[1], ww = window[2];
  if (wt > T || wh > H || ww > W)
    throw TensorError("maxpool3d: window exceeds input " + shape_str(vx.shape()));
  int To = (T - wt) / wt + 1, Ho = (H - wh) / wh + 1, Wo = (W - ww) / ww + 1;

  Tensor out({To, Ho, Wo, C});
  std::vector<int> argmax(static_cast<size_t>(out.size()));
  const double* px = vx.data();
  double* po = out.data();
  size_t oi = 0;
  for (int ot = 0; ot < To; ++ot)
    for (int oy = 0; oy < Ho; ++oy)
      for (int ox = 0; ox < Wo; ++ox)
        for (int c = 0; c < C; ++c, ++oi) {
          double best = -std::numeric_limits<double>::infinity();
          int best_idx = -1;
          for (int dt = 0; dt < wt; ++dt)
            for (int dy = 0; dy < wh; ++dy)
              for (int dx = 0; dx < ww; ++dx) {
                int ti = ot * wt + dt, yi = oy * wh + dy, xi = ox * ww + dx;
                int idx = (((ti * H) + yi) * W + xi) * C + c;
                if (px[idx] > best) {
                  best = px[idx];
                  best_idx = idx;
                }
              }
          po[oi] = best;
          argmax[oi] = best_idx;
        }

  return emplace(std::move(out), node(x).needs_grad,
                 [x, argmax = std::move(argmax)](Graph& g, Id self) {
                   if (!g.node(x).needs_grad) return;
                   const double* go = g.grad_ref(self).data();
                   double* dx = g.grad_ref(x).data();
                   for (size_t i = 0; i < argmax.size(); ++i) dx[argmax[i]] += go[i];
                 },
                 "maxpool3d");
}

}  // namespace tcf
