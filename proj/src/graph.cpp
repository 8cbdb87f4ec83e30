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

#include "tcf/graph.hpp"

#include <cmath>

#include "tcf/kernels.hpp"

namespace tcf {

namespace {
inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }
}  // namespace

Graph::Graph(bool check_finite) : check_finite_(check_finite) {}

bool Graph::default_finite_checks() {
#ifdef NDEBUG
  return false;
#else
  return true;
#endif
}

Graph::Id Graph::emplace(Tensor val, bool needs_grad, std::function<void(Graph&, Id)> back,
                         const char* op_name) {
  if (check_finite_ && !val.all_finite())
    throw TensorError(std::string("non-finite values produced by op ") + op_name);
  Node n;
  n.val = std::move(val);
  n.back = std::move(back);
  n.needs_grad = needs_grad;
  nodes_.push_back(std::move(n));
  return static_cast<Id>(nodes_.size()) - 1;
}

bool Graph::any_needs_grad(std::initializer_list<Id> ids) const {
  for (Id id : ids)
    if (node(id).needs_grad) return true;
  return false;
}

void Graph::require_same_shape(Id a, Id b, const char* op) const {
  if (!value(a).same_shape(value(b)))
    throw TensorError(std::string(op) + ": shape mismatch " + shape_str(value(a).shape()) +
                      " vs " + shape_str(value(b).shape()));
}

Graph::Id Graph::input(Tensor v) { return emplace(std::move(v), false, nullptr, "input"); }

Graph::Id Graph::param(ParamStore& store, const std::string& name) {
  Id id = emplace(store.value(name), true, nullptr, "param");
  node(id).store = &store;
  node(id).param_index = store.index(name);
  return id;
}

const Tensor& Graph::grad(Id id) const {
  if (!ran_backward_) throw TensorError("grad() before backward()");
  return node(id).grad;
}

double Graph::scalar(Id id) const {
  if (value(id).size() != 1)
    throw TensorError("scalar() on node of shape " + shape_str(value(id).shape()));
  return value(id)[0];
}

Graph::Id Graph::add(Id a, Id b) {
  require_same_shape(a, b, "add");
  const Tensor& xa = value(a);
  const Tensor& xb = value(b);
  Tensor out(xa.shape());
  kernels::active().add(xa.data(), xb.data(), out.data(), xa.size());
  return emplace(std::move(out), any_needs_grad({a, b}),
                 [a, b](Graph& g, Id self) {
                   const Tensor& go = g.grad_ref(self);
                   if (g.node(a).needs_grad)
                     kernels::axpy(1.0, go.data(), g.grad_ref(a).data(), go.size());
                   if (g.node(b).needs_grad)
                     kernels::axpy(1.0, go.data(), g.grad_ref(b).data(), go.size());
                 },
                 "add");
}

Graph::Id Graph::sub(Id a, Id b) {
  require_same_shape(a, b, "sub");
  const Tensor& xa = value(a);
  const Tensor& xb = value(b);
  Tensor out(xa.shape());
  kernels::active().sub(xa.data(), xb.data(), out.data(), xa.size());
  return emplace(std::move(out), any_needs_grad({a, b}),
                 [a, b](Graph& g, Id self) {
                   const Tensor& go = g.grad_ref(self);
                   if (g.node(a).needs_grad)
                     kernels::axpy(1.0, go.data(), g.grad_ref(a).data(), go.size());
                   if (g.node(b).needs_grad)
                     kernels::axpy(-1.0, go.data(), g.grad_ref(b).data(), go.size());
                 },
                 "sub");
}

Graph::Id Graph::mul(Id a, Id b) {
  require_same_shape(a, b, "mul");
  const Tensor& xa = value(a);
  const Tensor& xb = value(b);
  Tensor out(xa.shape());
  kernels::active().mul(xa.data(), xb.data(), out.data(), xa.size());
  return emplace(std::move(out), any_needs_grad({a, b}),
                 [a, b](Graph& g, Id self) {
                   const Tensor& go = g.grad_ref(self);
                   int n = go.size();
                   if (g.node(a).needs_grad) {
                     const double* vb = g.value(b).data();
                     double* da = g.grad_ref(a).data();
                     const double* dgo = go.data();
                     for (int i = 0; i < n; ++i) da[i] += dgo[i] * vb[i];
                   }
                   if (g.node(b).needs_grad) {
                     const double* va = g.value(a).data();
                     double* db = g.grad_ref(b).data();
                     const double* dgo = go.data();
                     for (int i = 0; i < n; ++i) db[i] += dgo[i] * va[i];
                   }
                 },
                 "mul");
}

Graph::Id Graph::scale(Id a, double s) {
  Tensor out = value(a);
  kernels::active().scale(s, out.data(), out.size());
  return emplace(std::move(out), node(a).needs_grad,
                 [a, s](Graph& g, Id self) {
                   if (!g.node(a).needs_grad) return;
                   const Tensor& go = g.grad_ref(self);
                   kernels::axpy(s, go.data(), g.grad_ref(a).data(), go.size());
                 },
                 "scale");
}

Graph::Id Graph::matvec(Id w, Id x) {
  const Tensor& vw = value(w);
  const Tensor& vx = value(x);
  if (vw.rank() != 2 || vx.rank() != 1 || vw.dim(1) != vx.dim(0))
    throw TensorError("matvec: shape mismatch " + shape_str(vw.shape()) + " vs " +
                      shape_str(vx.shape()));
  int rows = vw.dim(0), cols = vw.dim(1);
  Tensor out({rows});
  for (int r = 0; r < rows; ++r) out[r] = kernels::dot(vw.data() + r * cols, vx.data(), cols);
  return emplace(std::move(out), any_needs_grad({w, x}),
                 [w, x, rows, cols](Graph& g, Id self) {
                   const double* go = g.grad_ref(self).data();
                   if (g.node(w).needs_grad) {
                     double* dw = g.grad_ref(w).data();
                     const double* vx_ = g.value(x).data();
                     for (int r = 0; r < rows; ++r)
                       kernels::axpy(go[r], vx_, dw + r * cols, cols);
                   }
                   if (g.node(x).needs_grad) {
                     double* dx = g.grad_ref(x).data();
                     const double* vw_ = g.value(w).data();
                     for (int r = 0; r < rows; ++r)
                       kernels::axpy(go[r], vw_ + r * cols, dx, cols);
                   }
                 },
                 "matvec");
}

Graph::Id Graph::affine(Id w, Id x, Id b) {
  const Tensor& vw = value(w);
  const Tensor& vx = value(x);
  const Tensor& vb = value(b);
  if (vw.rank() != 2 || vx.rank() != 1 || vb.rank() != 1 || vw.dim(1) != vx.dim(0) ||
      vw.dim(0) != vb.dim(0))
    throw TensorError("affine: shape mismatch w" + shape_str(vw.shape()) + " x" +
                      shape_str(vx.shape()) + " b" + shape_str(vb.shape()));
  int rows = vw.dim(0), cols = vw.dim(1);
  Tensor out({rows});
  for (int r = 0; r < rows; ++r)
    out[r] = vb[r] + kernels::dot(vw.data() + r * cols, vx.data(), cols);
  return emplace(std::move(out), any_needs_grad({w, x, b}),
                 [w, x, b, rows, cols](Graph& g, Id self) {
                   const double* go = g.grad_ref(self).data();
                   if (g.node(w).needs_grad) {
                     double* dw = g.grad_ref(w).data();
                     const double* vx_ = g.value(x).data();
                     for (int r = 0; r < rows; ++r)
                       kernels::axpy(go[r], vx_, dw + r * cols, cols);
                   }
                   if (g.node(x).needs_grad) {
                     double* dx = g.grad_ref(x).data();
                     const double* vw_ = g.value(w).data();
                     for (int r = 0; r < rows; ++r)
                       kernels::axpy(go[r], vw_ + r * cols, dx, cols);
                   }
                   if (g.node(b).needs_grad)
                     kernels::axpy(1.0, go, g.grad_ref(b).data(), rows);
                 },
                 "affine");
}

Graph::Id Graph::sigmoid(Id a) {
  Tensor out = value(a);
  for (int i = 0; i < out.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-out[i]));
  return emplace(std::move(out), node(a).needs_grad,
                 [a](Graph& g, Id self) {
                   if (!g.node(a).needs_grad) return;
                   const Tensor& y = g.value(self);
                   const Tensor& go = g.grad_ref(self);
                   double* da = g.grad_ref(a).data();
                   for (int i = 0; i < y.size(); ++i) da[i] += go[i] * y[i] * (1.0 - y[i]);
                 },
                 "sigmoid");
}

Graph::Id Graph::tanh_(Id a) {
  Tensor out = value(a);
  for (int i = 0; i < out.size(); ++i) out[i] = std::tanh(out[i]);
  return emplace(std::move(out), node(a).needs_grad,
                 [a](Graph& g, Id self) {
                   if (!g.node(a).needs_grad) return;
                   const Tensor& y = g.value(self);
                   const Tensor& go = g.grad_ref(self);
                   double* da = g.grad_ref(a).data();
                   for (int i = 0; i < y.size(); ++i) da[i] += go[i] * (1.0 - y[i] * y[i]);
                 },
                 "tanh");
}

Graph::Id Graph::relu(Id a) { return leaky_relu(a, 0.0); }

Graph::Id Graph::leaky_relu(Id a, double slope) {
  Tensor out = value(a);
  for (int i = 0; i < out.size(); ++i)
    if (out[i] < 0.0) out[i] *= slope;
  return emplace(std::move(out), node(a).needs_grad,
                 [a, slope](Graph& g, Id self) {
                   if (!g.node(a).needs_grad) return;
                   const Tensor& x = g.value(a);
                   const Tensor& go = g.grad_ref(self);
                   double* da = g.grad_ref(a).data();
                   for (int i = 0; i < x.size(); ++i)
                     da[i] += go[i] * (x[i] > 0.0 ? 1.0 : slope);
                 },
                 "leaky_relu");
}

Graph::Id Graph::reshape(Id a, std::vector<int> shape) {
  Tensor out = value(a).reshaped(std::move(shape));
  return emplace(std::move(out), node(a).needs_grad,
                 [a](Graph& g, Id self) {
                   if (!g.node(a).needs_grad) return;
                   const Tensor& go = g.grad_ref(self);
                   kernels::axpy(1.0, go.data(), g.grad_ref(a).data(), go.size());
                 },
                 "reshape");
}

Graph::Id Graph::row(Id a, int r) {
  const Tensor& x = value(a);
  if (x.rank() != 2 || r < 0 || r >= x.dim(0))
    throw TensorError("row: index " + std::to_string(r) + " out of " + shape_str(x.shape()));
  int d = x.dim(1);
  Tensor out({d});
  for (int j = 0; j < d; ++j) out[j] = x.at(r, j);
  return emplace(std::move(out), node(a).needs_grad,
                 [a, r, d](Graph& g, Id self) {
                   if (!g.node(a).needs_grad) return;
                   const double* go = g.grad_ref(self).data();
                   double* da = g.grad_ref(a).data() + r * d;
                   kernels::axpy(1.0, go, da, d);
                 },
                 "row");
}

Graph::Id Graph::stack_rows(const std::vector<Id>& rows) {
  if (rows.empty()) throw TensorError("stack_rows: empty row list");
  int d = value(rows[0]).size();
  for (Id r : rows) {
    if (value(r).rank() != 1 || value(r).size() != d)
      throw TensorError("stack_rows: inconsistent row shape " + shape_str(value(r).shape()));
  }
  int n = static_cast<int>(rows.size());
  Tensor out({n, d});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) out.at(i, j) = value(rows[static_cast<size_t>(i)])[j];
  bool needs = false;
  for (Id r : rows) needs = needs || node(r).needs_grad;
  std::vector<Id> deps = rows;
  return emplace(std::move(out), needs,
                 [deps, d](Graph& g, Id self) {
                   const double* go = g.grad_ref(self).data();
                   for (size_t i = 0; i < deps.size(); ++i) {
                     if (!g.node(deps[i]).needs_grad) continue;
                     kernels::axpy(1.0, go + i * static_cast<size_t>(d),
                                   g.grad_ref(deps[i]).data(), d);
                   }
                 },
                 "stack_rows");
}

Graph::Id Graph::mean_rows(Id a) {
  const Tensor& x = value(a);
  if (x.rank() != 2) throw TensorError("mean_rows: expected rank-2, got " + shape_str(x.shape()));
  int n = x.dim(0), d = x.dim(1);
  Tensor out({d});
  for (int i = 0; i < n; ++i)
    kernels::axpy(1.0 / n, x.data() + i * d, out.data(), d);
  return emplace(std::move(out), node(a).needs_grad,
                 [a, n, d](Graph& g, Id self) {
                   if (!g.node(a).needs_grad) return;
                   const double* go = g.grad_ref(self).data();
                   double* da = g.grad_ref(a).data();
                   for (int i = 0; i < n; ++i) kernels::axpy(1.0 / n, go, da + i * d, d);
                 },
                 "mean_rows");
}

Graph::Id Graph::l1_sum(Id a, Id b) {
  require_same_shape(a, b, "l1_sum");
  double loss = kernels::active().abs_diff_sum(value(a).data(), value(b).data(), value(a).size());
  return emplace(Tensor::scalar(loss), any_needs_grad({a, b}),
                 [a, b](Graph& g, Id self) {
                   double go = g.grad_ref(self)[0];
                   const Tensor& va = g.value(a);
                   const Tensor& vb = g.value(b);
                   int n = va.size();
                   if (g.node(a).needs_grad) {
                     double* da = g.grad_ref(a).data();
                     for (int i = 0; i < n; ++i) da[i] += go * sign(va[i] - vb[i]);
                   }
                   if (g.node(b).needs_grad) {
                     double* db = g.grad_ref(b).data();
                     for (int i = 0; i < n; ++i) db[i] -= go * sign(va[i] - vb[i]);
                   }
                 },
                 "l1_sum");
}

Graph::Id Graph::l1_mean(Id a, Id b) {
  Id s = l1_sum(a, b);
  return scale(s, 1.0 / value(a).size());
}

Graph::Id Graph::sum_squares(Id a) {
  double v = kernels::active().sq_sum(value(a).data(), value(a).size());
  return emplace(Tensor::scalar(v), node(a).needs_grad,
                 [a](Graph& g, Id self) {
                   if (!g.node(a).needs_grad) return;
                   double go = g.grad_ref(self)[0];
                   const Tensor& va = g.value(a);
                   double* da = g.grad_ref(a).data();
                   for (int i = 0; i < va.size(); ++i) da[i] += 2.0 * go * va[i];
                 },
                 "sum_squares");
}

Graph::Id Graph::add_n(const std::vector<Id>& terms) {
  if (terms.empty()) throw TensorError("add_n: empty term list");
  Id acc = terms[0];
  for (size_t i = 1; i < terms.size(); ++i) acc = add(acc, terms[i]);
  return acc;
}

void Graph::backward(Id loss) {
  if (ran_backward_) throw TensorError("backward() already ran on this graph");
  if (value(loss).size() != 1)
    throw TensorError("backward: loss must be scalar, got " + shape_str(value(loss).shape()));
  ran_backward_ = true;
  for (Node& n : nodes_) n.grad = Tensor(n.val.shape());
  grad_ref(loss)[0] = 1.0;
  for (Id id = loss; id >= 0; --id) {
    Node& n = node(id);
    if (n.back && n.needs_grad) n.back(*this, id);
    if (n.store != nullptr) {
      Tensor& pg = n.store->grad(n.param_index);
      kernels::axpy(1.0, n.grad.data(), pg.data(), pg.size());
    }
  }
  if (check_finite_) {
    for (const Node& n : nodes_)
      if (!n.grad.all_finite()) throw TensorError("non-finite gradient during backward");
  }
}

}  // namespace tcf
