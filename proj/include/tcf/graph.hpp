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

#ifndef TCF_GRAPH_HPP
#define TCF_GRAPH_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "tcf/param_store.hpp"
#include "tcf/tensor.hpp"

namespace tcf {

/// Reverse-mode tape. Ops append nodes holding forward values; backward()
/// walks the tape in reverse and accumulates gradients, writing parameter
/// gradients back into the owning ParamStore.
///
/// Convolutional tensors are laid out (T, H, W, C) with C contiguous;
/// kernels are (kt, kh, kw, Cin, Cout).
class Graph {
 public:
  using Id = int;
  using Dims3 = std::array<int, 3>;

  explicit Graph(bool check_finite = default_finite_checks());

  /// Finite checks default on in debug builds, off in release.
  static bool default_finite_checks();

  // Leaves.
  Id input(Tensor v);
  Id param(ParamStore& store, const std::string& name);

  // Elementwise and linear ops.
  Id add(Id a, Id b);
  Id sub(Id a, Id b);
  Id mul(Id a, Id b);
  Id scale(Id a, double s);
  Id matvec(Id w, Id x);            // w (out,in), x (in)
  Id affine(Id w, Id x, Id b);      // w*x + b
  Id sigmoid(Id a);
  Id tanh_(Id a);
  Id relu(Id a);
  Id leaky_relu(Id a, double slope);

  // Convolutional ops (stride/pad per (t, h, w) axis).
  Id conv3d(Id x, Id kernel, Id bias, Dims3 stride, Dims3 pad);
  Id conv_transpose3d(Id x, Id kernel, Id bias, Dims3 stride, Dims3 pad, Dims3 out_sizes);
  Id maxpool3d(Id x, Dims3 window);  // stride == window, floor semantics

  // Structural ops.
  Id reshape(Id a, std::vector<int> shape);
  Id row(Id a, int r);                       // (n,d) -> (d)
  Id stack_rows(const std::vector<Id>& rows);
  Id mean_rows(Id a);                        // (n,d) -> (d)

  // Reductions to scalar.
  Id l1_sum(Id a, Id b);
  Id l1_mean(Id a, Id b);
  Id sum_squares(Id a);
  Id add_n(const std::vector<Id>& terms);    // scalar sum

  const Tensor& value(Id id) const { return nodes_[static_cast<size_t>(id)].val; }
  const Tensor& grad(Id id) const;
  double scalar(Id id) const;

  /// Reverse pass from a scalar node. May be called once per graph.
  void backward(Id loss);

  int node_count() const { return static_cast<int>(nodes_.size()); }

 private:
  struct Node {
    Tensor val;
    Tensor grad;
    std::function<void(Graph&, Id)> back;  // null for leaves / no-grad nodes
    ParamStore* store = nullptr;
    int param_index = -1;
    bool needs_grad = false;
  };

  Id emplace(Tensor val, bool needs_grad, std::function<void(Graph&, Id)> back,
             const char* op_name);
  bool any_needs_grad(std::initializer_list<Id> ids) const;
  Tensor& grad_ref(Id id) { return nodes_[static_cast<size_t>(id)].grad; }
  Node& node(Id id) { return nodes_[static_cast<size_t>(id)]; }
  const Node& node(Id id) const { return nodes_[static_cast<size_t>(id)]; }
  void require_same_shape(Id a, Id b, const char* op) const;

  std::vector<Node> nodes_;
  bool check_finite_;
  bool ran_backward_ = false;
};

}  // namespace tcf

#endif  // TCF_GRAPH_HPP
