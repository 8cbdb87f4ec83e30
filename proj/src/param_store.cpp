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

#include "tcf/param_store.hpp"

#include "tcf/kernels.hpp"

namespace tcf {

int ParamStore::add(const std::string& name, Tensor init) {
  if (index_.count(name)) throw TensorError("duplicate parameter name: " + name);
  int i = static_cast<int>(values_.size());
  names_.push_back(name);
  index_[name] = i;
  grads_.emplace_back(init.shape());
  values_.push_back(std::move(init));
  return i;
}

int ParamStore::index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw TensorError("unknown parameter: " + name);
  return it->second;
}

void ParamStore::zero_grads() {
  for (Tensor& g : grads_) g.fill(0.0);
}

double ParamStore::grad_sq_norm() const {
  double acc = 0.0;
  for (const Tensor& g : grads_) acc += kernels::active().sq_sum(g.data(), g.size());
  return acc;
}

void ParamStore::scale_grads(double s) {
  for (Tensor& g : grads_) kernels::active().scale(s, g.data(), g.size());
}

}  // namespace tcf
