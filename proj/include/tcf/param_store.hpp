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

#ifndef TCF_PARAM_STORE_HPP
#define TCF_PARAM_STORE_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "tcf/tensor.hpp"

namespace tcf {

/// Named parameter tensors with matching-shape gradient slots. Iteration
/// order is insertion order so optimizer updates and serialization are
/// deterministic.
class ParamStore {
 public:
  int add(const std::string& name, Tensor init);

  bool has(const std::string& name) const { return index_.count(name) != 0; }
  int index(const std::string& name) const;
  int count() const { return static_cast<int>(values_.size()); }
  const std::vector<std::string>& names() const { return names_; }

  Tensor& value(int i) { return values_[static_cast<size_t>(i)]; }
  const Tensor& value(int i) const { return values_[static_cast<size_t>(i)]; }
  Tensor& value(const std::string& name) { return value(index(name)); }
  const Tensor& value(const std::string& name) const { return value(index(name)); }

  Tensor& grad(int i) { return grads_[static_cast<size_t>(i)]; }
  const Tensor& grad(int i) const { return grads_[static_cast<size_t>(i)]; }
  Tensor& grad(const std::string& name) { return grad(index(name)); }

  void zero_grads();
  double grad_sq_norm() const;
  void scale_grads(double s);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<Tensor> values_;
  std::vector<Tensor> grads_;
};

}  // namespace tcf

#endif  // TCF_PARAM_STORE_HPP
