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

#ifndef TCF_TENSOR_HPP
#define TCF_TENSOR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcf {

/// Dense row-major tensor of 64-bit reals. Rank is dynamic; the last
/// dimension is contiguous.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape);
  Tensor(std::vector<int> shape, std::vector<double> values);

  static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
  static Tensor full(std::vector<int> shape, double v);
  static Tensor scalar(double v) { return Tensor({1}, {v}); }

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  int size() const { return static_cast<int>(data_.size()); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double& operator[](int i) { return data_[static_cast<size_t>(i)]; }
  double operator[](int i) const { return data_[static_cast<size_t>(i)]; }

  // Index helpers for the ranks the model actually uses.
  double& at(int i, int j) { return data_[static_cast<size_t>(i * shape_[1] + j)]; }
  double at(int i, int j) const { return data_[static_cast<size_t>(i * shape_[1] + j)]; }
  double& at(int i, int j, int k) {
    return data_[static_cast<size_t>((i * shape_[1] + j) * shape_[2] + k)];
  }
  double at(int i, int j, int k) const {
    return data_[static_cast<size_t>((i * shape_[1] + j) * shape_[2] + k)];
  }

  void fill(double v);
  bool all_finite() const;
  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  /// Copy with a new shape of equal element count.
  Tensor reshaped(std::vector<int> shape) const;

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
};

std::string shape_str(const std::vector<int>& shape);
int shape_size(const std::vector<int>& shape);

/// Thrown on any shape/contract violation in the numeric core.
struct TensorError : std::runtime_error {
  explicit TensorError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tcf

#endif  // TCF_TENSOR_HPP
