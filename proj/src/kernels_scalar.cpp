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

// Reference kernels. These define the semantics the ISA variants are
// equivalence-tested against.

#include <cmath>

#include "tcf/kernels.hpp"

namespace tcf::kernels {
namespace {

double dot_ref(const double* x, const double* y, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_ref(double a, const double* x, double* y, int n) {
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

void add_ref(const double* x, const double* y, double* out, int n) {
  for (int i = 0; i < n; ++i) out[i] = x[i] + y[i];
}

void sub_ref(const double* x, const double* y, double* out, int n) {
  for (int i = 0; i < n; ++i) out[i] = x[i] - y[i];
}

void mul_ref(const double* x, const double* y, double* out, int n) {
  for (int i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void scale_ref(double a, double* x, int n) {
  for (int i = 0; i < n; ++i) x[i] *= a;
}

double sum_ref(const double* x, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double sq_sum_ref(const double* x, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double abs_diff_sum_ref(const double* x, const double* y, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += std::fabs(x[i] - y[i]);
  return acc;
}

}  // namespace

const Ops scalar_ops = {dot_ref,   axpy_ref, add_ref,    sub_ref,         mul_ref,
                        scale_ref, sum_ref,  sq_sum_ref, abs_diff_sum_ref};

}  // namespace tcf::kernels
