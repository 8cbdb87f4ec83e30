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

// NEON kernels, 2 doubles per lane (baseline on aarch64).

#ifdef TCF_HAVE_NEON

#include <arm_neon.h>

#include <cmath>

#include "tcf/kernels.hpp"

namespace tcf::kernels {
namespace {

double dot_neon(const double* x, const double* y, int n) {
  int i = 0;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

void axpy_neon(double a, const double* x, double* y, int n) {
  int i = 0;
  const float64x2_t va = vdupq_n_f64(a);
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void add_neon(const double* x, const double* y, double* out, int n) {
  int i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vaddq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  for (; i < n; ++i) out[i] = x[i] + y[i];
}

void sub_neon(const double* x, const double* y, double* out, int n) {
  int i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  for (; i < n; ++i) out[i] = x[i] - y[i];
}

void mul_neon(const double* x, const double* y, double* out, int n) {
  int i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void scale_neon(double a, double* x, int n) {
  int i = 0;
  const float64x2_t va = vdupq_n_f64(a);
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

double sum_neon(const double* x, int n) {
  int i = 0;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += x[i];
  return r;
}

double sq_sum_neon(const double* x, int n) {
  int i = 0;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vld1q_f64(x + i);
    acc = vfmaq_f64(acc, v, v);
  }
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += x[i] * x[i];
  return r;
}

double abs_diff_sum_neon(const double* x, const double* y, int n) {
  int i = 0;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (; i + 2 <= n; i += 2)
    acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += std::fabs(x[i] - y[i]);
  return r;
}

}  // namespace

const Ops neon_ops = {dot_neon,   axpy_neon, add_neon,    sub_neon,         mul_neon,
                      scale_neon, sum_neon,  sq_sum_neon, abs_diff_sum_neon};

}  // namespace tcf::kernels

#endif  // TCF_HAVE_NEON
