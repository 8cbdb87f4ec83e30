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

#ifndef TCF_KERNELS_HPP
#define TCF_KERNELS_HPP

#include <string>

namespace tcf::kernels {

// Inner-loop arithmetic behind every tensor op. Each entry has a scalar
// reference implementation plus ISA variants picked once at startup; the
// TCF_ISA environment variable or force_isa() can pin a specific table.
struct Ops {
  double (*dot)(const double* x, const double* y, int n);
  void (*axpy)(double a, const double* x, double* y, int n);     // y += a*x
  void (*add)(const double* x, const double* y, double* out, int n);
  void (*sub)(const double* x, const double* y, double* out, int n);
  void (*mul)(const double* x, const double* y, double* out, int n);
  void (*scale)(double a, double* x, int n);                     // x *= a
  double (*sum)(const double* x, int n);
  double (*sq_sum)(const double* x, int n);
  double (*abs_diff_sum)(const double* x, const double* y, int n);
};

enum class Isa { scalar, avx2, neon };

extern const Ops scalar_ops;
#ifdef TCF_HAVE_AVX2
extern const Ops avx2_ops;
#endif
#ifdef TCF_HAVE_NEON
extern const Ops neon_ops;
#endif

const Ops& active();
Isa active_isa();
std::string isa_name(Isa isa);
bool cpu_supports(Isa isa);

/// Pins the active kernel table; throws if the CPU lacks the ISA.
void force_isa(Isa isa);

inline double dot(const double* x, const double* y, int n) { return active().dot(x, y, n); }
inline void axpy(double a, const double* x, double* y, int n) { active().axpy(a, x, y, n); }

}  // namespace tcf::kernels

#endif  // TCF_KERNELS_HPP
