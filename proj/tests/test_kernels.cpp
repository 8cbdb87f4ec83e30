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

// Equivalence tests: every ISA variant must agree with the scalar
// reference up to reduction-order rounding.

#include <doctest.h>

#include <cmath>
#include <vector>

#include "tcf/kernels.hpp"
#include "tcf/rng.hpp"

using namespace tcf;

namespace {

std::vector<const kernels::Ops*> variant_tables() {
  std::vector<const kernels::Ops*> v;
#ifdef TCF_HAVE_AVX2
  if (kernels::cpu_supports(kernels::Isa::avx2)) v.push_back(&kernels::avx2_ops);
#endif
#ifdef TCF_HAVE_NEON
  if (kernels::cpu_supports(kernels::Isa::neon)) v.push_back(&kernels::neon_ops);
#endif
  return v;
}

// Reduction bound: n rounding steps on values of magnitude ~|x||y|.
double reduction_tol(int n) { return 1e-13 * n; }

}  // namespace

TEST_CASE("ISA variants match the scalar reference") {
  auto variants = variant_tables();
  if (variants.empty()) {
    MESSAGE("no ISA variants available on this CPU; scalar only");
    return;
  }
  Rng rng(20260810);
  const kernels::Ops& ref = kernels::scalar_ops;
  // Sizes chosen to cover empty, sub-lane, lane-aligned and ragged tails.
  for (int n : {0, 1, 2, 3, 4, 5, 7, 8, 16, 31, 64, 257, 1000}) {
    std::vector<double> x(static_cast<size_t>(n)), y(static_cast<size_t>(n));
    for (auto& v : x) v = rng.uniform(-2.0, 2.0);
    for (auto& v : y) v = rng.uniform(-2.0, 2.0);
    double a = rng.uniform(-1.5, 1.5);
    for (const kernels::Ops* ops : variants) {
      CAPTURE(n);
      CHECK(std::fabs(ops->dot(x.data(), y.data(), n) - ref.dot(x.data(), y.data(), n)) <=
            reduction_tol(n + 1));
      CHECK(std::fabs(ops->sum(x.data(), n) - ref.sum(x.data(), n)) <= reduction_tol(n + 1));
      CHECK(std::fabs(ops->sq_sum(x.data(), n) - ref.sq_sum(x.data(), n)) <=
            reduction_tol(n + 1));
      CHECK(std::fabs(ops->abs_diff_sum(x.data(), y.data(), n) -
                      ref.abs_diff_sum(x.data(), y.data(), n)) <= reduction_tol(n + 1));

      // axpy may fuse the multiply-add, so allow one rounding of slack.
      std::vector<double> ya = y, yb = y;
      ops->axpy(a, x.data(), ya.data(), n);
      ref.axpy(a, x.data(), yb.data(), n);
      for (int i = 0; i < n; ++i)
        CHECK(std::fabs(ya[static_cast<size_t>(i)] - yb[static_cast<size_t>(i)]) <= 1e-15);

      std::vector<double> oa(static_cast<size_t>(n)), ob(static_cast<size_t>(n));
      ops->add(x.data(), y.data(), oa.data(), n);
      ref.add(x.data(), y.data(), ob.data(), n);
      CHECK(oa == ob);
      ops->sub(x.data(), y.data(), oa.data(), n);
      ref.sub(x.data(), y.data(), ob.data(), n);
      CHECK(oa == ob);
      ops->mul(x.data(), y.data(), oa.data(), n);
      ref.mul(x.data(), y.data(), ob.data(), n);
      CHECK(oa == ob);

      std::vector<double> sa = x, sb = x;
      ops->scale(a, sa.data(), n);
      ref.scale(a, sb.data(), n);
      CHECK(sa == sb);
    }
  }
}

TEST_CASE("dispatch reports a usable table") {
  CHECK(kernels::active().dot != nullptr);
  MESSAGE("active ISA: ", kernels::isa_name(kernels::active_isa()));
  double x[3] = {1.0, 2.0, 3.0};
  double y[3] = {4.0, 5.0, 6.0};
  CHECK(kernels::dot(x, y, 3) == doctest::Approx(32.0));
}

TEST_CASE("force_isa pins and restores") {
  auto before = kernels::active_isa();
  kernels::force_isa(kernels::Isa::scalar);
  CHECK(kernels::active_isa() == kernels::Isa::scalar);
  kernels::force_isa(before);
  CHECK(kernels::active_isa() == before);
}
