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

#include "tcf/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace tcf::kernels {
namespace {

struct Dispatch {
  const Ops* ops;
  Isa isa;
};

Isa detect_isa() {
#if defined(TCF_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#elif defined(TCF_HAVE_NEON)
  return Isa::neon;
#endif
  return Isa::scalar;
}

const Ops* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &scalar_ops;
    case Isa::avx2:
#ifdef TCF_HAVE_AVX2
      return &avx2_ops;
#else
      return nullptr;
#endif
    case Isa::neon:
#ifdef TCF_HAVE_NEON
      return &neon_ops;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Dispatch init_dispatch() {
  Isa isa = detect_isa();
  if (const char* env = std::getenv("TCF_ISA")) {
    std::string want(env);
    if (want == "scalar") isa = Isa::scalar;
    else if (want == "avx2" && cpu_supports(Isa::avx2)) isa = Isa::avx2;
    else if (want == "neon" && cpu_supports(Isa::neon)) isa = Isa::neon;
  }
  return {table_for(isa), isa};
}

Dispatch& dispatch() {
  static Dispatch d = init_dispatch();
  return d;
}

}  // namespace

const Ops& active() { return *dispatch().ops; }

Isa active_isa() { return dispatch().isa; }

std::string isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#ifdef TCF_HAVE_AVX2
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#ifdef TCF_HAVE_NEON
      return true;
#else
      return false;
#endif
  }
  return false;
}

void force_isa(Isa isa) {
  if (!cpu_supports(isa)) throw std::runtime_error("kernel ISA not available: " + isa_name(isa));
  dispatch() = {table_for(isa), isa};
}

}  // namespace tcf::kernels
