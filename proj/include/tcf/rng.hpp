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

#ifndef TCF_RNG_HPP
#define TCF_RNG_HPP

#include <cstdint>
#include <random>
#include <string>

namespace tcf {

/// Seeded generator wrapping std::mt19937_64. The engine's output stream is
/// fully specified by the standard; the double conversions below avoid the
/// implementation-defined std distributions, so the same seed reproduces the
/// same values on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed), seed_(seed) {}

  uint64_t seed() const { return seed_; }
  uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi);  // inclusive range

  /// Standard normal via Box-Muller.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Derived stream for a named sub-task. Depends only on the original seed
  /// and the stream name, not on how many values were drawn so far.
  Rng split(const std::string& stream) const;

 private:
  std::mt19937_64 engine_;
  uint64_t seed_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// FNV-1a 64-bit, used for stream derivation and input fingerprints.
uint64_t fnv1a64(const void* data, size_t len, uint64_t basis = 14695981039346656037ull);
uint64_t fnv1a64(const std::string& s);

}  // namespace tcf

#endif  // TCF_RNG_HPP
