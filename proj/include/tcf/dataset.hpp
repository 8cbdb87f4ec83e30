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

#ifndef TCF_DATASET_HPP
#define TCF_DATASET_HPP

#include <string>
#include <vector>

#include "tcf/features.hpp"

namespace tcf {

/// Materialized sample container ("TCFDS1", little-endian binary).
/// Stores raw (un-normalized) samples plus the train-split NormStats and
/// the window geometry they were built with. Byte-identical for identical
/// inputs, so containers can be fingerprinted.
struct Dataset {
  IngestOptions options;
  NormStats stats;
  std::vector<Sample> samples;

  /// Geometry fingerprint checked between checkpoints and data.
  uint64_t signature() const;
  std::vector<const Sample*> split(Split s) const;
};

void save_dataset(const std::string& path, const Dataset& ds);
Dataset load_dataset(const std::string& path);

}  // namespace tcf

#endif  // TCF_DATASET_HPP
