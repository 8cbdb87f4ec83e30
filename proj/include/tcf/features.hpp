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

#ifndef TCF_FEATURES_HPP
#define TCF_FEATURES_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tcf/bst.hpp"
#include "tcf/gph.hpp"
#include "tcf/tensor.hpp"

namespace tcf {

inline constexpr int kFeatureCount = 6;

/// Persistence-factor window: (m+1) x 6 matrix, rows in time order ending
/// at the origin time. Columns: lat, lon, max wind, 6 h lat change,
/// 6 h lon change, 24 h wind change.
struct FeatureWindow {
  Tensor values;  // (m+1, 6), raw units
  Time origin_time;
};

/// Requires r-1 and r-4 history at the earliest window row: t - m - 4 >= 0.
FeatureWindow build_feature_window(const TCTrack& track, int t, int m);

enum class Split : int { train = 0, val = 1, test = 2 };
const char* split_name(Split s);

/// Table-3 year ranges; a storm outside all ranges is excluded.
std::optional<Split> split_of_year(int genesis_year);

struct Sample {
  std::string storm_id;
  int genesis_year = 0;
  Time origin_time;
  double origin_lat = 0.0, origin_lon = 0.0;
  int intensity_code = 0;   // at origin time
  double origin_wind = 0.0;
  Tensor features;    // (m+1, 6) raw
  Tensor gph;         // (m+1, q, q) raw gpm, centered per concurrent position
  Tensor target_gph;  // (m+1, q, q), the m+1 steps after the origin
  Tensor target;      // (tau, 2) degrees: (lat_{t+i} - lat_t, lon_{t+i} - lon_t)
  Split split = Split::train;
};

struct IngestOptions {
  int m = 4;
  int tau = 4;
  int q = 51;
  double resolution = 0.5;
  int min_track_obs = 17;  // life cycle > 4 days
};

struct IngestReport {
  int tracks_in = 0;
  int tracks_kept = 0;
  int tracks_dropped_short = 0;
  int storms_outside_splits = 0;
  int windows_considered = 0;
  int skipped_history = 0;
  int skipped_crop = 0;
  int samples = 0;
  std::array<int, 3> per_split{0, 0, 0};
  std::vector<std::string> warnings;
  std::string to_text() const;
};

/// One sample per valid window position of each retained storm, split
/// assigned by storm genesis year. Deterministic order: storm id, time.
std::vector<Sample> make_samples(const std::vector<TCTrack>& tracks, const GphSource& gph,
                                 const IngestOptions& opt, IngestReport& report);

/// Per-feature z-score stats from the train split plus GPH and target
/// scaling. Near-constant features pass through centered (scale 1).
struct NormStats {
  std::array<double, kFeatureCount> feat_mean{}, feat_scale{};
  double gph_mean = 0.0, gph_scale = 1.0;
  std::array<double, 2> delta_mean{}, delta_scale{};

  static NormStats fit(const std::vector<Sample>& samples);  // train split only

  Tensor normalize_features(const Tensor& raw) const;
  Tensor denormalize_features(const Tensor& normed) const;
  Tensor normalize_gph(const Tensor& raw) const;
  Tensor denormalize_gph(const Tensor& normed) const;
  Tensor normalize_target(const Tensor& deg) const;    // (tau,2)
  Tensor denormalize_target(const Tensor& normed) const;
};

}  // namespace tcf

#endif  // TCF_FEATURES_HPP
