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

#include <doctest.h>

#include <cmath>

#include "tcf/features.hpp"
#include "tcf/rng.hpp"
#include "tcf/util.hpp"

using namespace tcf;

namespace {

// Table-2-like five rows plus a stationary 4-row prefix so every window
// row has its 24 h wind lookback.
TCTrack fixture_track() {
  TCTrack tr;
  tr.storm_id = "5301";
  const double lats[] = {12.5, 12.5, 12.5, 12.5, 12.5, 13.2, 14.2, 15.0, 15.9};
  const double lons[] = {111.6, 111.6, 111.6, 111.6, 111.6, 111.7, 111.7, 111.7, 111.2};
  const double wnds[] = {10, 10, 10, 10, 10, 10, 10, 10, 10};
  Time t0 = make_time(1953, 6, 14, 6);
  for (int i = 0; i < 9; ++i) {
    TCObservation o;
    o.time = t0.plus_steps(i);
    o.lat = lats[i];
    o.lon = lons[i];
    o.max_wind = wnds[i];
    o.avg_wind = wnds[i];
    o.pressure = 1000;
    tr.obs.push_back(o);
  }
  return tr;
}

TCTrack stationary_track(int n) {
  TCTrack tr;
  tr.storm_id = "STAT";
  Time t0 = make_time(1990, 8, 1, 0);
  for (int i = 0; i < n; ++i) {
    TCObservation o;
    o.time = t0.plus_steps(i);
    o.lat = 20.0;
    o.lon = 140.0;
    o.max_wind = 25.0;
    o.pressure = 990;
    tr.obs.push_back(o);
  }
  return tr;
}

TCTrack linear_track(int n, double lat0, double lon0, double dlat, double dlon, int year) {
  TCTrack tr;
  tr.storm_id = "LIN" + std::to_string(year);
  Time t0 = make_time(year, 8, 1, 0);
  for (int i = 0; i < n; ++i) {
    TCObservation o;
    o.time = t0.plus_steps(i);
    o.lat = lat0 + dlat * i;
    o.lon = lon0 + dlon * i;
    o.max_wind = 20.0 + 0.5 * i;
    o.pressure = 1000;
    o.intensity_code = 2;
    tr.obs.push_back(o);
  }
  return tr;
}

}  // namespace

TEST_CASE("window columns carry the documented persistence factors") {
  TCTrack tr = fixture_track();
  // x4 at the window end: 13.2 - 12.5 = 0.7 (two adjacent fixture rows)
  FeatureWindow w = build_feature_window(tr, 5, 1);
  int last = w.values.dim(0) - 1;
  CHECK(w.values.at(last, 3) == doctest::Approx(0.7));

  // full window over the five data rows: x6 at the last row is
  // wind(t) - wind(t-4) = 10 - 10 = 0
  FeatureWindow full = build_feature_window(tr, 8, 4);
  CHECK(full.values.dim(0) == 5);
  CHECK(full.values.at(4, 5) == doctest::Approx(0.0));
  CHECK(full.values.at(4, 0) == doctest::Approx(15.9));
  CHECK(full.values.at(4, 1) == doctest::Approx(111.2));
}

TEST_CASE("stationary storm has zero difference factors") {
  TCTrack tr = stationary_track(12);
  FeatureWindow w = build_feature_window(tr, 10, 3);
  for (int r = 0; r < w.values.dim(0); ++r) {
    CHECK(w.values.at(r, 3) == 0.0);
    CHECK(w.values.at(r, 4) == 0.0);
    CHECK(w.values.at(r, 5) == 0.0);
  }
}

TEST_CASE("insufficient history is a reported error") {
  TCTrack tr = stationary_track(12);
  CHECK_THROWS_AS(build_feature_window(tr, 7, 4), InputError);   // 7-4-4 < 0
  CHECK_NOTHROW(build_feature_window(tr, 8, 4));
}

TEST_CASE("split ranges follow the year table") {
  CHECK(split_of_year(1979) == Split::train);
  CHECK(split_of_year(2008) == Split::train);
  CHECK(split_of_year(2010) == Split::val);
  CHECK(split_of_year(2014) == Split::test);
  CHECK(split_of_year(2018) == Split::test);
  CHECK(!split_of_year(1978).has_value());
  CHECK(!split_of_year(2019).has_value());
}

TEST_CASE("make_samples windows, targets and splits") {
  AnalyticGphSource src([](double lat, double lon, Time) { return 5500.0 + lat + 0.1 * lon; });
  IngestOptions opt;
  opt.m = 4;
  opt.tau = 4;
  opt.q = 5;
  opt.resolution = 0.5;

  std::vector<TCTrack> tracks;
  tracks.push_back(linear_track(17, 12.0, 150.0, 0.2, -0.3, 1990));  // minimal retained length
  tracks.push_back(linear_track(20, 14.0, 150.0, 0.2, -0.3, 2010));  // val year
  tracks.push_back(linear_track(16, 14.0, 150.0, 0.2, -0.3, 1990));  // too short
  tracks.push_back(linear_track(20, 14.0, 150.0, 0.2, -0.3, 1950));  // outside splits

  IngestReport rep;
  auto samples = make_samples(tracks, src, opt, rep);
  CHECK(rep.tracks_dropped_short == 1);
  CHECK(rep.storms_outside_splits == 1);

  // minimal-length track: t in [8, 11] -> 4 samples
  int minimal = 0, val = 0;
  for (const auto& s : samples) {
    if (s.storm_id == "LIN1990") ++minimal;
    if (s.split == Split::val) ++val;
  }
  CHECK(minimal == 4);
  CHECK(val > 0);
  CHECK(rep.samples == static_cast<int>(samples.size()));
  CHECK(rep.per_split[0] + rep.per_split[1] + rep.per_split[2] == rep.samples);

  // target row i is the displacement from the origin, constant-velocity here
  const Sample& s = samples.front();
  for (int i = 0; i < 4; ++i) {
    CHECK(s.target.at(i, 0) == doctest::Approx(0.2 * (i + 1)));
    CHECK(s.target.at(i, 1) == doctest::Approx(-0.3 * (i + 1)));
  }
  // plausible 6 h displacement bound
  for (const auto& smp : samples) {
    CHECK(std::fabs(smp.target.at(0, 0)) < 5.0);
    CHECK(std::fabs(smp.target.at(0, 1)) < 5.0);
  }
  // gph stack is cropped per concurrent position: center cell differs
  // between the first and last window rows for a moving storm
  CHECK(s.gph.dim(0) == 5);
  double first_center = s.gph.at(0, 2 * 5 + 2);
  Tensor last_step = Tensor({5, 5});
  for (int i = 0; i < 25; ++i) last_step[i] = s.gph[4 * 25 + i];
  CHECK(first_center != last_step[2 * 5 + 2]);
}

TEST_CASE("normalization round-trips to 1e-12 relative") {
  AnalyticGphSource src([](double lat, double lon, Time) { return 5500.0 + lat + 0.1 * lon; });
  IngestOptions opt;
  opt.q = 5;
  std::vector<TCTrack> tracks{linear_track(24, 12.0, 150.0, 0.25, -0.2, 1990),
                              linear_track(24, 18.0, 160.0, -0.1, 0.3, 1995)};
  IngestReport rep;
  auto samples = make_samples(tracks, src, opt, rep);
  REQUIRE(!samples.empty());
  NormStats st = NormStats::fit(samples);

  const Sample& s = samples.front();
  Tensor f2 = st.denormalize_features(st.normalize_features(s.features));
  for (int i = 0; i < f2.size(); ++i)
    CHECK(f2[i] == doctest::Approx(s.features[i]).epsilon(1e-12));
  Tensor g2 = st.denormalize_gph(st.normalize_gph(s.gph));
  for (int i = 0; i < 25; ++i) CHECK(g2[i] == doctest::Approx(s.gph[i]).epsilon(1e-12));
  Tensor t2 = st.denormalize_target(st.normalize_target(s.target));
  for (int i = 0; i < t2.size(); ++i)
    CHECK(t2[i] == doctest::Approx(s.target[i]).epsilon(1e-12));
}
