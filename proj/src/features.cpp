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

#include "tcf/features.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tcf/util.hpp"

namespace tcf {

FeatureWindow build_feature_window(const TCTrack& track, int t, int m) {
  if (m < 0 || t >= static_cast<int>(track.obs.size()))
    throw InputError("feature window: index t=" + std::to_string(t) + " out of track of " +
                     std::to_string(track.obs.size()) + " observations");
  if (t - m - 4 < 0)
    throw InputError("feature window: t=" + std::to_string(t) + " m=" + std::to_string(m) +
                     " needs 4-step wind lookback before the earliest row (t-m-4 >= 0)");
  FeatureWindow w;
  w.origin_time = track.obs[static_cast<size_t>(t)].time;
  w.values = Tensor({m + 1, kFeatureCount});
  for (int r = 0; r <= m; ++r) {
    const auto& cur = track.obs[static_cast<size_t>(t - m + r)];
    const auto& prev1 = track.obs[static_cast<size_t>(t - m + r - 1)];
    const auto& prev4 = track.obs[static_cast<size_t>(t - m + r - 4)];
    w.values.at(r, 0) = cur.lat;
    w.values.at(r, 1) = cur.lon;
    w.values.at(r, 2) = cur.max_wind;
    w.values.at(r, 3) = cur.lat - prev1.lat;
    w.values.at(r, 4) = cur.lon - prev1.lon;
    w.values.at(r, 5) = cur.max_wind - prev4.max_wind;
  }
  return w;
}

const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "?";
}

std::optional<Split> split_of_year(int y) {
  if (y >= 1979 && y <= 2008) return Split::train;
  if (y >= 2009 && y <= 2013) return Split::val;
  if (y >= 2014 && y <= 2018) return Split::test;
  return std::nullopt;
}

std::string IngestReport::to_text() const {
  std::ostringstream os;
  os << "ingest report\n"
     << "  tracks read:            " << tracks_in << "\n"
     << "  tracks kept (>=17 obs): " << tracks_kept << "\n"
     << "  tracks dropped short:   " << tracks_dropped_short << "\n"
     << "  storms outside splits:  " << storms_outside_splits << "\n"
     << "  windows considered:     " << windows_considered << "\n"
     << "  skipped (history):      " << skipped_history << "\n"
     << "  skipped (gph crop):     " << skipped_crop << "\n"
     << "  samples:                " << samples << "\n"
     << "  train/val/test:         " << per_split[0] << "/" << per_split[1] << "/" << per_split[2]
     << "\n";
  for (const auto& w : warnings) os << "  warning: " << w << "\n";
  return os.str();
}

std::vector<Sample> make_samples(const std::vector<TCTrack>& tracks, const GphSource& gph,
                                 const IngestOptions& opt, IngestReport& report) {
  std::vector<const TCTrack*> ordered;
  report.tracks_in = static_cast<int>(tracks.size());
  for (const auto& tr : tracks) {
    if (static_cast<int>(tr.obs.size()) >= opt.min_track_obs)
      ordered.push_back(&tr);
    else
      ++report.tracks_dropped_short;
  }
  report.tracks_kept = static_cast<int>(ordered.size());
  std::sort(ordered.begin(), ordered.end(),
            [](const TCTrack* a, const TCTrack* b) { return a->storm_id < b->storm_id; });

  const int m = opt.m, tau = opt.tau;
  std::vector<Sample> out;
  for (const TCTrack* tr : ordered) {
    auto split = split_of_year(tr->genesis_year());
    if (!split) {
      ++report.storms_outside_splits;
      report.warnings.push_back("storm " + tr->storm_id + " genesis year " +
                                std::to_string(tr->genesis_year()) + " outside split ranges");
      continue;
    }
    int n = static_cast<int>(tr->obs.size());
    // Targets need tau future steps; the future GPH stack needs m+1.
    int lead = std::max(tau, m + 1);
    for (int t = 0; t + lead <= n - 1; ++t) {
      ++report.windows_considered;
      if (t - m - 4 < 0) {
        ++report.skipped_history;
        continue;
      }
      Sample s;
      s.storm_id = tr->storm_id;
      s.genesis_year = tr->genesis_year();
      const auto& origin = tr->obs[static_cast<size_t>(t)];
      s.origin_time = origin.time;
      s.origin_lat = origin.lat;
      s.origin_lon = origin.lon;
      s.intensity_code = origin.intensity_code;
      s.origin_wind = origin.max_wind;
      s.split = *split;
      s.features = build_feature_window(*tr, t, m).values;

      s.target = Tensor({tau, 2});
      for (int i = 1; i <= tau; ++i) {
        const auto& fut = tr->obs[static_cast<size_t>(t + i)];
        s.target.at(i - 1, 0) = fut.lat - origin.lat;
        s.target.at(i - 1, 1) = fut.lon - origin.lon;
      }
      // a 6 h displacement beyond 5 degrees is a windowing bug, not weather
      if (std::fabs(s.target.at(0, 0)) >= 5.0 || std::fabs(s.target.at(0, 1)) >= 5.0)
        throw TensorError("make_samples: implausible 6 h displacement (" +
                          format_sci(s.target.at(0, 0)) + "," + format_sci(s.target.at(0, 1)) +
                          ") for storm " + tr->storm_id + " at " + format_ymdh(s.origin_time));

      try {
        s.gph = Tensor({m + 1, opt.q, opt.q});
        s.target_gph = Tensor({m + 1, opt.q, opt.q});
        for (int r = 0; r <= m; ++r) {
          const auto& ob = tr->obs[static_cast<size_t>(t - m + r)];
          Tensor crop = gph.crop(ob.lat, ob.lon, ob.time, opt.q, opt.resolution);
          std::copy(crop.data(), crop.data() + crop.size(),
                    s.gph.data() + static_cast<size_t>(r) * opt.q * opt.q);
          const auto& fb = tr->obs[static_cast<size_t>(t + 1 + r)];
          Tensor fcrop = gph.crop(fb.lat, fb.lon, fb.time, opt.q, opt.resolution);
          std::copy(fcrop.data(), fcrop.data() + fcrop.size(),
                    s.target_gph.data() + static_cast<size_t>(r) * opt.q * opt.q);
        }
      } catch (const IoError& e) {
        ++report.skipped_crop;
        if (report.warnings.size() < 20) report.warnings.push_back(e.what());
        continue;
      }

      ++report.per_split[static_cast<size_t>(*split)];
      out.push_back(std::move(s));
    }
  }
  report.samples = static_cast<int>(out.size());
  return out;
}

namespace {
constexpr double kScaleFloor = 1e-8;
double scale_or_one(double sd) { return sd < kScaleFloor ? 1.0 : sd; }
}  // namespace

NormStats NormStats::fit(const std::vector<Sample>& samples) {
  NormStats st;
  st.feat_scale.fill(1.0);
  st.delta_scale.fill(1.0);

  double fsum[kFeatureCount] = {0}, fsq[kFeatureCount] = {0};
  long fcount = 0;
  double gsum = 0, gsq = 0;
  long gcount = 0;
  double dsum[2] = {0}, dsq[2] = {0};
  long dcount = 0;
  for (const Sample& s : samples) {
    if (s.split != Split::train) continue;
    int rows = s.features.dim(0);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < kFeatureCount; ++c) {
        double v = s.features.at(r, c);
        fsum[c] += v;
        fsq[c] += v * v;
      }
    fcount += rows;
    for (int i = 0; i < s.gph.size(); ++i) {
      gsum += s.gph[i];
      gsq += s.gph[i] * s.gph[i];
    }
    gcount += s.gph.size();
    for (int i = 0; i < s.target.dim(0); ++i)
      for (int c = 0; c < 2; ++c) {
        double v = s.target.at(i, c);
        dsum[c] += v;
        dsq[c] += v * v;
      }
    dcount += s.target.dim(0);
  }
  if (fcount == 0) throw InputError("normalization: no train-split samples to fit");
  for (int c = 0; c < kFeatureCount; ++c) {
    st.feat_mean[static_cast<size_t>(c)] = fsum[c] / fcount;
    double var = fsq[c] / fcount - st.feat_mean[static_cast<size_t>(c)] * st.feat_mean[static_cast<size_t>(c)];
    st.feat_scale[static_cast<size_t>(c)] = scale_or_one(std::sqrt(std::max(0.0, var)));
  }
  st.gph_mean = gsum / gcount;
  st.gph_scale = scale_or_one(std::sqrt(std::max(0.0, gsq / gcount - st.gph_mean * st.gph_mean)));
  for (int c = 0; c < 2; ++c) {
    st.delta_mean[static_cast<size_t>(c)] = dsum[c] / dcount;
    double var = dsq[c] / dcount - st.delta_mean[static_cast<size_t>(c)] * st.delta_mean[static_cast<size_t>(c)];
    st.delta_scale[static_cast<size_t>(c)] = scale_or_one(std::sqrt(std::max(0.0, var)));
  }
  return st;
}

Tensor NormStats::normalize_features(const Tensor& raw) const {
  Tensor out = raw;
  int rows = raw.dim(0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < kFeatureCount; ++c)
      out.at(r, c) = (raw.at(r, c) - feat_mean[static_cast<size_t>(c)]) / feat_scale[static_cast<size_t>(c)];
  return out;
}

Tensor NormStats::denormalize_features(const Tensor& normed) const {
  Tensor out = normed;
  int rows = normed.dim(0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < kFeatureCount; ++c)
      out.at(r, c) = normed.at(r, c) * feat_scale[static_cast<size_t>(c)] + feat_mean[static_cast<size_t>(c)];
  return out;
}

Tensor NormStats::normalize_gph(const Tensor& raw) const {
  Tensor out = raw;
  for (int i = 0; i < out.size(); ++i) out[i] = (raw[i] - gph_mean) / gph_scale;
  return out;
}

Tensor NormStats::denormalize_gph(const Tensor& normed) const {
  Tensor out = normed;
  for (int i = 0; i < out.size(); ++i) out[i] = normed[i] * gph_scale + gph_mean;
  return out;
}

Tensor NormStats::normalize_target(const Tensor& deg) const {
  Tensor out = deg;
  for (int i = 0; i < deg.dim(0); ++i)
    for (int c = 0; c < 2; ++c)
      out.at(i, c) = (deg.at(i, c) - delta_mean[static_cast<size_t>(c)]) / delta_scale[static_cast<size_t>(c)];
  return out;
}

Tensor NormStats::denormalize_target(const Tensor& normed) const {
  Tensor out = normed;
  for (int i = 0; i < normed.dim(0); ++i)
    for (int c = 0; c < 2; ++c)
      out.at(i, c) = normed.at(i, c) * delta_scale[static_cast<size_t>(c)] + delta_mean[static_cast<size_t>(c)];
  return out;
}

}  // namespace tcf
