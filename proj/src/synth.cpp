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

#include "tcf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "tcf/rng.hpp"
#include "tcf/util.hpp"

namespace tcf {

namespace fs = std::filesystem;
using nlohmann::json;

const RidgeSpec& SteeringLaw::ridge_at(double s) const {
  if (episodes.empty()) throw InputError("steering law has no ridge episodes");
  const Episode* found = &episodes.front();
  for (const Episode& e : episodes) {
    if (e.start_step <= s) found = &e;
    else break;
  }
  return found->ridge;
}

namespace {

inline double gauss2(double dlat, double dlon, double sig_lat, double sig_lon) {
  return std::exp(-0.5 * (dlat * dlat / (sig_lat * sig_lat) + dlon * dlon / (sig_lon * sig_lon)));
}

struct ActiveRidge {
  const RidgeSpec* ridge;
  double lon_c;  // drifted center at step s
};

ActiveRidge active_ridge(const std::vector<SteeringLaw::Episode>& episodes, double s) {
  if (episodes.empty()) throw InputError("steering law has no ridge episodes");
  const SteeringLaw::Episode* found = &episodes.front();
  for (const auto& e : episodes) {
    if (e.start_step <= s) found = &e;
    else break;
  }
  return {&found->ridge, found->ridge.lon_c0 + found->ridge.lon_drift * (s - found->start_step)};
}

}  // namespace

double SteeringLaw::gph(double lat, double lon, double s) const {
  ActiveRidge a = active_ridge(episodes, s);
  const RidgeSpec& r = *a.ridge;
  double z = base_gph + r.amp * gauss2(lat - r.lat_c, lon - a.lon_c, r.sig_lat, r.sig_lon);
  for (const BumpSpec& b : bumps)
    if (b.amp != 0.0) z += b.amp * gauss2(lat - b.lat_c, lon - b.lon_c, b.sig, b.sig);
  return z;
}

std::array<double, 2> SteeringLaw::velocity(double lat, double lon, double s) const {
  ActiveRidge a = active_ridge(episodes, s);
  const RidgeSpec& r = *a.ridge;
  double lon_c = a.lon_c;
  double dlat_r = lat - r.lat_c;
  double dlon_r = lon - lon_c;
  double g = r.amp * gauss2(dlat_r, dlon_r, r.sig_lat, r.sig_lon);
  double dz_dlat = -dlat_r / (r.sig_lat * r.sig_lat) * g;
  double dz_dlon = -dlon_r / (r.sig_lon * r.sig_lon) * g;
  for (const BumpSpec& b : bumps) {
    if (b.amp == 0.0) continue;
    double bdlat = lat - b.lat_c, bdlon = lon - b.lon_c;
    double bg = b.amp * gauss2(bdlat, bdlon, b.sig, b.sig);
    dz_dlat += -bdlat / (b.sig * b.sig) * bg;
    dz_dlon += -bdlon / (b.sig * b.sig) * bg;
  }
  // Clockwise flow around the high plus beta drift.
  double vlat = steer_gain * dz_dlon + beta_dlat;
  double vlon = -steer_gain * dz_dlat + beta_dlon;
  return {vlat, vlon};
}

std::array<double, 2> SteeringLaw::advance(double lat, double lon, double s, int substeps) const {
  double h = 1.0 / substeps;
  double la = lat, lo = lon, t = s;
  for (int i = 0; i < substeps; ++i) {
    auto k1 = velocity(la, lo, t);
    auto k2 = velocity(la + 0.5 * h * k1[0], lo + 0.5 * h * k1[1], t + 0.5 * h);
    auto k3 = velocity(la + 0.5 * h * k2[0], lo + 0.5 * h * k2[1], t + 0.5 * h);
    auto k4 = velocity(la + h * k3[0], lo + h * k3[1], t + h);
    la += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    lo += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    t += h;
  }
  return {la, lo};
}

std::string SteeringLaw::to_json() const {
  json j;
  j["t0"] = format_ymdh(t0);
  j["base_gph"] = base_gph;
  j["steer_gain"] = steer_gain;
  j["beta_dlat"] = beta_dlat;
  j["beta_dlon"] = beta_dlon;
  j["episodes"] = json::array();
  for (const Episode& e : episodes) {
    j["episodes"].push_back({{"start_step", e.start_step},
                             {"amp", e.ridge.amp},
                             {"lat_c", e.ridge.lat_c},
                             {"lon_c0", e.ridge.lon_c0},
                             {"lon_drift", e.ridge.lon_drift},
                             {"sig_lat", e.ridge.sig_lat},
                             {"sig_lon", e.ridge.sig_lon}});
  }
  j["bumps"] = json::array();
  for (const BumpSpec& b : bumps)
    j["bumps"].push_back(
        {{"amp", b.amp}, {"lat_c", b.lat_c}, {"lon_c", b.lon_c}, {"sig", b.sig}});
  return j.dump(2) + "\n";
}

SteeringLaw SteeringLaw::from_json(const std::string& text) {
  json j = json::parse(text);
  SteeringLaw law;
  auto t = parse_ymdh(j.at("t0").get<std::string>());
  if (!t) throw IoError("steering law: bad t0");
  law.t0 = *t;
  law.base_gph = j.at("base_gph").get<double>();
  law.steer_gain = j.at("steer_gain").get<double>();
  law.beta_dlat = j.at("beta_dlat").get<double>();
  law.beta_dlon = j.at("beta_dlon").get<double>();
  for (const auto& e : j.at("episodes")) {
    Episode ep;
    ep.start_step = e.at("start_step").get<double>();
    ep.ridge.amp = e.at("amp").get<double>();
    ep.ridge.lat_c = e.at("lat_c").get<double>();
    ep.ridge.lon_c0 = e.at("lon_c0").get<double>();
    ep.ridge.lon_drift = e.at("lon_drift").get<double>();
    ep.ridge.sig_lat = e.at("sig_lat").get<double>();
    ep.ridge.sig_lon = e.at("sig_lon").get<double>();
    law.episodes.push_back(ep);
  }
  for (const auto& b : j.at("bumps")) {
    BumpSpec bump;
    bump.amp = b.at("amp").get<double>();
    bump.lat_c = b.at("lat_c").get<double>();
    bump.lon_c = b.at("lon_c").get<double>();
    bump.sig = b.at("sig").get<double>();
    law.bumps.push_back(bump);
  }
  return law;
}

namespace {

// Smooth rise-and-decay intensity profile.
double wind_profile(double frac, double peak) {
  double s = std::sin(M_PI * std::clamp(frac, 0.0, 1.0));
  return 12.0 + (peak - 12.0) * std::pow(s, 1.5);
}

struct StormSchedule {
  Time genesis;
  int steps;
};

}  // namespace

SynthWorld synth_world(const SynthConfig& cfg, uint64_t seed) {
  Rng root(seed);
  SynthWorld world;
  SteeringLaw& law = world.law;
  law.base_gph = cfg.base_gph;
  law.steer_gain = cfg.steer_gain;
  law.beta_dlat = cfg.beta_dlat;
  law.beta_dlon = cfg.beta_dlon;
  law.t0 = make_time(1979, 1, 1, 0);

  Rng bump_rng = root.split("bumps");
  for (int b = 0; b < cfg.bump_count; ++b) {
    BumpSpec bump;
    bump.amp = cfg.noise_level * 160.0 * bump_rng.uniform(0.10, 0.30);
    bump.lat_c = bump_rng.uniform(8.0, 40.0);
    bump.lon_c = bump_rng.uniform(110.0, 195.0);
    bump.sig = bump_rng.uniform(2.5, 5.0);
    if (cfg.noise_level == 0.0) bump.amp = 0.0;
    law.bumps.push_back(bump);
  }

  // Storm schedule: one ridge episode per storm; same-year storms are
  // separated by months so episodes never overlap.
  struct SplitPlan {
    int count;
    int year_lo, year_hi;
    const char* tag;
  };
  const SplitPlan plans[] = {{cfg.train_storms, 1979, 2008, "T"},
                             {cfg.val_storms, 2009, 2013, "V"},
                             {cfg.test_storms, 2014, 2018, "S"}};

  int storm_no = 0;
  for (const SplitPlan& plan : plans) {
    int span = plan.year_hi - plan.year_lo + 1;
    for (int i = 0; i < plan.count; ++i, ++storm_no) {
      Rng srng = root.split("storm" + std::to_string(storm_no));
      int year = plan.year_lo + (i % span);
      int round = i / span;                 // same-year collision avoidance
      int month = 5 + ((round * 3) % 7);    // May..Nov
      int day = srng.uniform_int(1, 28);
      int hour = 6 * srng.uniform_int(0, 3);
      Time genesis = make_time(year, month, day, hour);

      double glat = srng.uniform(8.0, 16.0);
      double glon = srng.uniform(128.0, 165.0);

      // Genesis sits about one sigma off the ridge flank where the
      // steering gradient is strong; drifting, per-storm ridges then turn
      // each track on the one-day scale (recurvature), which is what
      // separates steering-aware forecasts from pure persistence.
      SteeringLaw::Episode ep;
      ep.start_step = law.step_of(genesis);
      ep.ridge.amp = srng.uniform(120.0, 200.0);
      ep.ridge.sig_lat = srng.uniform(3.5, 5.5);
      ep.ridge.sig_lon = srng.uniform(7.0, 12.0);
      ep.ridge.lat_c = glat + srng.uniform(0.6, 1.6) * ep.ridge.sig_lat;
      ep.ridge.lon_c0 = glon + srng.uniform(-0.6, 1.2) * ep.ridge.sig_lon;
      ep.ridge.lon_drift = srng.uniform(-0.6, 0.3);
      law.episodes.push_back(ep);

      int steps = srng.uniform_int(cfg.min_steps, cfg.max_steps);
      double peak = srng.uniform(26.0, 55.0);

      TCTrack tr;
      char id[32];
      std::snprintf(id, sizeof id, "SYN%s%04d", plan.tag, storm_no + 1);
      tr.storm_id = id;
      tr.name = "SYNTH";

      double lat = glat, lon = glon;
      for (int k = 0; k < steps; ++k) {
        if (lat < 2.0 || lat > 48.0 || lon < 102.0 || lon > 208.0) break;
        TCObservation o;
        o.time = genesis.plus_steps(k);
        o.lat = lat;
        o.lon = lon;
        o.max_wind = wind_profile(static_cast<double>(k) / steps, peak);
        o.avg_wind = 0.8 * o.max_wind;
        o.pressure = 1008.0 - 1.1 * (o.max_wind - 10.0);
        o.intensity_code = intensity_code_for_wind(o.max_wind);
        tr.obs.push_back(o);
        auto next = law.advance(lat, lon, law.step_of(o.time), cfg.substeps);
        lat = next[0];
        lon = next[1];
      }
      world.tracks.push_back(std::move(tr));
    }
  }

  // Episodes must be sorted by start for ridge_at lookups.
  std::sort(law.episodes.begin(), law.episodes.end(),
            [](const auto& a, const auto& b) { return a.start_step < b.start_step; });
  return world;
}

std::string write_world(const std::string& dir, const SynthWorld& world, const SynthConfig& cfg) {
  fs::create_directories(fs::path(dir) / "gph");
  write_file((fs::path(dir) / "bst.txt").string(), serialize_bst(world.tracks));
  write_file((fs::path(dir) / "world.json").string(), world.law.to_json());

  int n = cfg.q + 2 * cfg.grid_margin;
  if (n % 2 == 0) ++n;  // keep a unique center cell
  int h = (n - 1) / 2;
  std::ostringstream manifest;
  for (const TCTrack& tr : world.tracks) {
    for (const TCObservation& o : tr.obs) {
      GphGrid g;
      g.time = o.time;
      g.resolution = cfg.resolution;
      g.n = n;
      double clat = snap_to_lattice(o.lat, cfg.resolution);
      double clon = snap_to_lattice(o.lon, cfg.resolution);
      g.lat0 = clat - h * cfg.resolution;
      g.lon0 = clon - h * cfg.resolution;
      g.values.resize(static_cast<size_t>(n) * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          g.values[static_cast<size_t>(i) * n + j] =
              world.law.gph(g.lat0 + i * cfg.resolution, g.lon0 + j * cfg.resolution, o.time);
      std::string rel = "gph/" + tr.storm_id + "_" + format_ymdh(o.time) + ".txt";
      write_gph_file((fs::path(dir) / rel).string(), g);
      manifest << format_ymdh(o.time) << " " << rel << "\n";
    }
  }
  std::string manifest_path = (fs::path(dir) / "gph_manifest.txt").string();
  write_file(manifest_path, manifest.str());
  return manifest_path;
}

}  // namespace tcf
