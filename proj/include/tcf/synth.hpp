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

#ifndef TCF_SYNTH_HPP
#define TCF_SYNTH_HPP

#include <array>
#include <string>
#include <vector>

#include "tcf/bst.hpp"
#include "tcf/gph.hpp"

namespace tcf {

/// Gaussian 500 hPa ridge; the center longitude drifts linearly in time.
struct RidgeSpec {
  double amp = 160.0;        // gpm above background
  double lat_c = 30.0;
  double lon_c0 = 145.0;     // at its episode start
  double lon_drift = -0.1;   // degrees per 6 h step
  double sig_lat = 7.0;
  double sig_lon = 16.0;
};

struct BumpSpec {  // stationary small-scale structure ("noise")
  double amp = 0.0;
  double lat_c = 0.0, lon_c = 0.0;
  double sig = 4.0;
};

/// Analytic steering: storms advect along the geostrophic flow of a
/// Gaussian ridge (clockwise around the high) plus a constant beta drift.
/// Returned alongside generated worlds so tests can integrate ground
/// truth independently of the generator.
struct SteeringLaw {
  Time t0;                    // world reference; step s = (t - t0)/6h
  double base_gph = 5760.0;
  double steer_gain = 0.045;  // degrees/step per gpm/degree
  double beta_dlat = 0.10;    // degrees/step
  double beta_dlon = -0.05;
  struct Episode {
    double start_step = 0.0;  // active from here until the next episode
    RidgeSpec ridge;
  };
  std::vector<Episode> episodes;
  std::vector<BumpSpec> bumps;

  double step_of(Time t) const { return static_cast<double>(t.hours - t0.hours) / 6.0; }
  const RidgeSpec& ridge_at(double s) const;

  double gph(double lat, double lon, double s) const;
  double gph(double lat, double lon, Time t) const { return gph(lat, lon, step_of(t)); }

  /// (dlat, dlon) in degrees per 6 h step.
  std::array<double, 2> velocity(double lat, double lon, double s) const;

  /// One 6 h step with classic RK4 at the given substep count.
  std::array<double, 2> advance(double lat, double lon, double s, int substeps) const;

  std::string to_json() const;
  static SteeringLaw from_json(const std::string& text);
};

struct SynthConfig {
  int train_storms = 6;
  int val_storms = 1;
  int test_storms = 1;
  int min_steps = 28;        // observations per storm before basin-exit truncation
  int max_steps = 44;
  double noise_level = 0.0;  // scales bump amplitudes
  int bump_count = 4;
  int q = 51;
  double resolution = 0.5;
  int grid_margin = 8;       // extra cells per side in written grid files
  int substeps = 64;         // RK4 substeps per 6 h during generation
  double steer_gain = 0.045;
  double beta_dlat = 0.10;
  double beta_dlon = -0.05;
  double base_gph = 5760.0;
};

struct SynthWorld {
  std::vector<TCTrack> tracks;  // full precision (BST serialization quantizes)
  SteeringLaw law;
};

/// Deterministic in the seed, bit-for-bit.
SynthWorld synth_world(const SynthConfig& cfg, uint64_t seed);

/// Writes <dir>/bst.txt, <dir>/gph/... with <dir>/gph_manifest.txt, and
/// <dir>/world.json. Returns the manifest path.
std::string write_world(const std::string& dir, const SynthWorld& world, const SynthConfig& cfg);

}  // namespace tcf

#endif  // TCF_SYNTH_HPP
