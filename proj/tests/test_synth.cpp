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

#include "tcf/synth.hpp"

using namespace tcf;

TEST_CASE("noise-free tracks match an independent high-resolution integrator") {
  SynthConfig cfg;
  cfg.train_storms = 2;
  cfg.val_storms = 0;
  cfg.test_storms = 0;
  cfg.noise_level = 0.0;
  cfg.substeps = 64;
  SynthWorld world = synth_world(cfg, 42);
  REQUIRE(world.tracks.size() == 2);

  for (const TCTrack& tr : world.tracks) {
    REQUIRE(tr.obs.size() >= 17);
    for (size_t i = 0; i + 1 < tr.obs.size(); ++i) {
      const auto& a = tr.obs[i];
      const auto& b = tr.obs[i + 1];
      // reference: same analytic law, 4x finer RK4
      auto ref = world.law.advance(a.lat, a.lon, world.law.step_of(a.time), 256);
      CHECK(std::fabs(ref[0] - b.lat) < 1e-6);
      CHECK(std::fabs(ref[1] - b.lon) < 1e-6);
    }
  }
}

TEST_CASE("same seed gives bit-identical worlds") {
  SynthConfig cfg;
  cfg.train_storms = 3;
  cfg.val_storms = 1;
  cfg.test_storms = 1;
  cfg.noise_level = 0.4;
  SynthWorld a = synth_world(cfg, 7);
  SynthWorld b = synth_world(cfg, 7);
  REQUIRE(a.tracks.size() == b.tracks.size());
  for (size_t i = 0; i < a.tracks.size(); ++i) {
    REQUIRE(a.tracks[i].obs.size() == b.tracks[i].obs.size());
    for (size_t j = 0; j < a.tracks[i].obs.size(); ++j) {
      CHECK(a.tracks[i].obs[j].lat == b.tracks[i].obs[j].lat);
      CHECK(a.tracks[i].obs[j].lon == b.tracks[i].obs[j].lon);
      CHECK(a.tracks[i].obs[j].max_wind == b.tracks[i].obs[j].max_wind);
    }
  }
  CHECK(a.law.to_json() == b.law.to_json());
  SynthWorld c = synth_world(cfg, 8);
  CHECK(a.law.to_json() != c.law.to_json());
}

TEST_CASE("zero storms requested gives empty outputs") {
  SynthConfig cfg;
  cfg.train_storms = 0;
  cfg.val_storms = 0;
  cfg.test_storms = 0;
  SynthWorld world = synth_world(cfg, 1);
  CHECK(world.tracks.empty());
}

TEST_CASE("steering law serializes through json") {
  SynthConfig cfg;
  cfg.train_storms = 2;
  cfg.val_storms = 0;
  cfg.test_storms = 0;
  cfg.noise_level = 0.3;
  SynthWorld world = synth_world(cfg, 99);
  SteeringLaw law2 = SteeringLaw::from_json(world.law.to_json());
  CHECK(law2.to_json() == world.law.to_json());
  const auto& o = world.tracks[0].obs[3];
  CHECK(law2.gph(o.lat, o.lon, o.time) == doctest::Approx(world.law.gph(o.lat, o.lon, o.time)));
}

TEST_CASE("tracks stay inside the basin and carry 6 h cadence") {
  SynthConfig cfg;
  cfg.train_storms = 4;
  cfg.val_storms = 1;
  cfg.test_storms = 1;
  SynthWorld world = synth_world(cfg, 3);
  for (const auto& tr : world.tracks) {
    for (size_t i = 0; i < tr.obs.size(); ++i) {
      const auto& o = tr.obs[i];
      CHECK(o.lat >= 0.0);
      CHECK(o.lat <= 50.0);
      CHECK(o.lon >= 100.0);
      CHECK(o.lon <= 210.0);
      if (i > 0) CHECK(o.time - tr.obs[i - 1].time == 6);
    }
    // storms move: total displacement is nontrivial
    double total = std::fabs(tr.obs.back().lat - tr.obs.front().lat) +
                   std::fabs(tr.obs.back().lon - tr.obs.front().lon);
    CHECK(total > 2.0);
  }
}
