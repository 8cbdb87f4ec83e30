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

#include "tcf/baselines.hpp"
#include "tcf/evaluation.hpp"
#include "testutil.hpp"

using namespace tcf;

namespace {

TCTrack constant_velocity_track(int n, double dlat, double dlon) {
  TCTrack tr;
  tr.storm_id = "CV";
  Time t0 = make_time(1990, 8, 1, 0);
  for (int i = 0; i < n; ++i) {
    TCObservation o;
    o.time = t0.plus_steps(i);
    o.lat = 12.0 + dlat * i;
    o.lon = 150.0 + dlon * i;
    o.max_wind = 20.0;
    o.pressure = 1000;
    tr.obs.push_back(o);
  }
  return tr;
}

}  // namespace

TEST_CASE("extrapolation is exact on constant-velocity tracks") {
  TCTrack tr = constant_velocity_track(20, 0.23, -0.31);
  Forecast f = extrapolate(tr, 10, 4);
  for (int i = 0; i < 4; ++i) {
    const auto& truth = tr.obs[static_cast<size_t>(10 + i + 1)];
    double d = haversine_km(f.absolute.at(i, 0), f.absolute.at(i, 1), truth.lat, truth.lon);
    CHECK(d < 1e-6);
  }
}

TEST_CASE("stationary track extrapolates to the current position") {
  TCTrack tr = constant_velocity_track(12, 0.0, 0.0);
  Forecast f = extrapolate(tr, 6, 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(f.absolute.at(i, 0) == doctest::Approx(12.0));
    CHECK(f.absolute.at(i, 1) == doctest::Approx(150.0));
  }
}

TEST_CASE("extrapolation error grows with horizon on curved tracks") {
  SynthConfig scfg;
  scfg.train_storms = 2;
  scfg.val_storms = 0;
  scfg.test_storms = 0;
  SynthWorld world = synth_world(scfg, 21);
  const TCTrack& tr = world.tracks.front();
  double mde6 = 0, mde24 = 0;
  int count = 0;
  for (int t = 1; t + 4 < static_cast<int>(tr.obs.size()); ++t) {
    Forecast f = extrapolate(tr, t, 4);
    const auto& tr6 = tr.obs[static_cast<size_t>(t + 1)];
    const auto& tr24 = tr.obs[static_cast<size_t>(t + 4)];
    mde6 += haversine_km(f.absolute.at(0, 0), f.absolute.at(0, 1), tr6.lat, tr6.lon);
    mde24 += haversine_km(f.absolute.at(3, 0), f.absolute.at(3, 1), tr24.lat, tr24.lon);
    ++count;
  }
  CHECK(mde24 / count > mde6 / count);
}

TEST_CASE("insufficient history for extrapolation is an error") {
  TCTrack tr = constant_velocity_track(5, 0.1, 0.1);
  CHECK_THROWS_AS(extrapolate(tr, 0, 4), InputError);
}

TEST_CASE("factor table has 46 documented entries and correct arithmetic") {
  CHECK(cliper_factor_table().size() == kCliperFactorCount);

  // fixture: lat steps 12.5 -> 13.2 between consecutive rows
  TCTrack tr;
  Time t0 = make_time(1953, 6, 15, 6);
  const double lats[] = {12.5, 12.5, 12.5, 12.5, 13.2};
  for (int i = 0; i < 5; ++i) {
    TCObservation o;
    o.time = t0.plus_steps(i);
    o.lat = lats[i];
    o.lon = 111.6;
    o.max_wind = 10.0;
    tr.obs.push_back(o);
  }
  Tensor f = cliper_factors(tr, 4);
  CHECK(f[3] == doctest::Approx(0.7));       // 6 h lat change
  CHECK(f[0] == doctest::Approx(13.2));      // current lat
  CHECK(f[22] == doctest::Approx(13.2 * 13.2));

  // stationary storm: all difference factors vanish
  TCTrack st = constant_velocity_track(8, 0.0, 0.0);
  Tensor fs = cliper_factors(st, 5);
  for (int k = 3; k <= 14; ++k) CHECK(fs[k] == 0.0);

  // uniform lat shift moves absolute factors, leaves differences alone
  TCTrack shifted = st;
  for (auto& o : shifted.obs) o.lat += 2.0;
  Tensor fsh = cliper_factors(shifted, 5);
  CHECK(fsh[0] == doctest::Approx(fs[0] + 2.0));
  for (int k = 3; k <= 10; ++k) CHECK(fsh[k] == doctest::Approx(fs[k]));
}

TEST_CASE("window-derived factors match track-derived factors") {
  SynthConfig scfg;
  scfg.train_storms = 1;
  scfg.val_storms = 0;
  scfg.test_storms = 0;
  SynthWorld world = synth_world(scfg, 31);
  const TCTrack& tr = world.tracks.front();
  FeatureWindow w = build_feature_window(tr, 10, 4);
  Tensor a = cliper_factors(tr, 10);
  Tensor b = cliper_factors_from_window(w.values);
  for (int i = 0; i < kCliperFactorCount; ++i)
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("pearson r matches a direct covariance oracle to 1e-12") {
  Rng rng(7);
  int n = 200;
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[static_cast<size_t>(i)] = rng.normal(2.0, 3.0);
    y[static_cast<size_t>(i)] = 0.5 * x[static_cast<size_t>(i)] + rng.normal(0.0, 1.0);
  }
  // one-pass moment oracle, algebraically different route
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[static_cast<size_t>(i)];
    sy += y[static_cast<size_t>(i)];
    sxx += x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
    syy += y[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
    sxy += x[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
  }
  double oracle = (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  CHECK(pearson_r(x.data(), y.data(), n) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("pearson selection: exact factor ranks first, k caps, warnings") {
  Rng rng(13);
  int n = 60;
  Tensor factors({n, kCliperFactorCount});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < kCliperFactorCount; ++j) factors.at(i, j) = rng.normal();
  for (int i = 0; i < n; ++i) factors.at(i, 9) = 0.0;  // zero variance column
  Tensor targets({n, 2});
  for (int i = 0; i < n; ++i) {
    targets.at(i, 0) = factors.at(i, 7);  // exactly a factor
    targets.at(i, 1) = rng.normal();
  }
  PearsonSelection sel = pearson_select(factors, targets, 5);
  REQUIRE(sel.indices.size() == 5);
  CHECK(sel.indices[0] == 7);  // r = 1 on target 0, picked first
  CHECK(sel.abs_r.at(7, 0) == doctest::Approx(1.0));
  bool warned = false;
  for (const auto& w : sel.warnings)
    if (w.find("zero variance") != std::string::npos) warned = true;
  CHECK(warned);
  for (int idx : sel.indices) CHECK(idx != 9);

  PearsonSelection all = pearson_select(factors, targets, kCliperFactorCount);
  CHECK(all.indices.size() == kCliperFactorCount - 1);  // minus the excluded column
}

TEST_CASE("BP regressor drives an exactly linear relation to near zero") {
  // targets are a fixed linear map of two factors
  Rng rng(17);
  int n = 120;
  std::vector<Sample> storage(static_cast<size_t>(n));
  std::vector<const Sample*> train;
  for (int i = 0; i < n; ++i) {
    Sample& s = storage[static_cast<size_t>(i)];
    s.features = Tensor({5, kFeatureCount});
    double lat = rng.uniform(10, 30), lon = rng.uniform(120, 180), wnd = rng.uniform(15, 45);
    double vlat = rng.uniform(-0.5, 0.5), vlon = rng.uniform(-0.5, 0.5);
    for (int r = 0; r < 5; ++r) {
      s.features.at(r, 0) = lat - vlat * (4 - r);
      s.features.at(r, 1) = lon - vlon * (4 - r);
      s.features.at(r, 2) = wnd;
      s.features.at(r, 3) = vlat;
      s.features.at(r, 4) = vlon;
      s.features.at(r, 5) = 0.0;
    }
    s.target = Tensor({4, 2});
    for (int h = 0; h < 4; ++h) {
      s.target.at(h, 0) = vlat * (h + 1);  // linear in the factors
      s.target.at(h, 1) = vlon * (h + 1);
    }
    s.origin_lat = lat;
    s.origin_lon = lon;
    train.push_back(&s);
  }
  CliperConfig cfg;
  cfg.seed = 3;
  cfg.epochs = 200;
  CliperModel model = cliper_bp_fit(train, cfg);
  REQUIRE(!model.loss_history.empty());
  CHECK(model.loss_history.back() < 1e-3 * 8);  // per-sample squared error, 8 outputs

  CliperConfig zero = cfg;
  zero.epochs = 0;
  CliperModel bias_only = cliper_bp_fit(train, zero);
  Tensor pred = bias_only.predict_deltas(cliper_factors_from_window(storage[0].features));
  for (int h = 0; h < 4; ++h)
    for (int c = 0; c < 2; ++c)
      CHECK(pred.at(h, c) == doctest::Approx(bias_only.target_mean[static_cast<size_t>(h * 2 + c)]));
  CHECK(model.manifest_text().find("dlat_6h") != std::string::npos);
}

TEST_CASE("CLIPER-BP beats extrapolation at 24 h on a curved-track world") {
  SynthConfig scfg;
  scfg.train_storms = 10;
  scfg.val_storms = 0;
  scfg.test_storms = 3;
  scfg.q = 13;
  scfg.noise_level = 0.2;
  IngestOptions opt;
  opt.q = 13;
  Dataset ds = tcf::test::make_test_dataset(scfg, opt, 77);
  auto train = ds.split(Split::train);
  auto test = ds.split(Split::test);
  REQUIRE(train.size() > 50);
  REQUIRE(!test.empty());

  CliperConfig cfg;
  cfg.seed = 9;
  CliperModel model = cliper_bp_fit(train, cfg);

  std::vector<Forecast> cliper, extrap;
  for (const Sample* s : test) {
    cliper.push_back(model.predict(*s));
    extrap.push_back(extrapolate_from_window(s->features, s->origin_lat, s->origin_lon,
                                             s->origin_time, 4));
  }
  auto cl = mde_per_horizon(cliper, test);
  auto ex = mde_per_horizon(extrap, test);
  CAPTURE(cl[3].mde_km);
  CAPTURE(ex[3].mde_km);
  CHECK(cl[3].mde_km < ex[3].mde_km);
}
