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

#include "tcf/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tcf/graph.hpp"
#include "tcf/rng.hpp"
#include "tcf/util.hpp"

namespace tcf {

Forecast extrapolate(const TCTrack& track, int t, int tau) {
  if (t < 1 || t >= static_cast<int>(track.obs.size()))
    throw InputError("extrapolate: need at least one observation before t");
  const auto& cur = track.obs[static_cast<size_t>(t)];
  const auto& prev = track.obs[static_cast<size_t>(t - 1)];
  Tensor deltas({tau, 2});
  for (int i = 1; i <= tau; ++i) {
    deltas.at(i - 1, 0) = (cur.lat - prev.lat) * i;
    deltas.at(i - 1, 1) = (cur.lon - prev.lon) * i;
  }
  return make_forecast(deltas, cur.lat, cur.lon, cur.time);
}

Forecast extrapolate_from_window(const Tensor& features, double origin_lat, double origin_lon,
                                 Time origin_time, int tau) {
  int last = features.dim(0) - 1;
  double dlat = features.at(last, 3);  // 6 h lat change at the origin row
  double dlon = features.at(last, 4);
  Tensor deltas({tau, 2});
  for (int i = 1; i <= tau; ++i) {
    deltas.at(i - 1, 0) = dlat * i;
    deltas.at(i - 1, 1) = dlon * i;
  }
  return make_forecast(deltas, origin_lat, origin_lon, origin_time);
}

namespace {

// History glimpse the factor formulas work from.
struct History {
  double lat, lon, wnd;
  double lat_l[5], lon_l[5], wnd_l[5];  // index k = value at t-k
};

constexpr double kHeadingEps = 1e-9;

std::vector<double> compute_factors(const History& h) {
  std::vector<double> f;
  f.reserve(kCliperFactorCount);
  double dlat[5], dlon[5], dwnd[5];
  for (int k = 1; k <= 4; ++k) {
    dlat[k] = h.lat - h.lat_l[k];
    dlon[k] = h.lon - h.lon_l[k];
    dwnd[k] = h.wnd - h.wnd_l[k];
  }
  double speed6 = std::hypot(dlat[1], dlon[1]);
  double speed12 = std::hypot(h.lat - h.lat_l[2], h.lon - h.lon_l[2]) / 2.0;
  double speed24 = std::hypot(dlat[4], dlon[4]) / 4.0;
  double r6 = speed6 + kHeadingEps;
  double r24 = std::hypot(dlat[4], dlon[4]) + kHeadingEps;

  f.push_back(h.lat);                    // 0
  f.push_back(h.lon);                    // 1
  f.push_back(h.wnd);                    // 2
  for (int k = 1; k <= 4; ++k) f.push_back(dlat[k]);   // 3-6
  for (int k = 1; k <= 4; ++k) f.push_back(dlon[k]);   // 7-10
  for (int k = 1; k <= 4; ++k) f.push_back(dwnd[k]);   // 11-14
  f.push_back(speed6);                   // 15
  f.push_back(speed12);                  // 16
  f.push_back(speed24);                  // 17
  f.push_back(dlon[1] / r6);             // 18 heading sin (6 h)
  f.push_back(dlat[1] / r6);             // 19 heading cos (6 h)
  f.push_back(dlon[4] / r24);            // 20 heading sin (24 h)
  f.push_back(dlat[4] / r24);            // 21 heading cos (24 h)
  f.push_back(h.lat * h.lat);            // 22
  f.push_back(h.lon * h.lon);            // 23
  f.push_back(h.wnd * h.wnd);            // 24
  f.push_back(h.lat * h.lon);            // 25
  f.push_back(h.lat * h.wnd);            // 26
  f.push_back(h.lon * h.wnd);            // 27
  f.push_back(dlat[1] * dlat[1]);        // 28
  f.push_back(dlon[1] * dlon[1]);        // 29
  f.push_back(dwnd[1] * dwnd[1]);        // 30
  f.push_back(dlat[1] * dlon[1]);        // 31
  f.push_back(dlat[1] * dwnd[1]);        // 32
  f.push_back(dlon[1] * dwnd[1]);        // 33
  f.push_back(h.lat * dlat[1]);          // 34
  f.push_back(h.lat * dlon[1]);          // 35
  f.push_back(h.lon * dlat[1]);          // 36
  f.push_back(h.lon * dlon[1]);          // 37
  f.push_back(h.wnd * dwnd[1]);          // 38
  f.push_back(dlat[4] * dlat[4]);        // 39
  f.push_back(dlon[4] * dlon[4]);        // 40
  f.push_back(dlat[4] * dlon[4]);        // 41
  f.push_back(h.lat * dlat[4]);          // 42
  f.push_back(h.lon * dlon[4]);          // 43
  f.push_back(speed6 * h.wnd);           // 44
  f.push_back(speed24 * h.wnd);          // 45
  return f;
}

}  // namespace

const std::vector<CliperFactorSpec>& cliper_factor_table() {
  static const std::vector<CliperFactorSpec> table = [] {
    std::vector<CliperFactorSpec> t;
    auto add = [&](const std::string& n, const std::string& fm) { t.push_back({n, fm}); };
    add("lat", "lat(t)");
    add("lon", "lon(t)");
    add("wnd", "max_wind(t)");
    for (int k = 1; k <= 4; ++k)
      add("dlat_" + std::to_string(6 * k) + "h", "lat(t) - lat(t-" + std::to_string(k) + ")");
    for (int k = 1; k <= 4; ++k)
      add("dlon_" + std::to_string(6 * k) + "h", "lon(t) - lon(t-" + std::to_string(k) + ")");
    for (int k = 1; k <= 4; ++k)
      add("dwnd_" + std::to_string(6 * k) + "h",
          "max_wind(t) - max_wind(t-" + std::to_string(k) + ")");
    add("speed_6h", "hypot(dlat_6h, dlon_6h)");
    add("speed_12h", "hypot(dlat_12h, dlon_12h)/2");
    add("speed_24h", "hypot(dlat_24h, dlon_24h)/4");
    add("heading_sin_6h", "dlon_6h / (speed_6h + 1e-9)");
    add("heading_cos_6h", "dlat_6h / (speed_6h + 1e-9)");
    add("heading_sin_24h", "dlon_24h / (4*speed_24h + 1e-9)");
    add("heading_cos_24h", "dlat_24h / (4*speed_24h + 1e-9)");
    const char* prods[] = {"lat*lat",       "lon*lon",       "wnd*wnd",       "lat*lon",
                           "lat*wnd",       "lon*wnd",       "dlat_6h^2",     "dlon_6h^2",
                           "dwnd_6h^2",     "dlat_6h*dlon_6h", "dlat_6h*dwnd_6h",
                           "dlon_6h*dwnd_6h", "lat*dlat_6h",  "lat*dlon_6h",  "lon*dlat_6h",
                           "lon*dlon_6h",   "wnd*dwnd_6h",   "dlat_24h^2",   "dlon_24h^2",
                           "dlat_24h*dlon_24h", "lat*dlat_24h", "lon*dlon_24h", "speed_6h*wnd",
                           "speed_24h*wnd"};
    for (const char* p : prods) add(std::string("prod_") + p, p);
    return t;
  }();
  return table;
}

Tensor cliper_factors(const TCTrack& track, int t) {
  if (t < 4 || t >= static_cast<int>(track.obs.size()))
    throw InputError("cliper factors: need 24 h of history (t >= 4)");
  History h;
  const auto& cur = track.obs[static_cast<size_t>(t)];
  h.lat = cur.lat;
  h.lon = cur.lon;
  h.wnd = cur.max_wind;
  for (int k = 1; k <= 4; ++k) {
    const auto& past = track.obs[static_cast<size_t>(t - k)];
    h.lat_l[k] = past.lat;
    h.lon_l[k] = past.lon;
    h.wnd_l[k] = past.max_wind;
  }
  return Tensor({kCliperFactorCount}, compute_factors(h));
}

Tensor cliper_factors_from_window(const Tensor& features) {
  int rows = features.dim(0);
  if (rows < 5)
    throw InputError("cliper factors: window must hold >= 5 rows (m >= 4), got " +
                     std::to_string(rows));
  History h;
  int last = rows - 1;
  h.lat = features.at(last, 0);
  h.lon = features.at(last, 1);
  h.wnd = features.at(last, 2);
  for (int k = 1; k <= 4; ++k) {
    h.lat_l[k] = features.at(last - k, 0);
    h.lon_l[k] = features.at(last - k, 1);
    h.wnd_l[k] = features.at(last - k, 2);
  }
  return Tensor({kCliperFactorCount}, compute_factors(h));
}

double pearson_r(const double* x, const double* y, int n) {
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

PearsonSelection pearson_select(const Tensor& factors, const Tensor& targets, int k) {
  int n = factors.dim(0);
  int nf = factors.dim(1);
  int nt = targets.dim(1);
  if (targets.dim(0) != n) throw InputError("pearson_select: row count mismatch");
  if (n < 3) throw InputError("pearson_select: need >= 3 samples");
  k = std::min(k, nf);

  PearsonSelection sel;
  sel.abs_r = Tensor({nf, nt});
  std::vector<bool> excluded(static_cast<size_t>(nf), false);
  std::vector<double> fcol(static_cast<size_t>(n)), tcol(static_cast<size_t>(n));
  for (int f = 0; f < nf; ++f) {
    double mean = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      fcol[static_cast<size_t>(i)] = factors.at(i, f);
      mean += fcol[static_cast<size_t>(i)];
    }
    mean /= n;
    for (int i = 0; i < n; ++i) {
      double d = fcol[static_cast<size_t>(i)] - mean;
      sq += d * d;
    }
    if (sq <= 0.0) {
      excluded[static_cast<size_t>(f)] = true;
      sel.warnings.push_back("factor '" + cliper_factor_table()[static_cast<size_t>(f)].name +
                             "' excluded: zero variance");
      continue;
    }
    for (int t = 0; t < nt; ++t) {
      for (int i = 0; i < n; ++i) tcol[static_cast<size_t>(i)] = targets.at(i, t);
      sel.abs_r.at(f, t) = std::fabs(pearson_r(fcol.data(), tcol.data(), n));
    }
  }

  // Per-target ranking, ties toward the lower index.
  std::vector<std::vector<int>> ranked(static_cast<size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    std::vector<int>& order = ranked[static_cast<size_t>(t)];
    for (int f = 0; f < nf; ++f)
      if (!excluded[static_cast<size_t>(f)]) order.push_back(f);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      double ra = sel.abs_r.at(a, t), rb = sel.abs_r.at(b, t);
      if (ra != rb) return ra > rb;
      return a < b;
    });
  }

  std::vector<bool> chosen(static_cast<size_t>(nf), false);
  for (size_t rank = 0; static_cast<int>(sel.indices.size()) < k; ++rank) {
    bool any = false;
    for (int t = 0; t < nt && static_cast<int>(sel.indices.size()) < k; ++t) {
      const auto& order = ranked[static_cast<size_t>(t)];
      if (rank >= order.size()) continue;
      any = true;
      int f = order[rank];
      if (!chosen[static_cast<size_t>(f)]) {
        chosen[static_cast<size_t>(f)] = true;
        sel.indices.push_back(f);
      }
    }
    if (!any) break;  // all rankings exhausted
  }
  return sel;
}

Tensor CliperModel::predict_deltas(const Tensor& factors46) const {
  int nk = static_cast<int>(selection.indices.size());
  Tensor x({nk});
  for (int i = 0; i < nk; ++i)
    x[i] = (factors46[selection.indices[static_cast<size_t>(i)]] - factor_mean[static_cast<size_t>(i)]) /
           factor_scale[static_cast<size_t>(i)];
  Graph g(false);
  ParamStore& ps = const_cast<ParamStore&>(params);
  Graph::Id in = g.input(x);
  Graph::Id h = g.tanh_(g.affine(g.param(ps, "bp.W1"), in, g.param(ps, "bp.b1")));
  Graph::Id out = g.affine(g.param(ps, "bp.W2"), h, g.param(ps, "bp.b2"));
  const Tensor& y = g.value(out);
  Tensor deltas({tau, 2});
  for (int i = 0; i < tau; ++i)
    for (int c = 0; c < 2; ++c) {
      size_t col = static_cast<size_t>(i * 2 + c);
      deltas.at(i, c) = y[static_cast<int>(col)] * target_scale[col] + target_mean[col];
    }
  return deltas;
}

Forecast CliperModel::predict(const Sample& sample) const {
  Tensor f = cliper_factors_from_window(sample.features);
  return make_forecast(predict_deltas(f), sample.origin_lat, sample.origin_lon,
                       sample.origin_time);
}

std::string CliperModel::manifest_text() const {
  std::ostringstream os;
  os << "# CLIPER-BP factor manifest: selected " << selection.indices.size() << " of "
     << kCliperFactorCount << " factors\n";
  os << "index\tname\tformula\tmax_abs_r\n";
  const auto& table = cliper_factor_table();
  for (int f : selection.indices) {
    double best = 0.0;
    for (int t = 0; t < selection.abs_r.dim(1); ++t)
      best = std::max(best, selection.abs_r.at(f, t));
    os << f << "\t" << table[static_cast<size_t>(f)].name << "\t"
       << table[static_cast<size_t>(f)].formula << "\t" << format_double(best, 4) << "\n";
  }
  for (const auto& w : selection.warnings) os << "# " << w << "\n";
  return os.str();
}

CliperModel cliper_bp_fit(const std::vector<const Sample*>& train, const CliperConfig& cfg) {
  if (train.empty()) throw InputError("cliper fit: empty train set");
  int n = static_cast<int>(train.size());
  int tau = train.front()->target.dim(0);
  int nt = tau * 2;

  Tensor factors({n, kCliperFactorCount});
  Tensor targets({n, nt});
  for (int i = 0; i < n; ++i) {
    Tensor f = cliper_factors_from_window(train[static_cast<size_t>(i)]->features);
    for (int j = 0; j < kCliperFactorCount; ++j) factors.at(i, j) = f[j];
    for (int s = 0; s < tau; ++s)
      for (int c = 0; c < 2; ++c)
        targets.at(i, s * 2 + c) = train[static_cast<size_t>(i)]->target.at(s, c);
  }

  CliperModel model;
  model.cfg = cfg;
  model.tau = tau;
  model.selection = pearson_select(factors, targets, cfg.k);
  int nk = static_cast<int>(model.selection.indices.size());

  // z-score the selected factor columns and the target columns
  model.factor_mean.assign(static_cast<size_t>(nk), 0.0);
  model.factor_scale.assign(static_cast<size_t>(nk), 1.0);
  for (int i = 0; i < nk; ++i) {
    int f = model.selection.indices[static_cast<size_t>(i)];
    double mean = 0.0, sq = 0.0;
    for (int r = 0; r < n; ++r) mean += factors.at(r, f);
    mean /= n;
    for (int r = 0; r < n; ++r) {
      double d = factors.at(r, f) - mean;
      sq += d * d;
    }
    double sd = std::sqrt(sq / n);
    model.factor_mean[static_cast<size_t>(i)] = mean;
    model.factor_scale[static_cast<size_t>(i)] = sd < 1e-12 ? 1.0 : sd;
  }
  model.target_mean.assign(static_cast<size_t>(nt), 0.0);
  model.target_scale.assign(static_cast<size_t>(nt), 1.0);
  for (int t = 0; t < nt; ++t) {
    double mean = 0.0, sq = 0.0;
    for (int r = 0; r < n; ++r) mean += targets.at(r, t);
    mean /= n;
    for (int r = 0; r < n; ++r) {
      double d = targets.at(r, t) - mean;
      sq += d * d;
    }
    double sd = std::sqrt(sq / n);
    model.target_mean[static_cast<size_t>(t)] = mean;
    model.target_scale[static_cast<size_t>(t)] = sd < 1e-12 ? 1.0 : sd;
  }

  Tensor xs({n, nk}), ys({n, nt});
  for (int r = 0; r < n; ++r) {
    for (int i = 0; i < nk; ++i)
      xs.at(r, i) = (factors.at(r, model.selection.indices[static_cast<size_t>(i)]) -
                     model.factor_mean[static_cast<size_t>(i)]) /
                    model.factor_scale[static_cast<size_t>(i)];
    for (int t = 0; t < nt; ++t)
      ys.at(r, t) = (targets.at(r, t) - model.target_mean[static_cast<size_t>(t)]) /
                    model.target_scale[static_cast<size_t>(t)];
  }

  Rng rng(cfg.seed);
  Rng wrng = rng.split("bp.init");
  double bound = 1.0 / std::sqrt(static_cast<double>(cfg.hidden));
  Tensor w1({cfg.hidden, nk});
  for (int i = 0; i < w1.size(); ++i) w1[i] = wrng.uniform(-bound, bound);
  model.params.add("bp.W1", std::move(w1));
  model.params.add("bp.b1", Tensor({cfg.hidden}));
  // zero output layer: an untrained (or zero-epoch) model predicts the
  // training-set mean displacement exactly
  model.params.add("bp.W2", Tensor({nt, cfg.hidden}));
  model.params.add("bp.b2", Tensor({nt}));

  // RMSProp on mean squared error
  std::vector<Tensor> cache;
  for (int i = 0; i < model.params.count(); ++i)
    cache.emplace_back(model.params.value(i).shape());

  std::vector<size_t> order(static_cast<size_t>(n));
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng erng = rng.split("bp.epoch" + std::to_string(epoch));
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[static_cast<size_t>(erng.uniform_int(0, static_cast<int>(i) - 1))]);
    double epoch_loss = 0.0;
    size_t done = 0;
    while (done < order.size()) {
      size_t batch = std::min(static_cast<size_t>(cfg.batch_size), order.size() - done);
      model.params.zero_grads();
      double batch_loss = 0.0;
      for (size_t b = 0; b < batch; ++b) {
        int r = static_cast<int>(order[done + b]);
        Graph g(false);
        Tensor x({nk}), y({nt});
        for (int i = 0; i < nk; ++i) x[i] = xs.at(r, i);
        for (int t = 0; t < nt; ++t) y[t] = ys.at(r, t);
        Graph::Id in = g.input(std::move(x));
        Graph::Id h = g.tanh_(g.affine(g.param(model.params, "bp.W1"), in,
                                       g.param(model.params, "bp.b1")));
        Graph::Id out = g.affine(g.param(model.params, "bp.W2"), h,
                                 g.param(model.params, "bp.b2"));
        Graph::Id loss = g.sum_squares(g.sub(out, g.input(std::move(y))));
        g.backward(loss);
        batch_loss += g.scalar(loss);
      }
      batch_loss /= static_cast<double>(batch);
      epoch_loss += batch_loss * static_cast<double>(batch);
      model.params.scale_grads(1.0 / static_cast<double>(batch));
      for (int i = 0; i < model.params.count(); ++i) {
        Tensor& v = cache[static_cast<size_t>(i)];
        Tensor& p = model.params.value(i);
        const Tensor& gr = model.params.grad(i);
        double lr = cfg.learning_rate / (1.0 + 9.0 * epoch / std::max(1, cfg.epochs));
        for (int j = 0; j < p.size(); ++j) {
          v[j] = cfg.rms_decay * v[j] + (1.0 - cfg.rms_decay) * gr[j] * gr[j];
          p[j] -= lr * gr[j] / (std::sqrt(v[j]) + cfg.rms_eps);
        }
      }
      done += batch;
    }
    epoch_loss /= static_cast<double>(n);
    if (!std::isfinite(epoch_loss)) throw InputError("cliper fit: loss diverged");
    model.loss_history.push_back(epoch_loss);
  }
  return model;
}

}  // namespace tcf
