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

#include "tcf/model.hpp"

#include <cstdio>
#include <sstream>

#include "tcf/util.hpp"

namespace tcf {

Ablation ablation_from_string(const std::string& s) {
  if (s == "full" || s.empty()) return Ablation::full;
  if (s == "tc_only") return Ablation::tc_only;
  if (s == "pressure_only") return Ablation::pressure_only;
  throw InputError("unknown ablation '" + s + "' (full|tc_only|pressure_only)");
}

const char* ablation_name(Ablation a) {
  switch (a) {
    case Ablation::full: return "full";
    case Ablation::tc_only: return "tc_only";
    case Ablation::pressure_only: return "pressure_only";
  }
  return "?";
}

Forecast make_forecast(const Tensor& deltas_deg, double origin_lat, double origin_lon,
                       Time origin_time) {
  Forecast f;
  f.deltas = deltas_deg;
  f.absolute = Tensor(deltas_deg.shape());
  for (int i = 0; i < deltas_deg.dim(0); ++i) {
    f.absolute.at(i, 0) = origin_lat + deltas_deg.at(i, 0);
    f.absolute.at(i, 1) = origin_lon + deltas_deg.at(i, 1);
  }
  f.origin_lat = origin_lat;
  f.origin_lon = origin_lon;
  f.origin_time = origin_time;
  return f;
}

std::string forecast_to_text(const Forecast& f) {
  std::ostringstream os;
  os << "# origin " << format_ymdh(f.origin_time) << " " << format_double(f.origin_lat, 4) << " "
     << format_double(f.origin_lon, 4) << "\n";
  os << "lead_h\tlat\tlon\tdlat\tdlon\n";
  for (int i = 0; i < f.deltas.dim(0); ++i) {
    os << 6 * (i + 1) << "\t" << format_double(f.absolute.at(i, 0), 4) << "\t"
       << format_double(f.absolute.at(i, 1), 4) << "\t" << format_double(f.deltas.at(i, 0), 4)
       << "\t" << format_double(f.deltas.at(i, 1), 4) << "\n";
  }
  return os.str();
}

DbfNet DbfNet::init(const ModelConfig& cfg, const NormStats& stats, uint64_t seed) {
  DbfNet net;
  net.cfg = cfg;
  net.stats = stats;
  Rng rng(seed);
  init_tc_encoder(net.params, kFeatureCount, cfg.hidden, rng);
  init_pressure_encoder(net.params, cfg.q, cfg.d_gph, rng);
  init_pressure_decoder(net.params, cfg.q, rng);
  init_fusion_decoder(net.params, cfg.hidden, cfg.d_gph, cfg.tau, rng);
  return net;
}

ForwardIds forward_track(Graph& g, DbfNet& net, const Sample& sample, Ablation ablation) {
  const ModelConfig& cfg = net.cfg;
  ForwardIds out;

  LstmState init1{-1, -1}, init2{-1, -1};
  Graph::Id e_tc;
  if (ablation == Ablation::pressure_only) {
    e_tc = g.input(Tensor({cfg.hidden}));
    init1 = {g.input(Tensor({cfg.hidden})), g.input(Tensor({cfg.hidden}))};
    init2 = {g.input(Tensor({cfg.hidden})), g.input(Tensor({cfg.hidden}))};
  } else {
    Graph::Id features = g.input(net.stats.normalize_features(sample.features));
    out.enc = encode_tc(g, net.params, features, cfg.hidden);
    e_tc = out.enc.e_tc;
    init1 = out.enc.final1;
    init2 = out.enc.final2;
  }

  if (ablation == Ablation::tc_only) {
    out.e_gph = g.input(Tensor({cfg.d_gph}));
  } else {
    Graph::Id gph = g.input(net.stats.normalize_gph(sample.gph));
    out.pcode = encode_gph(g, net.params, gph, cfg.leaky_slope);
    out.e_gph = out.pcode.e_gph;
    out.has_pressure = true;
  }

  out.roll = rollout(g, net.params, e_tc, out.e_gph, init1, init2, cfg.tau, cfg.hidden);
  return out;
}

Forecast predict(DbfNet& net, const Sample& sample, Ablation ablation) {
  Graph g;
  ForwardIds ids = forward_track(g, net, sample, ablation);
  Tensor deltas_deg = net.stats.denormalize_target(g.value(ids.roll.deltas));
  return make_forecast(deltas_deg, sample.origin_lat, sample.origin_lon, sample.origin_time);
}

bool is_weight_param(const std::string& name) {
  size_t dot = name.find_last_of('.');
  std::string leaf = dot == std::string::npos ? name : name.substr(dot + 1);
  return leaf == "k" || (!leaf.empty() && leaf[0] == 'W');
}

Graph::Id l2_penalty(Graph& g, ParamStore& ps) {
  std::vector<Graph::Id> terms;
  for (const std::string& name : ps.names())
    if (is_weight_param(name)) terms.push_back(g.sum_squares(g.param(ps, name)));
  if (terms.empty()) return g.input(Tensor::scalar(0.0));
  return g.add_n(terms);
}

}  // namespace tcf
