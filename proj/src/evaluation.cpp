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

#include "tcf/evaluation.hpp"

#include <cmath>
#include <sstream>

#include "tcf/util.hpp"

namespace tcf {

namespace {
inline double deg2rad(double d) { return d * M_PI / 180.0; }
}  // namespace

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  double phi1 = deg2rad(lat1), phi2 = deg2rad(lat2);
  double dphi = 0.5 * (phi1 - phi2);
  double dlam = 0.5 * deg2rad(lon1 - lon2);
  double s = std::sin(dphi) * std::sin(dphi) +
             std::cos(phi1) * std::cos(phi2) * std::sin(dlam) * std::sin(dlam);
  s = std::min(1.0, std::max(0.0, s));
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(s));
}

double flat_approx_km(double dlat, double dlon) {
  return std::sqrt(dlat * dlat + dlon * dlon) * 110.0;
}

std::optional<double> skill_score(double e_a, double e_b) {
  if (e_a <= 0.0) return std::nullopt;
  return (e_a - e_b) / e_a * 100.0;
}

void EvalReport::add(const std::string& method, std::vector<HorizonStat> rows) {
  if (!stats.count(method)) methods.push_back(method);
  stats[method] = std::move(rows);
}

const std::vector<HorizonStat>* EvalReport::find(const std::string& method) const {
  auto it = stats.find(method);
  return it == stats.end() ? nullptr : &it->second;
}

std::vector<HorizonStat> mde_per_horizon(const std::vector<Forecast>& forecasts,
                                         const std::vector<const Sample*>& samples) {
  if (forecasts.size() != samples.size())
    throw InputError("mde_per_horizon: " + std::to_string(forecasts.size()) + " forecasts vs " +
                     std::to_string(samples.size()) + " samples");
  if (forecasts.empty()) return {};
  int tau = forecasts.front().deltas.dim(0);
  std::vector<HorizonStat> out(static_cast<size_t>(tau));
  for (int h = 0; h < tau; ++h) {
    out[static_cast<size_t>(h)].lead_hours = 6 * (h + 1);
  }
  for (size_t i = 0; i < forecasts.size(); ++i) {
    const Forecast& f = forecasts[i];
    const Sample& s = *samples[i];
    if (f.deltas.dim(0) != tau || s.target.dim(0) < tau)
      throw InputError("mde_per_horizon: inconsistent horizon count at sample " +
                       std::to_string(i));
    for (int h = 0; h < tau; ++h) {
      double truth_lat = s.origin_lat + s.target.at(h, 0);
      double truth_lon = s.origin_lon + s.target.at(h, 1);
      out[static_cast<size_t>(h)].mde_km +=
          haversine_km(f.absolute.at(h, 0), f.absolute.at(h, 1), truth_lat, truth_lon);
      ++out[static_cast<size_t>(h)].count;
    }
  }
  for (auto& st : out)
    if (st.count > 0) st.mde_km /= st.count;
  return out;
}

double mean_mde(const std::vector<HorizonStat>& stats) {
  if (stats.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& s : stats) acc += s.mde_km;
  return acc / static_cast<double>(stats.size());
}

std::string eval_report_to_tsv(const EvalReport& report) {
  std::ostringstream os;
  os << "method";
  const std::vector<HorizonStat>* first =
      report.methods.empty() ? nullptr : report.find(report.methods.front());
  if (first)
    for (const auto& h : *first) os << "\t" << h.lead_hours << "h";
  os << "\tcount\n";
  for (const std::string& m : report.methods) {
    const auto* rows = report.find(m);
    os << m;
    int count = 0;
    for (const auto& h : *rows) {
      os << "\t" << format_double(h.mde_km, 4);
      count = h.count;
    }
    os << "\t" << count << "\n";
  }
  return os.str();
}

EvalReport eval_report_from_tsv(const std::string& text) {
  std::istringstream is(text);
  std::string header;
  if (!std::getline(is, header)) throw IoError("eval report: empty");
  auto head = split_ws(header);
  if (head.size() < 2 || head.front() != "method" || head.back() != "count")
    throw IoError("eval report: bad header '" + header + "'");
  std::vector<int> leads;
  for (size_t i = 1; i + 1 < head.size(); ++i) {
    std::string h = head[i];
    if (h.empty() || h.back() != 'h') throw IoError("eval report: bad horizon '" + h + "'");
    leads.push_back(std::stoi(h.substr(0, h.size() - 1)));
  }
  EvalReport rep;
  std::string line;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    auto tok = split_ws(line);
    if (tok.size() != leads.size() + 2)
      throw IoError("eval report: row '" + line + "' does not match header");
    std::vector<HorizonStat> rows;
    int count = std::stoi(tok.back());
    for (size_t i = 0; i < leads.size(); ++i) {
      HorizonStat h;
      h.lead_hours = leads[i];
      h.mde_km = std::stod(tok[i + 1]);
      h.count = count;
      rows.push_back(h);
    }
    rep.add(tok[0], std::move(rows));
  }
  return rep;
}

CaseReport case_report(const std::string& storm_id, const std::vector<Forecast>& forecasts,
                       const std::vector<const Sample*>& samples) {
  CaseReport rep;
  rep.storm_id = storm_id;
  if (forecasts.size() != samples.size())
    throw InputError("case_report: forecast/sample count mismatch");
  if (forecasts.empty()) return rep;
  int tau = forecasts.front().deltas.dim(0);
  for (int h = 0; h < tau; ++h) rep.lead_hours.push_back(6 * (h + 1));
  rep.avg.assign(static_cast<size_t>(tau), 0.0);
  for (size_t i = 0; i < forecasts.size(); ++i) {
    const Forecast& f = forecasts[i];
    const Sample& s = *samples[i];
    CaseRow row;
    row.mmddhh = format_mmddhh(s.origin_time);
    row.intensity = intensity_label(s.intensity_code, s.origin_wind);
    for (int h = 0; h < tau; ++h) {
      double truth_lat = s.origin_lat + s.target.at(h, 0);
      double truth_lon = s.origin_lon + s.target.at(h, 1);
      double d = haversine_km(f.absolute.at(h, 0), f.absolute.at(h, 1), truth_lat, truth_lon);
      row.mde_km.push_back(d);
      rep.avg[static_cast<size_t>(h)] += d;
    }
    rep.rows.push_back(std::move(row));
  }
  for (double& v : rep.avg) v /= static_cast<double>(rep.rows.size());
  return rep;
}

std::string case_report_to_text(const CaseReport& report) {
  std::ostringstream os;
  os << "storm " << report.storm_id << "\n";
  os << "MMDDHH\tINT";
  for (int h : report.lead_hours) os << "\t" << h << "h";
  os << "\n";
  for (const CaseRow& r : report.rows) {
    os << r.mmddhh << "\t" << r.intensity;
    for (double v : r.mde_km) os << "\t" << format_double(v, 2);
    os << "\n";
  }
  os << "AVG\t";
  for (double v : report.avg) os << "\t" << format_double(v, 2);
  os << "\n";
  return os.str();
}

std::string polyline_text(const std::vector<const Sample*>& samples,
                          const std::vector<Forecast>& forecasts) {
  std::ostringstream os;
  os << "time\tlat\tlon\tsource\n";
  for (const Sample* s : samples) {
    os << format_ymdh(s->origin_time) << "\t" << format_double(s->origin_lat, 4) << "\t"
       << format_double(s->origin_lon, 4) << "\ttruth\n";
  }
  for (size_t i = 0; i < forecasts.size(); ++i) {
    const Forecast& f = forecasts[i];
    for (int h = 0; h < f.absolute.dim(0); ++h) {
      os << format_ymdh(Time(f.origin_time.hours + 6 * (h + 1))) << "\t"
         << format_double(f.absolute.at(h, 0), 4) << "\t" << format_double(f.absolute.at(h, 1), 4)
         << "\tforecast_" << format_mmddhh(f.origin_time) << "\n";
    }
  }
  return os.str();
}

}  // namespace tcf
