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

#include "tcf/gph.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

namespace tcf {

namespace fs = std::filesystem;

std::string serialize_gph(const GphGrid& g) {
  std::ostringstream os;
  char buf[64];
  os << format_ymdh(g.time) << " ";
  std::snprintf(buf, sizeof buf, "%.10g %.10g %.10g %d\n", g.lat0, g.lon0, g.resolution, g.n);
  os << buf;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      std::snprintf(buf, sizeof buf, "%.10g", g.at(i, j));
      os << (j ? " " : "") << buf;
    }
    os << "\n";
  }
  return os.str();
}

GphGrid parse_gph(const std::string& text, const std::string& origin_hint) {
  std::istringstream is(text);
  std::string ts;
  GphGrid g;
  if (!(is >> ts >> g.lat0 >> g.lon0 >> g.resolution >> g.n))
    throw IoError("gph grid " + origin_hint + ": malformed header");
  auto t = parse_ymdh(ts);
  if (!t) throw IoError("gph grid " + origin_hint + ": bad timestamp '" + ts + "'");
  if (g.n <= 0 || g.resolution <= 0.0)
    throw IoError("gph grid " + origin_hint + ": non-positive size or resolution");
  g.time = *t;
  g.values.resize(static_cast<size_t>(g.n) * g.n);
  for (auto& v : g.values) {
    if (!(is >> v))
      throw IoError("gph grid " + origin_hint + ": expected " + std::to_string(g.n * g.n) +
                    " values");
    if (!std::isfinite(v)) throw IoError("gph grid " + origin_hint + ": non-finite value");
  }
  return g;
}

void write_gph_file(const std::string& path, const GphGrid& g) {
  write_file(path, serialize_gph(g));
}

GphGrid read_gph_file(const std::string& path) { return parse_gph(read_file(path), path); }

double snap_to_lattice(double coord, double res) { return std::round(coord / res) * res; }

void check_crop_q(int q) {
  if (q < 1 || q % 2 == 0)
    throw InputError("crop size q must be odd and positive, got " + std::to_string(q));
}

FileGphSource::FileGphSource(const std::string& manifest_path) {
  dir_ = fs::path(manifest_path).parent_path().string();
  std::istringstream is(read_file(manifest_path));
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto tok = split_ws(t);
    if (tok.size() != 2)
      throw IoError(manifest_path + ":" + std::to_string(lineno) + ": expected 'TIME PATH'");
    auto time = parse_ymdh(tok[0]);
    if (!time)
      throw IoError(manifest_path + ":" + std::to_string(lineno) + ": bad timestamp " + tok[0]);
    Entry e;
    e.time = *time;
    e.path = tok[1];
    by_time_.emplace(time->hours, entries_.size());
    entries_.push_back(std::move(e));
  }
}

const GphGrid& FileGphSource::load(const Entry& e) const {
  if (!e.cached) {
    std::string full = dir_.empty() ? e.path : dir_ + "/" + e.path;
    e.cached = std::make_shared<GphGrid>(read_gph_file(full));
    if (e.cached->time != e.time)
      throw IoError("gph grid " + full + ": header time " + format_ymdh(e.cached->time) +
                    " disagrees with manifest time " + format_ymdh(e.time));
  }
  return *e.cached;
}

namespace {

std::string coverage_error(const char* kind, double lat, double lon, Time t, double lat_lo,
                           double lat_hi, double lon_lo, double lon_hi,
                           const std::string& detail) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s crop at %s centered (%.3f,%.3f) needs lat [%.3f,%.3f] lon [%.3f,%.3f]: %s",
                kind, format_ymdh(t).c_str(), lat, lon, lat_lo, lat_hi, lon_lo, lon_hi,
                detail.c_str());
  return buf;
}

}  // namespace

Tensor FileGphSource::crop(double lat, double lon, Time t, int q, double res) const {
  check_crop_q(q);
  int h = (q - 1) / 2;
  double clat = snap_to_lattice(lat, res);
  double clon = snap_to_lattice(lon, res);
  double lat_lo = clat - h * res, lat_hi = clat + h * res;
  double lon_lo = clon - h * res, lon_hi = clon + h * res;

  auto range = by_time_.equal_range(t.hours);
  if (range.first == range.second)
    throw IoError(coverage_error("gph", lat, lon, t, lat_lo, lat_hi, lon_lo, lon_hi,
                                 "no grid at this timestamp"));

  std::string best_detail = "no grid covers the window";
  for (auto it = range.first; it != range.second; ++it) {
    const GphGrid& g = load(entries_[it->second]);
    if (std::fabs(g.resolution - res) > 1e-9) {
      best_detail = "grid resolution " + format_sci(g.resolution) + " does not match requested " +
                    format_sci(res);
      continue;
    }
    int ci = static_cast<int>(std::llround((clat - g.lat0) / res));
    int cj = static_cast<int>(std::llround((clon - g.lon0) / res));
    if (ci - h < 0 || ci + h >= g.n || cj - h < 0 || cj + h >= g.n) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "grid covers lat [%.3f,%.3f] lon [%.3f,%.3f]", g.lat0,
                    g.lat_max(), g.lon0, g.lon_max());
      best_detail = buf;
      continue;
    }
    Tensor out({q, q});
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) out.at(i, j) = g.at(ci - h + i, cj - h + j);
    return out;
  }
  throw IoError(coverage_error("gph", lat, lon, t, lat_lo, lat_hi, lon_lo, lon_hi, best_detail));
}

Tensor AnalyticGphSource::crop(double lat, double lon, Time t, int q, double res) const {
  check_crop_q(q);
  int h = (q - 1) / 2;
  double clat = snap_to_lattice(lat, res);
  double clon = snap_to_lattice(lon, res);
  Tensor out({q, q});
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      out.at(i, j) = field_(clat + (i - h) * res, clon + (j - h) * res, t);
  return out;
}

}  // namespace tcf
