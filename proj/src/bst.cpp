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

#include "tcf/bst.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tcf/util.hpp"

namespace tcf {

namespace {

using days = std::chrono::days;
using sys_days = std::chrono::sys_days;

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool parse_num(const std::string& s, double& out) {
  try {
    size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& s, int& out) {
  try {
    size_t pos = 0;
    out = std::stoi(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

}  // namespace

Time make_time(int year, int month, int day, int hour) {
  sys_days d = sys_days(std::chrono::year(year) / month / day);
  return Time(static_cast<int64_t>(d.time_since_epoch().count()) * 24 + hour);
}

std::optional<Time> parse_ymdh(const std::string& s) {
  if (s.size() != 10 || !all_digits(s)) return std::nullopt;
  int year = std::stoi(s.substr(0, 4));
  int month = std::stoi(s.substr(4, 2));
  int day = std::stoi(s.substr(6, 2));
  int hour = std::stoi(s.substr(8, 2));
  if (hour > 23) return std::nullopt;
  auto ymd = std::chrono::year(year) / month / day;
  if (!ymd.ok()) return std::nullopt;
  return make_time(year, month, day, hour);
}

namespace {
void civil_parts(Time t, int& year, int& month, int& day, int& hour) {
  int64_t h = t.hours;
  int64_t d = h >= 0 ? h / 24 : (h - 23) / 24;  // floor division
  hour = static_cast<int>(h - d * 24);
  auto ymd = std::chrono::year_month_day(sys_days(days(d)));
  year = static_cast<int>(ymd.year());
  month = static_cast<int>(static_cast<unsigned>(ymd.month()));
  day = static_cast<int>(static_cast<unsigned>(ymd.day()));
}
}  // namespace

std::string format_ymdh(Time t) {
  int y, m, d, h;
  civil_parts(t, y, m, d, h);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d%02d%02d%02d", y, m, d, h);
  return buf;
}

std::string format_mmddhh(Time t) {
  int y, m, d, h;
  civil_parts(t, y, m, d, h);
  char buf[12];
  std::snprintf(buf, sizeof buf, "%02d%02d%02d", m, d, h);
  return buf;
}

int year_of(Time t) {
  int y, m, d, h;
  civil_parts(t, y, m, d, h);
  return y;
}

int TCTrack::index_at(Time t) const {
  for (size_t i = 0; i < obs.size(); ++i)
    if (obs[i].time == t) return static_cast<int>(i);
  return -1;
}

std::vector<TCTrack> parse_bst(std::istream& in, BstParseReport& report) {
  std::vector<TCTrack> tracks;
  TCTrack* current = nullptr;
  std::string line;
  int lineno = 0;

  auto reject = [&](int ln, const std::string& msg) {
    report.issues.push_back({ln, msg});
    ++report.records_rejected;
  };

  while (std::getline(in, line)) {
    ++lineno;
    ++report.lines;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> tok = split_ws(t);

    if (tok[0] == "66666") {
      if (tok.size() < 2) {
        report.issues.push_back({lineno, "header without storm id"});
        current = nullptr;
        continue;
      }
      tracks.emplace_back();
      current = &tracks.back();
      current->storm_id = tok[1];
      for (size_t i = 2; i < tok.size(); ++i) {
        bool alpha = std::all_of(tok[i].begin(), tok[i].end(),
                                 [](unsigned char c) { return std::isalpha(c); });
        if (alpha && tok[i].size() > 1) {
          current->name = tok[i];
          break;
        }
      }
      ++report.headers;
      continue;
    }

    if (current == nullptr) {
      reject(lineno, "record before any 66666 header");
      continue;
    }
    if (tok.size() < 7) {
      reject(lineno, "expected 7 fields, got " + std::to_string(tok.size()));
      continue;
    }

    auto time = parse_ymdh(tok[0]);
    if (!time) {
      reject(lineno, "bad timestamp '" + tok[0] + "'");
      continue;
    }
    int code;
    double lat10, lon10, pres, wnd, owd;
    if (!parse_int(tok[1], code) || !parse_num(tok[2], lat10) || !parse_num(tok[3], lon10) ||
        !parse_num(tok[4], pres) || !parse_num(tok[5], wnd) || !parse_num(tok[6], owd)) {
      reject(lineno, "unparseable numeric field");
      continue;
    }

    TCObservation o;
    o.time = *time;
    o.intensity_code = code;
    o.lat = lat10 / 10.0;
    o.lon = lon10 / 10.0;
    o.pressure = pres;
    o.max_wind = wnd;
    o.avg_wind = owd;

    int64_t hour_of_day = ((o.time.hours % 24) + 24) % 24;
    if (hour_of_day % 6 != 0) {
      reject(lineno, "timestamp hour " + std::to_string(hour_of_day) + " not on 6 h cadence");
      continue;
    }
    if (o.lat < kLatMin || o.lat > kLatMax || o.lon < kLonMin || o.lon > kLonMax) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "position (%.1f,%.1f) outside basin", o.lat, o.lon);
      reject(lineno, buf);
      continue;
    }
    if (o.pressure <= 0.0 || o.max_wind < 0.0) {
      reject(lineno, "non-physical pressure/wind");
      continue;
    }
    if (!current->obs.empty()) {
      int64_t dh = o.time - current->obs.back().time;
      if (dh <= 0) {
        reject(lineno, "non-monotone timestamp " + tok[0]);
        continue;
      }
      if (dh != 6) {
        reject(lineno, "cadence gap of " + std::to_string(dh) + " h before " + tok[0]);
        continue;
      }
    }
    current->obs.push_back(o);
    ++report.records_ok;
  }
  return tracks;
}

std::vector<TCTrack> parse_bst_text(const std::string& text, BstParseReport& report) {
  std::istringstream is(text);
  return parse_bst(is, report);
}

std::string serialize_bst(const std::vector<TCTrack>& tracks) {
  std::ostringstream os;
  for (const TCTrack& tr : tracks) {
    os << "66666 " << tr.storm_id << " " << tr.obs.size();
    if (!tr.name.empty()) os << " " << tr.name;
    os << "\n";
    for (const TCObservation& o : tr.obs) {
      os << format_ymdh(o.time) << " " << o.intensity_code << " "
         << static_cast<long>(std::llround(o.lat * 10.0)) << " "
         << static_cast<long>(std::llround(o.lon * 10.0)) << " "
         << static_cast<long>(std::llround(o.pressure)) << " "
         << static_cast<long>(std::llround(o.max_wind)) << " "
         << static_cast<long>(std::llround(o.avg_wind)) << "\n";
    }
  }
  return os.str();
}

std::vector<TCTrack> filter_tracks(std::vector<TCTrack> tracks, int min_obs, int* dropped) {
  std::vector<TCTrack> kept;
  int n_dropped = 0;
  for (auto& tr : tracks) {
    if (static_cast<int>(tr.obs.size()) >= min_obs)
      kept.push_back(std::move(tr));
    else
      ++n_dropped;
  }
  if (dropped) *dropped = n_dropped;
  return kept;
}

int intensity_code_for_wind(double w) {
  if (w < 17.2) return 1;
  if (w < 24.5) return 2;
  if (w < 32.7) return 3;
  if (w < 41.5) return 4;
  if (w < 51.0) return 5;
  return 6;
}

std::string intensity_label(int code, double max_wind_ms) {
  static const char* labels[] = {"TD", "TS", "STS", "TY", "STY", "SuperTY"};
  if (code < 1 || code > 6) code = intensity_code_for_wind(max_wind_ms);
  return labels[code - 1];
}

}  // namespace tcf
