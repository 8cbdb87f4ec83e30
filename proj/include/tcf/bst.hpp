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

#ifndef TCF_BST_HPP
#define TCF_BST_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tcf {

/// UTC instant at whole-hour granularity (hours since the Unix epoch;
/// negative for pre-1970 storms).
struct Time {
  int64_t hours = 0;

  Time() = default;
  explicit Time(int64_t h) : hours(h) {}

  Time plus_hours(int64_t h) const { return Time(hours + h); }
  Time plus_steps(int64_t steps) const { return Time(hours + 6 * steps); }
  int64_t operator-(Time other) const { return hours - other.hours; }
  auto operator<=>(const Time&) const = default;
};

Time make_time(int year, int month, int day, int hour);
/// Parses "YYYYMMDDHH"; rejects malformed digits and invalid civil dates.
std::optional<Time> parse_ymdh(const std::string& s);
std::string format_ymdh(Time t);
/// "MMDDHH", the initial-time key used in per-storm case tables.
std::string format_mmddhh(Time t);
int year_of(Time t);

/// One best-track record. Latitude/longitude in degrees, pressure in hPa,
/// winds in m/s.
struct TCObservation {
  Time time;
  int intensity_code = 0;
  double lat = 0.0;
  double lon = 0.0;
  double pressure = 0.0;
  double max_wind = 0.0;
  double avg_wind = 0.0;
};

struct TCTrack {
  std::string storm_id;
  std::string name;
  std::vector<TCObservation> obs;

  int genesis_year() const { return obs.empty() ? 0 : year_of(obs.front().time); }
  /// Index of the observation at time t, or -1.
  int index_at(Time t) const;
};

struct ParseIssue {
  int line = 0;
  std::string message;
};

struct BstParseReport {
  std::vector<ParseIssue> issues;
  int lines = 0;
  int headers = 0;
  int records_ok = 0;
  int records_rejected = 0;
};

// CMA best-track text layout: a "66666" header line introduces each storm
// (second token is the storm id; the first purely alphabetic token after
// it, if any, is the name), followed by one record per line:
//   YYYYMMDDHH I LAT LON PRES WND OWD
// with LAT/LON in 0.1 degree units. Malformed lines are reported with
// their line number and skipped; parsing continues.
std::vector<TCTrack> parse_bst(std::istream& in, BstParseReport& report);
std::vector<TCTrack> parse_bst_text(const std::string& text, BstParseReport& report);

/// Canonical text form; parse -> serialize -> parse is the identity on
/// retained records (positions quantized to 0.1 degrees by the format).
std::string serialize_bst(const std::vector<TCTrack>& tracks);

/// Keeps tracks with at least min_obs observations (life cycle filter).
std::vector<TCTrack> filter_tracks(std::vector<TCTrack> tracks, int min_obs = 17,
                                   int* dropped = nullptr);

/// CMA intensity code -> label (TD/TS/STS/TY/STY/SuperTY). Codes outside
/// 1..6 fall back to a wind-speed threshold mapping.
std::string intensity_label(int code, double max_wind_ms);
int intensity_code_for_wind(double max_wind_ms);

// WNP basin bounds used for record validation.
inline constexpr double kLatMin = 0.0, kLatMax = 50.0;
inline constexpr double kLonMin = 100.0, kLonMax = 210.0;

}  // namespace tcf

#endif  // TCF_BST_HPP
