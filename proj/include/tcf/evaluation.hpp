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

#ifndef TCF_EVALUATION_HPP
#define TCF_EVALUATION_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tcf/features.hpp"
#include "tcf/model.hpp"

namespace tcf {

inline constexpr double kEarthRadiusKm = 6371.0;

/// Great-circle distance (haversine form), the metric of record.
double haversine_km(double lat1, double lon1, double lat2, double lon2);

/// The flat small-displacement approximation sqrt(dlat^2+dlon^2)*110;
/// diagnostic only, it ignores meridian convergence.
double flat_approx_km(double dlat, double dlon);

/// (e_A - e_B)/e_A * 100; empty when e_A <= 0 (undefined).
std::optional<double> skill_score(double e_a, double e_b);

struct HorizonStat {
  int lead_hours = 0;
  double mde_km = 0.0;
  int count = 0;
};

struct EvalReport {
  // method name -> per-horizon stats, insertion-ordered by first use
  std::vector<std::string> methods;
  std::map<std::string, std::vector<HorizonStat>> stats;

  void add(const std::string& method, std::vector<HorizonStat> rows);
  const std::vector<HorizonStat>* find(const std::string& method) const;
};

/// Mean distance error per horizon of aligned forecast/truth pairs.
/// Truth positions are origin + target displacement of each sample.
std::vector<HorizonStat> mde_per_horizon(const std::vector<Forecast>& forecasts,
                                         const std::vector<const Sample*>& samples);

/// Mean across all horizons of per-horizon MDE (the scalar tracked during
/// training).
double mean_mde(const std::vector<HorizonStat>& stats);

std::string eval_report_to_tsv(const EvalReport& report);
EvalReport eval_report_from_tsv(const std::string& text);

/// Per-storm case table: one row per initial time (MMDDHH, intensity
/// label, MDE per horizon), closed by an AVG row of plain column means.
struct CaseRow {
  std::string mmddhh;
  std::string intensity;
  std::vector<double> mde_km;
};

struct CaseReport {
  std::string storm_id;
  std::vector<int> lead_hours;
  std::vector<CaseRow> rows;
  std::vector<double> avg;  // arithmetic mean of each column
};

CaseReport case_report(const std::string& storm_id, const std::vector<Forecast>& forecasts,
                       const std::vector<const Sample*>& samples);
std::string case_report_to_text(const CaseReport& report);

/// (time, lat, lon, source) rows for external plotting: the observed
/// track plus each forecast's points.
std::string polyline_text(const std::vector<const Sample*>& samples,
                          const std::vector<Forecast>& forecasts);

}  // namespace tcf

#endif  // TCF_EVALUATION_HPP
