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

#ifndef TCF_BASELINES_HPP
#define TCF_BASELINES_HPP

#include <string>
#include <vector>

#include "tcf/dataset.hpp"
#include "tcf/model.hpp"

namespace tcf {

/// Constant-velocity continuation: delta per step i is i times the last
/// observed 6 h displacement.
Forecast extrapolate(const TCTrack& track, int t, int tau);
Forecast extrapolate_from_window(const Tensor& features, double origin_lat, double origin_lon,
                                 Time origin_time, int tau);

inline constexpr int kCliperFactorCount = 46;

struct CliperFactorSpec {
  std::string name;
  std::string formula;
};

/// The documented 46-entry climate-persistence factor table: current
/// position/wind, 6/12/18/24 h differences, translation speeds, heading
/// components, and pairwise products of the leading terms.
const std::vector<CliperFactorSpec>& cliper_factor_table();

/// Factors from a track at index t (requires 24 h of history: t >= 4).
Tensor cliper_factors(const TCTrack& track, int t);

/// Same factors computed from a feature window with m >= 4 (the window
/// rows carry the lat/lon/wind history the formulas need).
Tensor cliper_factors_from_window(const Tensor& features);

double pearson_r(const double* x, const double* y, int n);

struct PearsonSelection {
  std::vector<int> indices;  // |indices| == k, sorted by selection order
  Tensor abs_r;              // (factors, target columns), |r|; 0 where excluded
  std::vector<std::string> warnings;
};

/// Round-robin top-|r| per target column, union-capped to k. Ties and
/// ordering break toward the lower factor index. Zero-variance columns
/// are excluded with a warning.
PearsonSelection pearson_select(const Tensor& factors, const Tensor& targets, int k);

struct CliperConfig {
  int k = 20;
  int hidden = 64;
  int epochs = 200;
  double learning_rate = 0.01;
  int batch_size = 32;
  double rms_decay = 0.9;
  double rms_eps = 1e-8;
  uint64_t seed = 1;
};

/// Single-hidden-layer (tanh) regressor from k selected factors to the
/// tau x 2 displacement matrix, trained with squared error; the e_A
/// forecaster for skill scores.
struct CliperModel {
  CliperConfig cfg;
  int tau = 4;
  PearsonSelection selection;
  std::vector<double> factor_mean, factor_scale;  // per selected factor
  std::vector<double> target_mean, target_scale;  // per tau*2 column
  ParamStore params;
  std::vector<double> loss_history;

  Tensor predict_deltas(const Tensor& factors46) const;  // (tau, 2) degrees
  Forecast predict(const Sample& sample) const;

  /// Names, formulas and correlations of the selected factors.
  std::string manifest_text() const;
};

CliperModel cliper_bp_fit(const std::vector<const Sample*>& train, const CliperConfig& cfg);

}  // namespace tcf

#endif  // TCF_BASELINES_HPP
