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

#ifndef TCF_GPH_HPP
#define TCF_GPH_HPP

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tcf/bst.hpp"
#include "tcf/tensor.hpp"
#include "tcf/util.hpp"

namespace tcf {

// Gridded 500 hPa geopotential height, one square grid per timestep.
//
// File layout (plain text):
//   YYYYMMDDHH lat0 lon0 resolution n
//   n rows of n space-separated gpm values; row i is latitude
//   lat0 + i*resolution, column j is longitude lon0 + j*resolution.
//
// A manifest file lists "YYYYMMDDHH relative/path" pairs, one per line;
// several grids may share a timestamp (e.g. one region per active storm).
// Users converting reanalysis archives only need to emit these two file
// kinds; everything downstream reads them through GphSource.
struct GphGrid {
  Time time;
  double lat0 = 0.0, lon0 = 0.0;
  double resolution = 0.5;
  int n = 0;
  std::vector<double> values;  // n*n, row-major

  double at(int i, int j) const { return values[static_cast<size_t>(i) * n + j]; }
  double lat_max() const { return lat0 + (n - 1) * resolution; }
  double lon_max() const { return lon0 + (n - 1) * resolution; }
};

std::string serialize_gph(const GphGrid& g);
GphGrid parse_gph(const std::string& text, const std::string& origin_hint = "");
void write_gph_file(const std::string& path, const GphGrid& g);
GphGrid read_gph_file(const std::string& path);

/// Snaps a coordinate to the grid lattice anchored at multiples of res.
double snap_to_lattice(double coord, double res);

/// Provider of storm-centered q x q crops.
class GphSource {
 public:
  virtual ~GphSource() = default;
  /// Crop centered on the source cell nearest (lat, lon); q must be odd.
  /// Throws IoError naming the missing extent if coverage is insufficient.
  virtual Tensor crop(double lat, double lon, Time t, int q, double res) const = 0;
};

/// Reads grids named by a manifest, lazily, with an in-memory cache.
class FileGphSource : public GphSource {
 public:
  explicit FileGphSource(const std::string& manifest_path);
  Tensor crop(double lat, double lon, Time t, int q, double res) const override;
  int grid_count() const { return static_cast<int>(entries_.size()); }

 private:
  struct Entry {
    Time time;
    std::string path;
    mutable std::shared_ptr<GphGrid> cached;
  };
  const GphGrid& load(const Entry& e) const;
  std::string dir_;
  std::vector<Entry> entries_;
  std::multimap<int64_t, size_t> by_time_;
};

/// Samples an analytic field directly; used by the synthetic-world tests.
class AnalyticGphSource : public GphSource {
 public:
  using Field = std::function<double(double lat, double lon, Time t)>;
  explicit AnalyticGphSource(Field f) : field_(std::move(f)) {}
  Tensor crop(double lat, double lon, Time t, int q, double res) const override;

 private:
  Field field_;
};

/// Shared crop-window arithmetic: returns the snapped center.
void check_crop_q(int q);

}  // namespace tcf

#endif  // TCF_GPH_HPP
