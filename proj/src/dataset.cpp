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

#include "tcf/dataset.hpp"

#include <cstring>
#include <fstream>

#include "tcf/rng.hpp"
#include "tcf/util.hpp"

namespace tcf {

namespace {

constexpr char kMagic[8] = {'T', 'C', 'F', 'D', 'S', '1', '\n', '\0'};

void put_bytes(std::ostream& os, const void* p, size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void put(std::ostream& os, T v) {
  put_bytes(os, &v, sizeof v);
}

void put_str(std::ostream& os, const std::string& s) {
  put<uint32_t>(os, static_cast<uint32_t>(s.size()));
  put_bytes(os, s.data(), s.size());
}

void put_tensor(std::ostream& os, const Tensor& t) {
  put<uint32_t>(os, static_cast<uint32_t>(t.rank()));
  for (int d : t.shape()) put<int32_t>(os, d);
  put_bytes(os, t.data(), sizeof(double) * static_cast<size_t>(t.size()));
}

void get_bytes(std::istream& is, void* p, size_t n, const char* what) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!is) throw IoError(std::string("dataset: truncated while reading ") + what);
}

template <typename T>
T get(std::istream& is, const char* what) {
  T v;
  get_bytes(is, &v, sizeof v, what);
  return v;
}

std::string get_str(std::istream& is, const char* what) {
  uint32_t n = get<uint32_t>(is, what);
  if (n > (1u << 20)) throw IoError(std::string("dataset: implausible string length in ") + what);
  std::string s(n, '\0');
  get_bytes(is, s.data(), n, what);
  return s;
}

Tensor get_tensor(std::istream& is, const char* what) {
  uint32_t rank = get<uint32_t>(is, what);
  if (rank > 8) throw IoError(std::string("dataset: implausible tensor rank in ") + what);
  std::vector<int> shape(rank);
  for (auto& d : shape) d = get<int32_t>(is, what);
  Tensor t(shape);
  get_bytes(is, t.data(), sizeof(double) * static_cast<size_t>(t.size()), what);
  return t;
}

}  // namespace

uint64_t Dataset::signature() const {
  std::string key = "m=" + std::to_string(options.m) + ";tau=" + std::to_string(options.tau) +
                    ";q=" + std::to_string(options.q) + ";res=" + format_sci(options.resolution);
  return fnv1a64(key);
}

std::vector<const Sample*> Dataset::split(Split s) const {
  std::vector<const Sample*> out;
  for (const Sample& smp : samples)
    if (smp.split == s) out.push_back(&smp);
  return out;
}

void save_dataset(const std::string& path, const Dataset& ds) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open dataset for writing: " + path);
  put_bytes(os, kMagic, sizeof kMagic);
  put<int32_t>(os, ds.options.m);
  put<int32_t>(os, ds.options.tau);
  put<int32_t>(os, ds.options.q);
  put<double>(os, ds.options.resolution);
  put<int32_t>(os, ds.options.min_track_obs);

  for (double v : ds.stats.feat_mean) put(os, v);
  for (double v : ds.stats.feat_scale) put(os, v);
  put(os, ds.stats.gph_mean);
  put(os, ds.stats.gph_scale);
  for (double v : ds.stats.delta_mean) put(os, v);
  for (double v : ds.stats.delta_scale) put(os, v);

  put<uint32_t>(os, static_cast<uint32_t>(ds.samples.size()));
  for (const Sample& s : ds.samples) {
    put_str(os, s.storm_id);
    put<int32_t>(os, s.genesis_year);
    put<int64_t>(os, s.origin_time.hours);
    put<double>(os, s.origin_lat);
    put<double>(os, s.origin_lon);
    put<int32_t>(os, s.intensity_code);
    put<double>(os, s.origin_wind);
    put<int32_t>(os, static_cast<int32_t>(s.split));
    put_tensor(os, s.features);
    put_tensor(os, s.gph);
    put_tensor(os, s.target_gph);
    put_tensor(os, s.target);
  }
  if (!os) throw IoError("write failed: " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open dataset: " + path);
  char magic[8];
  get_bytes(is, magic, sizeof magic, "magic");
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw IoError("not a dataset container: " + path);
  Dataset ds;
  ds.options.m = get<int32_t>(is, "m");
  ds.options.tau = get<int32_t>(is, "tau");
  ds.options.q = get<int32_t>(is, "q");
  ds.options.resolution = get<double>(is, "resolution");
  ds.options.min_track_obs = get<int32_t>(is, "min_track_obs");

  for (double& v : ds.stats.feat_mean) v = get<double>(is, "stats");
  for (double& v : ds.stats.feat_scale) v = get<double>(is, "stats");
  ds.stats.gph_mean = get<double>(is, "stats");
  ds.stats.gph_scale = get<double>(is, "stats");
  for (double& v : ds.stats.delta_mean) v = get<double>(is, "stats");
  for (double& v : ds.stats.delta_scale) v = get<double>(is, "stats");

  uint32_t n = get<uint32_t>(is, "sample count");
  ds.samples.reserve(n);
  for (uint32_t i = 0; i < n; ++i) {
    Sample s;
    s.storm_id = get_str(is, "storm id");
    s.genesis_year = get<int32_t>(is, "genesis year");
    s.origin_time = Time(get<int64_t>(is, "origin time"));
    s.origin_lat = get<double>(is, "origin lat");
    s.origin_lon = get<double>(is, "origin lon");
    s.intensity_code = get<int32_t>(is, "intensity");
    s.origin_wind = get<double>(is, "origin wind");
    s.split = static_cast<Split>(get<int32_t>(is, "split"));
    s.features = get_tensor(is, "features");
    s.gph = get_tensor(is, "gph");
    s.target_gph = get_tensor(is, "target gph");
    s.target = get_tensor(is, "target");
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

}  // namespace tcf
