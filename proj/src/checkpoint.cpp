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

#include "tcf/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "tcf/util.hpp"

namespace tcf {

namespace {

constexpr char kMagic[9] = "TCFCKPT1";

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_str(std::ostream& os, const std::string& s) {
  put<uint32_t>(os, static_cast<uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename T>
T get(std::istream& is, const char* what) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw IoError(std::string("checkpoint: truncated reading ") + what);
  return v;
}

std::string get_str(std::istream& is, const char* what) {
  uint32_t n = get<uint32_t>(is, what);
  if (n > (1u << 20)) throw IoError(std::string("checkpoint: implausible string in ") + what);
  std::string s(n, '\0');
  is.read(s.data(), n);
  if (!is) throw IoError(std::string("checkpoint: truncated reading ") + what);
  return s;
}

}  // namespace

Checkpoint Checkpoint::from_net(const DbfNet& net, const std::string& stage_tag,
                                uint64_t dataset_signature) {
  Checkpoint ck;
  ck.stage_tag = stage_tag;
  ck.dataset_signature = dataset_signature;
  ck.config = net.cfg;
  ck.stats = net.stats;
  for (int i = 0; i < net.params.count(); ++i) {
    ck.param_names.push_back(net.params.names()[static_cast<size_t>(i)]);
    ck.param_values.push_back(net.params.value(i));
  }
  return ck;
}

DbfNet Checkpoint::to_net() const {
  DbfNet net;
  net.cfg = config;
  net.stats = stats;
  for (size_t i = 0; i < param_names.size(); ++i)
    net.params.add(param_names[i], param_values[i]);
  return net;
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open checkpoint for writing: " + path);
  os.write(kMagic, 8);
  put_str(os, ck.stage_tag);
  put<uint64_t>(os, ck.dataset_signature);
  put<int32_t>(os, ck.config.m);
  put<int32_t>(os, ck.config.tau);
  put<int32_t>(os, ck.config.q);
  put<double>(os, ck.config.resolution);
  put<int32_t>(os, ck.config.hidden);
  put<int32_t>(os, ck.config.d_gph);
  put<double>(os, ck.config.leaky_slope);

  for (double v : ck.stats.feat_mean) put(os, v);
  for (double v : ck.stats.feat_scale) put(os, v);
  put(os, ck.stats.gph_mean);
  put(os, ck.stats.gph_scale);
  for (double v : ck.stats.delta_mean) put(os, v);
  for (double v : ck.stats.delta_scale) put(os, v);

  put<uint32_t>(os, static_cast<uint32_t>(ck.param_names.size()));
  for (size_t i = 0; i < ck.param_names.size(); ++i) {
    put_str(os, ck.param_names[i]);
    const Tensor& t = ck.param_values[i];
    put<uint32_t>(os, static_cast<uint32_t>(t.rank()));
    for (int d : t.shape()) put<int32_t>(os, d);
    os.write(reinterpret_cast<const char*>(t.data()),
             static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(t.size())));
  }

  put<uint32_t>(os, static_cast<uint32_t>(ck.history.size()));
  for (const MetricRow& r : ck.history) {
    put<int32_t>(os, r.stage);
    put<int32_t>(os, r.epoch);
    put<double>(os, r.train_loss);
    put<double>(os, r.val_metric);
  }
  if (!os) throw IoError("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw IoError("not a checkpoint file: " + path);
  Checkpoint ck;
  ck.stage_tag = get_str(is, "stage tag");
  ck.dataset_signature = get<uint64_t>(is, "dataset signature");
  ck.config.m = get<int32_t>(is, "m");
  ck.config.tau = get<int32_t>(is, "tau");
  ck.config.q = get<int32_t>(is, "q");
  ck.config.resolution = get<double>(is, "resolution");
  ck.config.hidden = get<int32_t>(is, "hidden");
  ck.config.d_gph = get<int32_t>(is, "d_gph");
  ck.config.leaky_slope = get<double>(is, "leaky_slope");

  for (double& v : ck.stats.feat_mean) v = get<double>(is, "stats");
  for (double& v : ck.stats.feat_scale) v = get<double>(is, "stats");
  ck.stats.gph_mean = get<double>(is, "stats");
  ck.stats.gph_scale = get<double>(is, "stats");
  for (double& v : ck.stats.delta_mean) v = get<double>(is, "stats");
  for (double& v : ck.stats.delta_scale) v = get<double>(is, "stats");

  uint32_t n = get<uint32_t>(is, "param count");
  for (uint32_t i = 0; i < n; ++i) {
    std::string name = get_str(is, "param name");
    uint32_t rank = get<uint32_t>(is, "param rank");
    if (rank > 8) throw IoError("checkpoint: implausible tensor rank");
    std::vector<int> shape(rank);
    for (auto& d : shape) d = get<int32_t>(is, "param dim");
    Tensor t(shape);
    is.read(reinterpret_cast<char*>(t.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(t.size())));
    if (!is) throw IoError("checkpoint: truncated parameter data");
    ck.param_names.push_back(std::move(name));
    ck.param_values.push_back(std::move(t));
  }

  uint32_t h = get<uint32_t>(is, "history count");
  for (uint32_t i = 0; i < h; ++i) {
    MetricRow r;
    r.stage = get<int32_t>(is, "history");
    r.epoch = get<int32_t>(is, "history");
    r.train_loss = get<double>(is, "history");
    r.val_metric = get<double>(is, "history");
    ck.history.push_back(r);
  }
  return ck;
}

}  // namespace tcf
