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

// Command-line pipeline: synth, ingest, train, evaluate, predict, report.
// Exit codes: 0 success, 1 computation failure, 2 input error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tcf/baselines.hpp"
#include "tcf/checkpoint.hpp"
#include "tcf/config.hpp"
#include "tcf/dataset.hpp"
#include "tcf/evaluation.hpp"
#include "tcf/kernels.hpp"
#include "tcf/synth.hpp"
#include "tcf/training.hpp"
#include "tcf/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tcf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitComputeError = 1;
constexpr int kExitInputError = 2;

/// Relative inputs fall back to $TCF_DATA_DIR when not found directly.
std::string resolve_input(const std::string& path) {
  if (path.empty() || fs::exists(path)) return path;
  if (const char* base = std::getenv("TCF_DATA_DIR")) {
    fs::path alt = fs::path(base) / path;
    if (fs::exists(alt)) return alt.string();
  }
  return path;
}

struct RunContext {
  std::string command;
  std::string out_dir;
  ConfigMap config;
  uint64_t seed = 1;
  std::map<std::string, std::string> input_hashes;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void note_input(const std::string& path) {
    if (!path.empty() && fs::exists(path)) input_hashes[path] = hash_file_hex(path);
  }
  std::string out_path(const std::string& name) {
    fs::create_directories(out_dir);
    outputs.push_back(name);
    return (fs::path(out_dir) / name).string();
  }
  void write_manifest() {
    double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json j;
    j["command"] = command;
    j["seed"] = seed;
    j["config"] = json::object();
    std::istringstream cfg(config.resolved_text());
    std::string line;
    while (std::getline(cfg, line)) {
      auto eq = line.find(" = ");
      if (eq != std::string::npos) j["config"][line.substr(0, eq)] = line.substr(eq + 3);
    }
    j["inputs"] = input_hashes;
    j["outputs"] = outputs;
    j["kernel_isa"] = kernels::isa_name(kernels::active_isa());
    j["wall_time_s"] = wall;
    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "manifest.json").string(), j.dump(2) + "\n");
  }
};

ConfigMap load_config(const std::string& path) {
  if (path.empty()) return ConfigMap{};
  return ConfigMap::from_file(resolve_input(path));
}

void apply_ablation_flag(ConfigMap& cfg, const std::string& ablation) {
  if (ablation.empty()) return;
  if (ablation == "tc_only")
    cfg.set("tc_only", "true");
  else if (ablation == "pressure_only")
    cfg.set("pressure_only", "true");
  else if (ablation == "no_gph_decoder")
    cfg.set("with_gph_decoder", "false");
  else
    throw InputError("unknown --ablation '" + ablation +
                     "' (tc_only|pressure_only|no_gph_decoder)");
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(RunContext& ctx) {
  SynthConfig scfg = ctx.config.to_synth_config();
  SynthWorld world = synth_world(scfg, ctx.seed);
  write_world(ctx.out_dir, world, scfg);
  ctx.outputs = {"bst.txt", "gph_manifest.txt", "world.json", "gph/"};
  int obs = 0;
  for (const auto& tr : world.tracks) obs += static_cast<int>(tr.obs.size());
  std::cout << "synth: " << world.tracks.size() << " storms, " << obs << " observations, "
            << world.law.episodes.size() << " ridge episodes -> " << ctx.out_dir << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// ingest

int cmd_ingest(RunContext& ctx, const std::string& bst_path, const std::string& gph_manifest) {
  std::string bst = resolve_input(bst_path);
  std::string manifest = resolve_input(gph_manifest);
  ctx.note_input(bst);
  ctx.note_input(manifest);

  BstParseReport parse_report;
  auto tracks = parse_bst_text(read_file(bst), parse_report);
  FileGphSource source(manifest);

  IngestOptions opt = ctx.config.to_ingest_options();
  IngestReport report;
  Dataset ds;
  ds.options = opt;
  ds.samples = make_samples(tracks, source, opt, report);
  if (ds.samples.empty()) {
    std::cerr << "ingest: no samples produced\n" << report.to_text();
    return kExitComputeError;
  }
  ds.stats = NormStats::fit(ds.samples);
  save_dataset(ctx.out_path("dataset.bin"), ds);

  std::ostringstream txt;
  txt << "bst: " << parse_report.records_ok << " records, " << parse_report.records_rejected
      << " rejected across " << parse_report.headers << " headers\n";
  for (const auto& issue : parse_report.issues)
    txt << "  line " << issue.line << ": " << issue.message << "\n";
  txt << report.to_text();
  write_file(ctx.out_path("ingest_report.txt"), txt.str());
  std::cout << txt.str();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

TrainConfig train_config_for(const ConfigMap& cm, const Dataset& ds, uint64_t seed) {
  TrainConfig cfg = cm.to_train_config();
  cfg.seed = seed;
  cfg.arch.m = ds.options.m;
  cfg.arch.tau = ds.options.tau;
  cfg.arch.q = ds.options.q;
  cfg.arch.resolution = ds.options.resolution;
  return cfg;
}

void append_metrics(const std::string& path, const std::vector<MetricRow>& rows) {
  std::ofstream os(path, std::ios::app);
  for (const auto& r : rows)
    os << r.stage << "\t" << r.epoch << "\t" << format_sci(r.train_loss) << "\t"
       << format_sci(r.val_metric) << "\n";
}

int cmd_train(RunContext& ctx, const std::string& data_path, const std::string& stage,
              const std::string& init_ckpt) {
  std::string data = resolve_input(data_path);
  ctx.note_input(data);
  Dataset ds = load_dataset(data);
  TrainConfig cfg = train_config_for(ctx.config, ds, ctx.seed);

  DbfNet net = [&]() {
    if (!init_ckpt.empty()) {
      Checkpoint ck = load_checkpoint(resolve_input(init_ckpt));
      if (ck.dataset_signature != ds.signature())
        throw InputError("checkpoint was built for a different dataset geometry (signature " +
                         std::to_string(ck.dataset_signature) + " vs " +
                         std::to_string(ds.signature()) + "); refusing to continue");
      ctx.note_input(resolve_input(init_ckpt));
      return ck.to_net();
    }
    return DbfNet::init(cfg.arch, ds.stats, cfg.seed);
  }();

  Trainer trainer(cfg, ds);
  std::string metrics_path = ctx.out_path("metrics.tsv");
  write_file(metrics_path, "stage\tepoch\ttrain_loss\tval_mde_km\n");

  bool diverged = false;
  std::vector<MetricRow> all_history;
  auto run_stage = [&](int n) {
    StageOutcome out;
    if (n == 1) out = trainer.run_stage1(net);
    if (n == 2) out = trainer.run_stage2(net);
    if (n == 3) out = trainer.run_stage3(net);
    if (!out.note.empty()) std::cout << "stage " << n << ": " << out.note << "\n";
    if (out.ran) {
      std::cout << "stage " << n << ": loss " << format_double(out.initial_loss, 6) << " -> "
                << format_double(out.final_loss, 6) << " over " << out.history.size()
                << " epochs\n";
      append_metrics(metrics_path, out.history);
      for (const auto& r : out.history) all_history.push_back(r);
      Checkpoint ck = Checkpoint::from_net(net, "stage" + std::to_string(n), ds.signature());
      ck.history = all_history;
      save_checkpoint(ctx.out_path("ckpt_stage" + std::to_string(n) + ".bin"), ck);
    }
    diverged = diverged || out.diverged;
  };

  if (stage == "all") {
    run_stage(1);
    run_stage(2);
    run_stage(3);
  } else if (stage == "1" || stage == "2" || stage == "3") {
    run_stage(stage[0] - '0');
  } else {
    throw InputError("--stage must be one of 1|2|3|all, got '" + stage + "'");
  }

  Checkpoint final_ck = Checkpoint::from_net(net, "final", ds.signature());
  final_ck.history = all_history;
  save_checkpoint(ctx.out_path("ckpt_final.bin"), final_ck);
  if (diverged) {
    std::cerr << "train: a stage diverged; last finite checkpoint kept\n";
    return kExitComputeError;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "val") return Split::val;
  if (s == "test") return Split::test;
  throw InputError("--split must be train|val|test, got '" + s + "'");
}

int cmd_evaluate(RunContext& ctx, const std::string& ckpt_path, const std::string& data_path,
                 const std::vector<std::string>& baselines, const std::string& split_name_s,
                 const std::string& ablation, const std::string& horizons_csv) {
  std::string ckpt_file = resolve_input(ckpt_path);
  std::string data = resolve_input(data_path);
  ctx.note_input(ckpt_file);
  ctx.note_input(data);

  Checkpoint ck = load_checkpoint(ckpt_file);
  Dataset ds = load_dataset(data);
  if (ck.dataset_signature != ds.signature())
    throw InputError(
        "checkpoint/data mismatch: the checkpoint was trained on a dataset with a different "
        "window geometry (m,tau,q,resolution); re-ingest or pick the matching checkpoint");

  DbfNet net = ck.to_net();
  Ablation abl = Ablation::full;
  if (ablation == "tc_only") abl = Ablation::tc_only;
  else if (ablation == "pressure_only") abl = Ablation::pressure_only;
  else if (ablation == "no_gph_decoder" || ablation.empty()) abl = Ablation::full;
  else throw InputError("unknown --ablation '" + ablation + "'");

  Split split = split_from_string(split_name_s);
  auto samples = ds.split(split);
  if (samples.empty()) {
    std::cerr << "evaluate: no samples in split '" << split_name_s << "'\n";
    return kExitComputeError;
  }

  std::vector<Forecast> model_fc;
  model_fc.reserve(samples.size());
  for (const Sample* s : samples) model_fc.push_back(predict(net, *s, abl));

  EvalReport report;
  report.add("model", mde_per_horizon(model_fc, samples));

  for (const std::string& b : baselines) {
    std::vector<Forecast> fc;
    if (b == "extrapolation") {
      for (const Sample* s : samples)
        fc.push_back(extrapolate_from_window(s->features, s->origin_lat, s->origin_lon,
                                             s->origin_time, ds.options.tau));
    } else if (b == "cliper") {
      CliperConfig ccfg;
      ccfg.seed = ctx.seed;
      CliperModel cliper = cliper_bp_fit(ds.split(Split::train), ccfg);
      write_file(ctx.out_path("cliper_factors.txt"), cliper.manifest_text());
      for (const Sample* s : samples) fc.push_back(cliper.predict(*s));
    } else {
      throw InputError("unknown --baseline '" + b + "' (extrapolation|cliper)");
    }
    report.add(b, mde_per_horizon(fc, samples));
  }

  // optional horizon filter
  if (!horizons_csv.empty()) {
    std::set<int> keep;
    std::istringstream is(horizons_csv);
    std::string tok;
    while (std::getline(is, tok, ',')) keep.insert(std::stoi(tok));
    for (auto& [name, rows] : report.stats) {
      std::vector<HorizonStat> filtered;
      for (const auto& h : rows)
        if (keep.count(h.lead_hours)) filtered.push_back(h);
      rows = std::move(filtered);
    }
  }

  // skill rows: model error improvement relative to each baseline (e_A)
  for (const std::string& b : baselines) {
    const auto* base_rows = report.find(b);
    const auto* model_rows = report.find("model");
    std::vector<HorizonStat> skill_rows;
    for (size_t i = 0; i < base_rows->size(); ++i) {
      auto s = skill_score((*base_rows)[i].mde_km, (*model_rows)[i].mde_km);
      HorizonStat hs;
      hs.lead_hours = (*base_rows)[i].lead_hours;
      hs.mde_km = s.value_or(std::numeric_limits<double>::quiet_NaN());
      hs.count = (*model_rows)[i].count;
      skill_rows.push_back(hs);
    }
    report.add("skill_vs_" + b, std::move(skill_rows));
  }

  write_file(ctx.out_path("eval_report.tsv"), eval_report_to_tsv(report));

  // per-storm case tables and plottable polylines
  std::map<std::string, std::vector<size_t>> by_storm;
  for (size_t i = 0; i < samples.size(); ++i) by_storm[samples[i]->storm_id].push_back(i);
  for (const auto& [storm, idxs] : by_storm) {
    std::vector<Forecast> fc;
    std::vector<const Sample*> smp;
    for (size_t i : idxs) {
      fc.push_back(model_fc[i]);
      smp.push_back(samples[i]);
    }
    write_file(ctx.out_path("case_" + storm + ".txt"),
               case_report_to_text(case_report(storm, fc, smp)));
    write_file(ctx.out_path("track_" + storm + ".tsv"), polyline_text(smp, fc));
  }

  std::cout << eval_report_to_tsv(report);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// predict

int cmd_predict(RunContext& ctx, const std::string& ckpt_path, const std::string& data_path,
                int index, const std::string& storm, const std::string& time_s,
                const std::string& ablation, bool dump_gph) {
  std::string ckpt_file = resolve_input(ckpt_path);
  std::string data = resolve_input(data_path);
  ctx.note_input(ckpt_file);
  ctx.note_input(data);
  Checkpoint ck = load_checkpoint(ckpt_file);
  Dataset ds = load_dataset(data);
  if (ck.dataset_signature != ds.signature())
    throw InputError("checkpoint/data mismatch (window geometry); refusing to predict");

  const Sample* chosen = nullptr;
  if (!storm.empty()) {
    auto t = parse_ymdh(time_s);
    if (!t) throw InputError("--time must be YYYYMMDDHH");
    for (const Sample& s : ds.samples)
      if (s.storm_id == storm && s.origin_time == *t) chosen = &s;
    if (!chosen)
      throw InputError("no sample for storm " + storm + " at " + time_s +
                       " (window near track edges has no sample)");
  } else {
    if (index < 0 || index >= static_cast<int>(ds.samples.size()))
      throw InputError("--index out of range [0," + std::to_string(ds.samples.size()) + ")");
    chosen = &ds.samples[static_cast<size_t>(index)];
  }

  DbfNet net = ck.to_net();
  Ablation abl = ablation.empty() ? Ablation::full : ablation_from_string(ablation);
  Forecast fc = predict(net, *chosen, abl);
  write_file(ctx.out_path("forecast.tsv"), forecast_to_text(fc));
  write_file(ctx.out_path("track.tsv"),
             polyline_text({chosen}, {fc}));

  if (dump_gph) {
    // predicted future height stack, one grid file per step, in the same
    // text format the ingest side reads
    Graph g;
    Graph::Id gph = g.input(net.stats.normalize_gph(chosen->gph));
    PressureCode code = encode_gph(g, net.params, gph, net.cfg.leaky_slope);
    Graph::Id decoded = decode_gph(g, net.params, code.f_gph, net.cfg.m + 1, net.cfg.q,
                                   net.cfg.leaky_slope);
    Tensor pred = net.stats.denormalize_gph(g.value(decoded));
    int q = net.cfg.q, h = (q - 1) / 2;
    double clat = snap_to_lattice(chosen->origin_lat, net.cfg.resolution);
    double clon = snap_to_lattice(chosen->origin_lon, net.cfg.resolution);
    for (int step = 0; step <= net.cfg.m; ++step) {
      GphGrid grid;
      grid.time = chosen->origin_time.plus_steps(step + 1);
      grid.resolution = net.cfg.resolution;
      grid.n = q;
      grid.lat0 = clat - h * net.cfg.resolution;
      grid.lon0 = clon - h * net.cfg.resolution;
      grid.values.assign(pred.data() + static_cast<size_t>(step) * q * q,
                         pred.data() + static_cast<size_t>(step + 1) * q * q);
      write_gph_file(ctx.out_path("gph_pred_" + format_ymdh(grid.time) + ".txt"), grid);
    }
  }
  std::cout << forecast_to_text(fc);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report

int cmd_report(RunContext& ctx, const std::string& eval_dir) {
  std::string dir = resolve_input(eval_dir);
  std::string tsv_path = (fs::path(dir) / "eval_report.tsv").string();
  ctx.note_input(tsv_path);
  EvalReport rep = eval_report_from_tsv(read_file(tsv_path));

  std::ostringstream os;
  os << "TC track forecast MDE (km) by lead time\n";
  os << "---------------------------------------\n";
  const auto* first = rep.methods.empty() ? nullptr : rep.find(rep.methods.front());
  os << "method              ";
  if (first)
    for (const auto& h : *first) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%8dh", h.lead_hours);
      os << buf;
    }
  os << "   n\n";
  for (const std::string& m : rep.methods) {
    char name[32];
    std::snprintf(name, sizeof name, "%-20s", m.c_str());
    os << name;
    const auto* rows = rep.find(m);
    int count = 0;
    bool is_skill = m.rfind("skill_vs_", 0) == 0;
    for (const auto& h : *rows) {
      char buf[16];
      std::snprintf(buf, sizeof buf, is_skill ? "%8.2f%%" : "%9.2f", h.mde_km);
      os << buf;
      count = h.count;
    }
    os << " " << count << "\n";
  }

  // attach any case tables found alongside
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.rfind("case_", 0) == 0 && name.find(".txt") != std::string::npos) {
      os << "\n" << read_file(entry.path().string());
    }
  }

  write_file(ctx.out_path("report.txt"), os.str());
  std::cout << os.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual-branch spatio-temporal fusion forecasting for tropical-cyclone tracks"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", bst_path, gph_manifest, data_path, ckpt_path;
  std::string stage = "all", ablation, split_name_s = "test", storm, time_s, eval_dir;
  std::string horizons;
  std::vector<std::string> baselines;
  std::vector<std::string> overrides;
  uint64_t seed = 1;
  bool seed_given = false;
  int index = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value config file");
    cmd->add_option("--seed", seed, "root seed for all randomness")
        ->each([&](const std::string&) { seed_given = true; });
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--set", overrides, "override a config key, e.g. --set hidden=32");
  };

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic pressure-steered world");
  add_common(synth);

  CLI::App* ingest = app.add_subcommand("ingest", "parse best-track + height grids into samples");
  add_common(ingest);
  ingest->add_option("--bst", bst_path, "best-track text file")->required();
  ingest->add_option("--gph", gph_manifest, "height-grid manifest file")->required();

  CLI::App* train = app.add_subcommand("train", "run the training stages");
  add_common(train);
  train->add_option("--data", data_path, "dataset container from ingest")->required();
  train->add_option("--stage", stage, "1|2|3|all");
  train->add_option("--ablation", ablation, "tc_only|pressure_only|no_gph_decoder");
  std::string init_ckpt;
  train->add_option("--init", init_ckpt, "checkpoint to continue from");

  CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate a checkpoint against a split");
  add_common(evaluate);
  evaluate->add_option("--checkpoint", ckpt_path, "trained checkpoint")->required();
  evaluate->add_option("--data", data_path, "dataset container")->required();
  evaluate->add_option("--baseline", baselines, "extrapolation|cliper (repeatable)");
  evaluate->add_option("--split", split_name_s, "train|val|test (default test)");
  evaluate->add_option("--ablation", ablation, "evaluate an ablated forward path");
  evaluate->add_option("--horizons", horizons, "comma list of lead hours to keep");

  CLI::App* predict_cmd = app.add_subcommand("predict", "emit one forecast");
  add_common(predict_cmd);
  predict_cmd->add_option("--checkpoint", ckpt_path, "trained checkpoint")->required();
  predict_cmd->add_option("--data", data_path, "dataset container")->required();
  predict_cmd->add_option("--index", index, "sample index");
  predict_cmd->add_option("--storm", storm, "storm id (with --time)");
  predict_cmd->add_option("--time", time_s, "initial time YYYYMMDDHH");
  predict_cmd->add_option("--ablation", ablation, "forward-path ablation");
  bool dump_gph = false;
  predict_cmd->add_flag("--dump-gph", dump_gph, "also write the predicted height-field stack");

  CLI::App* report_cmd = app.add_subcommand("report", "format evaluation outputs as tables");
  add_common(report_cmd);
  report_cmd->add_option("--eval", eval_dir, "directory produced by evaluate")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    RunContext ctx;
    ctx.out_dir = out_dir;
    ctx.config = load_config(config_path);
    for (const std::string& kv : overrides) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + kv + "'");
      ctx.config.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
    if (seed_given)
      ctx.config.set("seed", std::to_string(seed));
    else if (ctx.config.has("seed"))
      seed = ctx.config.to_train_config().seed;
    ctx.seed = seed;
    if (!config_path.empty()) ctx.note_input(resolve_input(config_path));

    int rc = kExitOk;
    if (synth->parsed()) {
      ctx.command = "synth";
      rc = cmd_synth(ctx);
    } else if (ingest->parsed()) {
      ctx.command = "ingest";
      rc = cmd_ingest(ctx, bst_path, gph_manifest);
    } else if (train->parsed()) {
      ctx.command = "train";
      apply_ablation_flag(ctx.config, ablation);
      rc = cmd_train(ctx, data_path, stage, init_ckpt);
    } else if (evaluate->parsed()) {
      ctx.command = "evaluate";
      rc = cmd_evaluate(ctx, ckpt_path, data_path, baselines, split_name_s, ablation, horizons);
    } else if (predict_cmd->parsed()) {
      ctx.command = "predict";
      rc = cmd_predict(ctx, ckpt_path, data_path, index, storm, time_s, ablation, dump_gph);
    } else if (report_cmd->parsed()) {
      ctx.command = "report";
      rc = cmd_report(ctx, eval_dir);
    }
    ctx.write_manifest();
    return rc;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const IoError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputeError;
  }
}
