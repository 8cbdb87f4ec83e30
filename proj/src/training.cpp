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

#include "tcf/training.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "tcf/evaluation.hpp"

namespace tcf {

void init_stage1_head(ParamStore& head, int hidden, int tau, Rng& rng) {
  double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  Tensor w({tau * 2, hidden});
  for (int i = 0; i < w.size(); ++i) w[i] = rng.uniform(-bound, bound);
  head.add("head.W", std::move(w));
  head.add("head.b", Tensor({tau * 2}));
}

Graph::Id build_stage1_loss(Graph& g, DbfNet& net, ParamStore& head, const Sample& sample) {
  Graph::Id features = g.input(net.stats.normalize_features(sample.features));
  EncoderOutput enc = encode_tc(g, net.params, features, net.cfg.hidden);
  Graph::Id w = g.param(head, "head.W");
  Graph::Id b = g.param(head, "head.b");
  Graph::Id pred = g.reshape(g.affine(w, enc.e_tc, b), {net.cfg.tau, 2});
  Graph::Id target = g.input(net.stats.normalize_target(sample.target));
  return g.l1_sum(pred, target);
}

Graph::Id build_stage2_loss(Graph& g, DbfNet& net, const Sample& sample) {
  Graph::Id gph = g.input(net.stats.normalize_gph(sample.gph));
  PressureCode code = encode_gph(g, net.params, gph, net.cfg.leaky_slope);
  Graph::Id pred = decode_gph(g, net.params, code.f_gph, net.cfg.m + 1, net.cfg.q,
                              net.cfg.leaky_slope);
  Graph::Id target = g.input(net.stats.normalize_gph(sample.target_gph));
  return gph_loss(g, pred, target);
}

Graph::Id build_stage3_loss(Graph& g, DbfNet& net, const Sample& sample, const TrainConfig& cfg) {
  ForwardIds fwd = forward_track(g, net, sample, cfg.ablation());
  Graph::Id target = g.input(net.stats.normalize_target(sample.target));
  Graph::Id loss = loc_loss(g, fwd.roll.deltas, target);
  if (cfg.alpha > 0.0 && fwd.has_pressure && cfg.with_gph_decoder) {
    Graph::Id pred = decode_gph(g, net.params, fwd.pcode.f_gph, net.cfg.m + 1, net.cfg.q,
                                net.cfg.leaky_slope);
    Graph::Id gtarget = g.input(net.stats.normalize_gph(sample.target_gph));
    loss = g.add(loss, g.scale(gph_loss(g, pred, gtarget), cfg.alpha));
  }
  if (cfg.beta > 0.0) loss = g.add(loss, g.scale(l2_penalty(g, net.params), cfg.beta));
  return loss;
}

namespace {

class RmsProp {
 public:
  RmsProp(double lr, double decay, double eps) : lr_(lr), decay_(decay), eps_(eps) {}

  void set_lr(double lr) { lr_ = lr; }

  void step(ParamStore& ps) {
    if (cache_.empty())
      for (int i = 0; i < ps.count(); ++i) cache_.emplace_back(ps.value(i).shape());
    for (int i = 0; i < ps.count(); ++i) {
      Tensor& v = cache_[static_cast<size_t>(i)];
      Tensor& p = ps.value(i);
      const Tensor& gr = ps.grad(i);
      for (int j = 0; j < p.size(); ++j) {
        v[j] = decay_ * v[j] + (1.0 - decay_) * gr[j] * gr[j];
        p[j] -= lr_ * gr[j] / (std::sqrt(v[j]) + eps_);
      }
    }
  }

 private:
  double lr_, decay_, eps_;
  std::vector<Tensor> cache_;
};

std::vector<Tensor> snapshot(const ParamStore& ps) {
  std::vector<Tensor> out;
  for (int i = 0; i < ps.count(); ++i) out.push_back(ps.value(i));
  return out;
}

void restore(ParamStore& ps, const std::vector<Tensor>& snap) {
  for (int i = 0; i < ps.count(); ++i) ps.value(i) = snap[static_cast<size_t>(i)];
}

struct EpochLoopConfig {
  int stage = 0;
  int epochs = 0;
  bool track_validation = false;
};

}  // namespace

Trainer::Trainer(TrainConfig cfg, const Dataset& data) : cfg_(std::move(cfg)), data_(data) {
  cfg_.validate();
  train_ = data_.split(Split::train);
  val_ = data_.split(Split::val);
  if (cfg_.arch.m != data_.options.m || cfg_.arch.tau != data_.options.tau ||
      cfg_.arch.q != data_.options.q)
    throw InputError("training: architecture window (m,tau,q) does not match the dataset");
}

namespace {

// Shared batched-epoch loop. loss_fn builds the per-sample graph and runs
// backward, accumulating into every store in `stores`.
StageOutcome run_epochs(const TrainConfig& cfg, const std::vector<const Sample*>& train,
                        const EpochLoopConfig& loop,
                        const std::vector<ParamStore*>& stores,
                        const std::function<double(const Sample&)>& loss_and_backward,
                        const std::function<double()>& validation_metric) {
  StageOutcome out;
  out.ran = true;
  if (train.empty()) throw InputError("training: empty train split");

  Rng stage_rng = Rng(cfg.seed).split("stage" + std::to_string(loop.stage));
  std::vector<RmsProp> opts(stores.size(), RmsProp(cfg.learning_rate, cfg.rms_decay, cfg.rms_eps));

  std::vector<std::vector<Tensor>> last_good;
  for (ParamStore* ps : stores) last_good.push_back(snapshot(*ps));

  double best_metric = std::numeric_limits<double>::infinity();
  std::vector<std::vector<Tensor>> best_params;
  int epochs_since_best = 0;

  std::vector<size_t> order(train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < loop.epochs; ++epoch) {
    double lr_epoch = cfg.learning_rate / (1.0 + cfg.lr_decay * epoch);
    for (auto& opt : opts) opt.set_lr(lr_epoch);
    Rng erng = stage_rng.split("epoch" + std::to_string(epoch));
    for (size_t i = order.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(erng.uniform_int(0, static_cast<int>(i) - 1));
      std::swap(order[i - 1], order[j]);
    }

    double epoch_loss = 0.0;
    size_t done = 0;
    while (done < order.size()) {
      size_t batch = std::min(static_cast<size_t>(cfg.batch_size), order.size() - done);
      for (ParamStore* ps : stores) ps->zero_grads();
      double batch_loss = 0.0;
      for (size_t k = 0; k < batch; ++k)
        batch_loss += loss_and_backward(*train[order[done + k]]);
      batch_loss /= static_cast<double>(batch);
      epoch_loss += batch_loss * static_cast<double>(batch);
      for (ParamStore* ps : stores) ps->scale_grads(1.0 / static_cast<double>(batch));
      if (cfg.clip_norm > 0.0) {
        double sq = 0.0;
        for (ParamStore* ps : stores) sq += ps->grad_sq_norm();
        double norm = std::sqrt(sq);
        if (norm > cfg.clip_norm)
          for (ParamStore* ps : stores) ps->scale_grads(cfg.clip_norm / norm);
      }
      for (size_t s = 0; s < stores.size(); ++s) opts[s].step(*stores[s]);
      done += batch;
    }
    epoch_loss /= static_cast<double>(order.size());

    if (!std::isfinite(epoch_loss)) {
      for (size_t s = 0; s < stores.size(); ++s) restore(*stores[s], last_good[s]);
      out.diverged = true;
      out.note = "loss diverged at stage " + std::to_string(loop.stage) + " epoch " +
                 std::to_string(epoch) + "; restored last finite parameters";
      break;
    }
    for (size_t s = 0; s < stores.size(); ++s) last_good[s] = snapshot(*stores[s]);

    MetricRow row;
    row.stage = loop.stage;
    row.epoch = epoch;
    row.train_loss = epoch_loss;
    if (epoch == 0) out.initial_loss = epoch_loss;
    out.final_loss = epoch_loss;

    if (loop.track_validation && validation_metric) {
      row.val_metric = validation_metric();
      if (row.val_metric < best_metric) {
        best_metric = row.val_metric;
        best_params.clear();
        for (ParamStore* ps : stores) best_params.push_back(snapshot(*ps));
        out.best_epoch = epoch;
        epochs_since_best = 0;
      } else if (++epochs_since_best >= cfg.patience && cfg.patience > 0) {
        out.history.push_back(row);
        out.note = "early stop at epoch " + std::to_string(epoch) + " (best " +
                   std::to_string(out.best_epoch) + ")";
        break;
      }
    }
    out.history.push_back(row);
  }

  if (!best_params.empty())
    for (size_t s = 0; s < stores.size(); ++s) restore(*stores[s], best_params[s]);
  return out;
}

}  // namespace

StageOutcome Trainer::run_stage1(DbfNet& net) {
  if (cfg_.pressure_only) {
    StageOutcome out;
    out.note = "stage 1 skipped (pressure_only ablation)";
    return out;
  }
  ParamStore head;
  Rng hrng = Rng(cfg_.seed).split("stage1.head");
  init_stage1_head(head, net.cfg.hidden, net.cfg.tau, hrng);
  EpochLoopConfig loop{1, cfg_.epochs_stage1, false};
  auto loss_fn = [&](const Sample& s) {
    Graph g(cfg_.check_finite);
    Graph::Id loss = build_stage1_loss(g, net, head, s);
    g.backward(loss);
    return g.scalar(loss);
  };
  return run_epochs(cfg_, train_, loop, {&net.params, &head}, loss_fn, nullptr);
}

StageOutcome Trainer::run_stage2(DbfNet& net) {
  if (cfg_.tc_only || !cfg_.with_gph_decoder) {
    StageOutcome out;
    out.note = cfg_.tc_only ? "stage 2 skipped (tc_only ablation)"
                            : "stage 2 skipped (height-field decoder disabled)";
    return out;
  }
  EpochLoopConfig loop{2, cfg_.epochs_stage2, false};
  auto loss_fn = [&](const Sample& s) {
    Graph g(cfg_.check_finite);
    Graph::Id loss = build_stage2_loss(g, net, s);
    g.backward(loss);
    return g.scalar(loss);
  };
  return run_epochs(cfg_, train_, loop, {&net.params}, loss_fn, nullptr);
}

StageOutcome Trainer::run_stage3(DbfNet& net) {
  EpochLoopConfig loop{3, cfg_.epochs_stage3, !val_.empty()};
  auto loss_fn = [&](const Sample& s) {
    Graph g(cfg_.check_finite);
    Graph::Id loss = build_stage3_loss(g, net, s, cfg_);
    g.backward(loss);
    return g.scalar(loss);
  };
  auto val_fn = [&]() {
    std::vector<Forecast> forecasts;
    forecasts.reserve(val_.size());
    for (const Sample* s : val_) forecasts.push_back(predict(net, *s, cfg_.ablation()));
    return mean_mde(mde_per_horizon(forecasts, val_));
  };
  return run_epochs(cfg_, train_, loop, {&net.params}, loss_fn, val_fn);
}

}  // namespace tcf
