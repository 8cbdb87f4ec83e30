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

#ifndef TCF_TRAINING_HPP
#define TCF_TRAINING_HPP

#include "tcf/checkpoint.hpp"
#include "tcf/config.hpp"
#include "tcf/dataset.hpp"
#include "tcf/model.hpp"

namespace tcf {

// Single-sample loss graphs; these exact builders drive the training
// loops, so gradient tests on them cover the trained path.

/// Stage-1 pretraining head: one fc layer mapping the TC code straight to
/// the tau x 2 displacement matrix. Lives in its own store and is
/// discarded after the stage.
void init_stage1_head(ParamStore& head, int hidden, int tau, Rng& rng);
Graph::Id build_stage1_loss(Graph& g, DbfNet& net, ParamStore& head, const Sample& sample);

/// Height-field reconstruction loss of the pressure encoder-decoder.
Graph::Id build_stage2_loss(Graph& g, DbfNet& net, const Sample& sample);

/// Composite loss: displacement + alpha * height-field + beta * weights.
/// Terms with zero coefficient are not built, so alpha=beta=0 equals the
/// displacement loss exactly.
Graph::Id build_stage3_loss(Graph& g, DbfNet& net, const Sample& sample, const TrainConfig& cfg);

struct StageOutcome {
  bool ran = false;
  bool diverged = false;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  int best_epoch = -1;
  std::vector<MetricRow> history;
  std::string note;
};

class Trainer {
 public:
  Trainer(TrainConfig cfg, const Dataset& data);

  /// Stages mutate the net in place. Skipped stages (per ablation flags)
  /// return ran=false.
  StageOutcome run_stage1(DbfNet& net);
  StageOutcome run_stage2(DbfNet& net);
  StageOutcome run_stage3(DbfNet& net);

  const std::vector<const Sample*>& train_set() const { return train_; }
  const std::vector<const Sample*>& val_set() const { return val_; }

 private:
  TrainConfig cfg_;
  const Dataset& data_;
  std::vector<const Sample*> train_, val_;
};

}  // namespace tcf

#endif  // TCF_TRAINING_HPP
