// Copyright 2026 The AGED Authors.
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

#ifndef AGED_TRAINER_H_
#define AGED_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aged/checkpoint.h"
#include "aged/encoding.h"
#include "aged/framenet_store.h"
#include "aged/neural_core.h"
#include "aged/span_pointer.h"
#include "aged/template_engine.h"

namespace aged {

struct TrainConfig {
  int epochs = 200;
  int batch_size = 8;
  double learning_rate = 1e-3;
  uint64_t seed = 7;
  bool augment_fe_defs = false;
  MarkerOptions markers;
  // kFrameDef or kQuestion.
  TemplateMode template_mode = TemplateMode::kFrameDef;
  std::filesystem::path checkpoint_path;  // empty: no checkpoint written
  int eval_every = 0;                     // epochs; 0 disables dev scoring
  int max_len = 256;
  int workers = 1;
  double clip_norm = 1.0;  // global gradient norm; <= 0 disables clipping

  // Throws ValidationError.
  void Validate() const;
  nlohmann::ordered_json ToJson() const;
};

enum class Provenance { kFromFrameDef, kFromFEDef, kFromQuestion };

struct TrainingExample {
  EncodedPair pair;
  std::vector<SlotLabel> labels;
  Provenance provenance = Provenance::kFromFrameDef;
  std::string fe;  // focus FE for kFromFEDef / kFromQuestion
  size_t instance_index = 0;
};

// FrameDef mode: one frame-definition example per instance, plus (with
// augment_fe_defs) one FE-definition example per gold argument. Question
// mode: one question example per FE of the frame. Order: instance order,
// then the frame's fe_order.
std::vector<TrainingExample> BuildTrainingStream(
    const std::vector<AnnotatedInstance> &instances, const FrameStore &store,
    const Vocabulary &vocab, const TrainConfig &config);

struct DevScore {
  int epoch = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct TrainingReport {
  std::vector<double> epoch_loss;  // mean example loss per epoch
  std::vector<DevScore> dev;
  std::optional<DevScore> best_dev;
  size_t stream_size = 0;
  size_t steps = 0;

  nlohmann::ordered_json ToJson() const;
};

// Scores the current model on held-out data; supplied by the caller so the
// trainer does not depend on the decoder.
using DevEvaluator = std::function<DevScore(const Model &)>;

// Mini-batch Adam (beta 0.9/0.999, eps 1e-8) on the mean example loss of
// each batch, with global-norm clipping. Batches come from one shuffle per
// epoch seeded by (seed, epoch). Per-example gradients are reduced in batch
// order, so results do not depend on the worker count.
//
// model.params is updated in place. Writes a checkpoint at the end and at
// every new best dev F1 (to "<checkpoint>.best") when checkpoint_path is set.
// Throws RuntimeFailure on a non-finite loss.
TrainingReport Train(const std::vector<TrainingExample> &stream, Model &model,
                     const TrainConfig &config,
                     const DevEvaluator &dev_evaluator = nullptr);

// Untrained model: vocabulary from the instances and store, parameters
// initialized from the encoder config (vocab_size and max_len filled in).
Model NewModel(const std::vector<AnnotatedInstance> &vocab_instances,
               const FrameStore &store, EncoderConfig encoder,
               const TrainConfig &config);

}  // namespace aged

#endif  // AGED_TRAINER_H_
