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

// Zero/few-shot holdout runs: restrict some frames to k training instances,
// train from scratch, and score every test frame separately.

#ifndef AGED_EXPERIMENT_H_
#define AGED_EXPERIMENT_H_

#include <limits>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aged/decoder_eval.h"
#include "aged/trainer.h"

namespace aged {

// k value meaning "keep every training instance".
inline constexpr size_t kFullShot = std::numeric_limits<size_t>::max();

struct FrameReport {
  std::string frame;
  bool held_out = false;
  size_t available_train = 0;  // before sampling
  size_t train_occurrences = 0;  // after sampling
  size_t stream_examples = 0;    // training examples built from this frame
  size_t test_instances = 0;
  // Every test instance of the frame received one prediction per FE.
  bool predictions_complete = true;
  Metrics metrics;
};

struct ExperimentRun {
  std::string label;
  TemplateMode template_mode = TemplateMode::kFrameDef;
  MarkerOptions markers;
  Metrics overall;
  Metrics held_out;  // pooled over held-out frames
  std::vector<FrameReport> per_frame;
  std::vector<double> epoch_loss;
  // Held-out frames have exactly min(k, available) training occurrences.
  bool holdout_certified = false;
  std::vector<InstancePrediction> predictions;

  nlohmann::ordered_json ToJson() const;
};

struct ExperimentReport {
  std::set<std::string> held_out_frames;
  size_t k = kFullShot;
  uint64_t sample_seed = 0;
  std::vector<ExperimentRun> runs;

  nlohmann::ordered_json ToJson() const;
};

struct HoldoutSetup {
  std::set<std::string> frames;
  size_t k = 0;
  uint64_t sample_seed = 0;
  EncoderConfig encoder;
  TrainConfig train;
};

// Samples the training pool, trains a fresh model and evaluates it on test.
// Throws RuntimeFailure if the holdout cannot be certified.
ExperimentRun RunHoldoutExperiment(
    const std::vector<AnnotatedInstance> &train,
    const std::vector<AnnotatedInstance> &test, const FrameStore &store,
    const HoldoutSetup &setup, const std::string &label = "frame-def");

}  // namespace aged

#endif  // AGED_EXPERIMENT_H_
