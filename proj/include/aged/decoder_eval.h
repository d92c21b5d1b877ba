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

// Span decoding and exact-match scoring.

#ifndef AGED_DECODER_EVAL_H_
#define AGED_DECODER_EVAL_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "aged/checkpoint.h"
#include "aged/framenet_store.h"
#include "aged/span_pointer.h"

namespace aged {

struct SpanPrediction {
  std::string fe;
  std::optional<std::pair<int, int>> span;  // 1-based inclusive; empty = none
  double score = 0.0;  // start * end probability of the emitted decision

  bool operator==(const SpanPrediction &) const = default;
};

// For each slot, picks the pair 1 <= s <= e <= n maximizing
// start[s] * end[e]. The span is emitted only if its product is strictly
// greater than start[0] * end[0]; otherwise the slot has no argument.
std::vector<SpanPrediction> Decode(
    const std::vector<PointerDistribution> &distributions);
SpanPrediction DecodeOne(const PointerDistribution &distribution);

struct Metrics {
  size_t true_positives = 0;
  size_t predicted_count = 0;
  size_t gold_count = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static Metrics FromCounts(size_t tp, size_t predicted, size_t gold);
  Metrics &operator+=(const Metrics &other);
  nlohmann::ordered_json ToJson() const;

  bool operator==(const Metrics &) const = default;
};

struct InstancePrediction {
  std::string frame;
  std::vector<SpanPrediction> predictions;

  nlohmann::ordered_json ToJson() const;
  static InstancePrediction FromJson(const nlohmann::json &json);
};

// Micro-averaged exact match over (fe, start, end). No-argument predictions
// are not counted. Throws AlignmentError when the instance counts or frames
// differ, or an instance predicts the same FE twice.
Metrics Evaluate(const std::vector<InstancePrediction> &predictions,
                 const std::vector<AnnotatedInstance> &gold);

// Runs a trained model over instances. Frame-definition models score every
// FE from one pass; question models run one pass per FE. Predictions come
// back in the frame's fe_order, one per FE.
class Predictor {
 public:
  explicit Predictor(const Model &model);

  std::vector<SpanPrediction> Predict(const AnnotatedInstance &instance,
                                      const FrameStore &store) const;
  // Order-preserving; fans out over `workers` threads.
  std::vector<InstancePrediction> PredictAll(
      const std::vector<AnnotatedInstance> &instances, const FrameStore &store,
      int workers = 1) const;

 private:
  Model model_;
  Encoder encoder_;
};

std::vector<SpanPrediction> PredictInstance(const AnnotatedInstance &instance,
                                            const FrameStore &store,
                                            const Model &model);

}  // namespace aged

#endif  // AGED_DECODER_EVAL_H_
