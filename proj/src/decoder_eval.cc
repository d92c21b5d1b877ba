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

#include "aged/decoder_eval.h"

#include <set>
#include <tuple>

#include "aged/errors.h"
#include "aged/parallel.h"
#include "aged/template_engine.h"

namespace aged {

SpanPrediction DecodeOne(const PointerDistribution &distribution) {
  const auto &start = distribution.start_probs;
  const auto &end = distribution.end_probs;
  const int n = distribution.n();
  if (static_cast<int>(end.size()) != n + 1 || n < 0) {
    throw ValidationError("start and end distributions differ in length");
  }

  // Sweep e upwards, keeping the best start in 1..e.
  int best_s = 0, best_e = 0, prefix_s = 0;
  double best = -1.0;
  for (int e = 1; e <= n; ++e) {
    if (prefix_s == 0 || start[e] > start[prefix_s]) prefix_s = e;
    const double product = start[prefix_s] * end[e];
    if (product > best) {
      best = product;
      best_s = prefix_s;
      best_e = e;
    }
  }

  SpanPrediction prediction{distribution.fe, std::nullopt, start[0] * end[0]};
  if (n >= 1 && best > prediction.score) {
    prediction.span = std::make_pair(best_s, best_e);
    prediction.score = best;
  }
  return prediction;
}

std::vector<SpanPrediction> Decode(
    const std::vector<PointerDistribution> &distributions) {
  std::vector<SpanPrediction> out;
  out.reserve(distributions.size());
  for (const auto &distribution : distributions) {
    out.push_back(DecodeOne(distribution));
  }
  return out;
}

Metrics Metrics::FromCounts(size_t tp, size_t predicted, size_t gold) {
  Metrics m;
  m.true_positives = tp;
  m.predicted_count = predicted;
  m.gold_count = gold;
  m.precision = predicted ? static_cast<double>(tp) / predicted : 0.0;
  m.recall = gold ? static_cast<double>(tp) / gold : 0.0;
  m.f1 = m.precision + m.recall > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

Metrics &Metrics::operator+=(const Metrics &other) {
  *this = FromCounts(true_positives + other.true_positives,
                     predicted_count + other.predicted_count,
                     gold_count + other.gold_count);
  return *this;
}

nlohmann::ordered_json Metrics::ToJson() const {
  return {{"precision", precision}, {"recall", recall},
          {"f1", f1},               {"tp", true_positives},
          {"pred", predicted_count}, {"gold", gold_count}};
}

nlohmann::ordered_json InstancePrediction::ToJson() const {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto &p : predictions) {
    nlohmann::ordered_json item;
    item["fe"] = p.fe;
    item["span"] = p.span ? nlohmann::ordered_json{p.span->first, p.span->second}
                          : nlohmann::ordered_json();
    item["score"] = p.score;
    list.push_back(std::move(item));
  }
  return {{"frame", frame}, {"predictions", list}};
}

InstancePrediction InstancePrediction::FromJson(const nlohmann::json &json) {
  InstancePrediction out;
  out.frame = json.at("frame").get<std::string>();
  for (const auto &item : json.at("predictions")) {
    SpanPrediction p;
    p.fe = item.at("fe").get<std::string>();
    const auto &span = item.at("span");
    if (!span.is_null()) {
      if (!span.is_array() || span.size() != 2) {
        throw ValidationError("span must be [start, end] or null");
      }
      p.span = std::make_pair(span[0].get<int>(), span[1].get<int>());
    }
    p.score = item.value("score", 0.0);
    out.predictions.push_back(std::move(p));
  }
  return out;
}

Metrics Evaluate(const std::vector<InstancePrediction> &predictions,
                 const std::vector<AnnotatedInstance> &gold) {
  if (predictions.size() != gold.size()) {
    throw AlignmentError("got predictions for " +
                             std::to_string(predictions.size()) +
                             " instances but " + std::to_string(gold.size()) +
                             " gold instances",
                         std::min(predictions.size(), gold.size()));
  }
  size_t tp = 0, predicted = 0, gold_count = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    const auto &instance = gold[i];
    if (predictions[i].frame != instance.frame) {
      throw AlignmentError("instance " + std::to_string(i + 1) +
                               ": predicted frame " + predictions[i].frame +
                               " but gold frame is " + instance.frame,
                           i);
    }
    std::set<std::tuple<std::string, int, int>> gold_spans;
    for (const auto &argument : instance.arguments) {
      gold_spans.emplace(argument.fe, argument.start, argument.end);
    }
    gold_count += gold_spans.size();
    std::set<std::string> seen;
    for (const auto &p : predictions[i].predictions) {
      if (!seen.insert(p.fe).second) {
        throw AlignmentError("instance " + std::to_string(i + 1) +
                                 ": FE " + p.fe + " predicted twice",
                             i);
      }
      if (!p.span) continue;
      ++predicted;
      if (gold_spans.count({p.fe, p.span->first, p.span->second})) ++tp;
    }
  }
  return Metrics::FromCounts(tp, predicted, gold_count);
}

Predictor::Predictor(const Model &model)
    : model_(model), encoder_(model.params, model.encoder) {}

std::vector<SpanPrediction> Predictor::Predict(
    const AnnotatedInstance &instance, const FrameStore &store) const {
  const Frame &frame = store.at(instance.frame);
  const AssembleOptions assemble{model_.markers.target_markers,
                                 model_.encoder.max_len};
  auto run = [&](const DefinitionTemplate &tmpl) {
    const EncodedPair pair = Assemble(instance, tmpl, model_.vocab, assemble);
    return Decode(Score(encoder_, model_.params, pair));
  };

  std::vector<SpanPrediction> decoded;
  if (model_.template_mode == TemplateMode::kQuestion) {
    for (const auto &fe : frame.fe_order) {
      auto one = run(BuildQuestionTemplate(frame, fe, model_.markers));
      decoded.push_back(std::move(one.front()));
    }
    return decoded;
  }
  decoded = run(BuildFrameTemplate(frame, model_.markers));
  std::vector<SpanPrediction> ordered;
  ordered.reserve(frame.fe_order.size());
  for (const auto &fe : frame.fe_order) {
    for (auto &p : decoded) {
      if (p.fe == fe) ordered.push_back(std::move(p));
    }
  }
  return ordered;
}

std::vector<InstancePrediction> Predictor::PredictAll(
    const std::vector<AnnotatedInstance> &instances, const FrameStore &store,
    int workers) const {
  std::vector<InstancePrediction> out(instances.size());
  ParallelFor(instances.size(), workers, [&](size_t i) {
    out[i] = InstancePrediction{instances[i].frame,
                                Predict(instances[i], store)};
  });
  return out;
}

std::vector<SpanPrediction> PredictInstance(const AnnotatedInstance &instance,
                                            const FrameStore &store,
                                            const Model &model) {
  return Predictor(model).Predict(instance, store);
}

}  // namespace aged
