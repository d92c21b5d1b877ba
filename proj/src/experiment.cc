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

#include "aged/experiment.h"

#include <algorithm>
#include <map>

#include "aged/errors.h"
#include "aged/logging.h"

namespace aged {
namespace {

nlohmann::ordered_json MarkersJson(const MarkerOptions &m) {
  return {{"target", m.target_markers},
          {"frame_label", m.frame_label_markers},
          {"role_label", m.role_label_markers}};
}

}  // namespace

nlohmann::ordered_json ExperimentRun::ToJson() const {
  nlohmann::ordered_json out;
  out["label"] = label;
  out["template_mode"] = std::string(TemplateModeName(template_mode));
  out["markers"] = MarkersJson(markers);
  out["holdout_certified"] = holdout_certified;
  out["overall"] = overall.ToJson();
  out["held_out"] = held_out.ToJson();
  nlohmann::ordered_json frames = nlohmann::ordered_json::array();
  for (const auto &f : per_frame) {
    frames.push_back({{"frame", f.frame},
                      {"held_out", f.held_out},
                      {"available_train", f.available_train},
                      {"train_occurrences", f.train_occurrences},
                      {"stream_examples", f.stream_examples},
                      {"test_instances", f.test_instances},
                      {"predictions_complete", f.predictions_complete},
                      {"metrics", f.metrics.ToJson()}});
  }
  out["per_frame"] = std::move(frames);
  out["epoch_loss"] = epoch_loss;
  return out;
}

nlohmann::ordered_json ExperimentReport::ToJson() const {
  nlohmann::ordered_json out;
  out["held_out_frames"] = held_out_frames;
  if (k == kFullShot) {
    out["k"] = "full";
  } else {
    out["k"] = k;
  }
  out["sample_seed"] = sample_seed;
  out["runs"] = nlohmann::ordered_json::array();
  for (const auto &run : runs) out["runs"].push_back(run.ToJson());
  return out;
}

ExperimentRun RunHoldoutExperiment(const std::vector<AnnotatedInstance> &train,
                                   const std::vector<AnnotatedInstance> &test,
                                   const FrameStore &store,
                                   const HoldoutSetup &setup,
                                   const std::string &label) {
  for (const auto &name : setup.frames) store.at(name);

  const auto pool = setup.k == kFullShot
                        ? train
                        : SampleKShot(train, setup.frames, setup.k,
                                      setup.sample_seed);

  ExperimentRun run;
  run.label = label;
  run.template_mode = setup.train.template_mode;
  run.markers = setup.train.markers;

  std::map<std::string, FrameReport> frames;
  for (const auto &frame : store) {
    FrameReport &report = frames[frame.name];
    report.frame = frame.name;
    report.held_out = setup.frames.count(frame.name) > 0;
  }
  for (const auto &instance : train) ++frames[instance.frame].available_train;
  for (const auto &instance : pool) ++frames[instance.frame].train_occurrences;

  Model model = NewModel(pool, store, setup.encoder, setup.train);
  const auto stream = BuildTrainingStream(pool, store, model.vocab, setup.train);
  for (const auto &example : stream) {
    ++frames[pool[example.instance_index].frame].stream_examples;
  }

  run.holdout_certified = true;
  for (const auto &name : setup.frames) {
    const FrameReport &report = frames[name];
    const size_t expected = std::min(setup.k, report.available_train);
    const bool ok = report.train_occurrences == expected &&
                    (expected > 0 || report.stream_examples == 0);
    if (!ok) {
      throw RuntimeFailure("holdout of frame " + name + " not certified: " +
                           std::to_string(report.train_occurrences) +
                           " training occurrences, expected " +
                           std::to_string(expected));
    }
  }

  if (pool.empty()) throw ValidationError("training pool is empty");
  const TrainingReport training = Train(stream, model, setup.train);
  run.epoch_loss = training.epoch_loss;

  const Predictor predictor(model);
  run.predictions = predictor.PredictAll(test, store, setup.train.workers);
  run.overall = Evaluate(run.predictions, test);

  std::map<std::string, std::pair<std::vector<InstancePrediction>,
                                  std::vector<AnnotatedInstance>>>
      by_frame;
  for (size_t i = 0; i < test.size(); ++i) {
    auto &[preds, gold] = by_frame[test[i].frame];
    preds.push_back(run.predictions[i]);
    gold.push_back(test[i]);
  }
  for (const auto &[name, data] : by_frame) {
    FrameReport &report = frames[name];
    report.test_instances = data.second.size();
    report.metrics = Evaluate(data.first, data.second);
    const size_t fe_count = store.at(name).fes.size();
    for (const auto &p : data.first) {
      if (p.predictions.size() != fe_count) report.predictions_complete = false;
    }
    if (report.held_out) run.held_out += report.metrics;
  }
  for (const auto &frame : store) run.per_frame.push_back(frames[frame.name]);

  Log().info("{}: overall F1 {:.4f}, held-out F1 {:.4f}", label,
             run.overall.f1, run.held_out.f1);
  return run;
}

}  // namespace aged
