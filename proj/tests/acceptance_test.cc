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

// Acceptance run over the bundled mini-FrameNet. Prints one PASS/FAIL line
// per criterion and exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstring>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aged/checkpoint.h"
#include "aged/decoder_eval.h"
#include "aged/encoding.h"
#include "aged/experiment.h"
#include "aged/framenet_store.h"
#include "aged/span_pointer.h"
#include "aged/template_engine.h"
#include "aged/trainer.h"
#include "model_util.h"
#include "oracles.h"
#include "test_util.h"

namespace aged {
namespace {

const std::filesystem::path kData = AGED_DATA_DIR;

struct Corpus {
  FrameStore store = LoadOntology(kData / "frames.jsonl");
  std::vector<AnnotatedInstance> train =
      LoadInstances(kData / "train.jsonl", store);
  std::vector<AnnotatedInstance> dev = LoadInstances(kData / "dev.jsonl", store);
  std::vector<AnnotatedInstance> test =
      LoadInstances(kData / "test.jsonl", store);
};

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first few are kept for the report line.
class Checker {
 public:
  void Expect(bool ok, const std::string &what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  int failures() const { return failures_; }
  Outcome Result(const std::string &summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, summary + "; " + std::to_string(failures_) +
                       " failure(s): " + messages_};
  }

 private:
  int failures_ = 0;
  std::string messages_;
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

std::string Fixed(double value, int digits) {
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << value;
  return out.str();
}

std::vector<std::string> Split(const std::string &text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

std::vector<std::string> SplitName(std::string name) {
  for (auto &c : name) {
    if (c == '_') c = ' ';
  }
  return Split(name);
}

EncodedPair PairFor(const AnnotatedInstance &instance, const FrameStore &store,
                    const Model &model) {
  const auto tmpl = BuildFrameTemplate(store.at(instance.frame), model.markers);
  return Assemble(instance, tmpl, model.vocab,
                  {model.markers.target_markers, model.encoder.max_len});
}

// 1. One slot per FE, none duplicated, slots at the leftmost mention.
Outcome TemplateCompleteness(const Corpus &c) {
  const auto start = std::chrono::steady_clock::now();
  Checker check;
  for (const Frame &frame : c.store) {
    const DefinitionTemplate t = BuildFrameTemplate(frame);
    // Expected layout: <f> name </f> | definition | list.
    int pos = static_cast<int>(SplitName(frame.name).size()) + 2;
    check.Expect(t.tokens[pos] == "|", frame.name + ": header");
    ++pos;
    std::map<std::string, std::pair<int, int>> expected;
    for (const auto &segment : frame.definition.segments) {
      if (const auto *plain = std::get_if<PlainText>(&segment)) {
        pos += static_cast<int>(Split(plain->text).size());
        continue;
      }
      const auto &mention = std::get<FEMention>(segment);
      const int words = static_cast<int>(SplitName(mention.surface).size());
      expected.emplace(mention.fe, std::make_pair(pos + 1, pos + words));
      pos += words + 2;
    }
    const std::set<std::string> mentioned = [&] {
      std::set<std::string> s;
      for (const auto &[fe, span] : expected) s.insert(fe);
      return s;
    }();
    check.Expect(t.tokens[pos] == "|", frame.name + ": definition length");
    ++pos;
    bool first = true;
    for (const auto &fe : frame.fe_order) {
      if (mentioned.count(fe)) continue;
      if (!first) {
        check.Expect(t.tokens[pos] == ",", frame.name + ": list separator");
        ++pos;
      }
      first = false;
      const int words = static_cast<int>(SplitName(fe).size());
      expected.emplace(fe, std::make_pair(pos + 1, pos + words));
      pos += words + 2;
    }
    check.Expect(pos == static_cast<int>(t.tokens.size()),
                 frame.name + ": total length");

    std::multiset<std::string> slot_names;
    for (const auto &slot : t.slots) slot_names.insert(slot.fe);
    check.Expect(t.slots.size() == frame.fe_order.size(),
                 frame.name + ": slot count");
    for (const auto &fe : frame.fe_order) {
      check.Expect(slot_names.count(fe) == 1, frame.name + ": slot for " + fe);
      const Slot *slot = t.FindSlot(fe);
      if (slot == nullptr) continue;
      check.Expect(std::make_pair(slot->start, slot->end) == expected.at(fe),
                   frame.name + ": position of " + fe);
    }
    // The appended list holds no mentioned FE.
    const int list_begin = [&] {
      int bars = 0;
      for (size_t i = 0; i < t.tokens.size(); ++i) {
        if (t.tokens[i] == "|" && ++bars == 2) return static_cast<int>(i);
      }
      return static_cast<int>(t.tokens.size());
    }();
    for (const auto &slot : t.slots) {
      if (slot.start > list_begin) {
        check.Expect(mentioned.count(slot.fe) == 0,
                     frame.name + ": " + slot.fe + " listed twice");
      }
    }
  }
  const double secs = Seconds(start);
  check.Expect(secs < 1.0, "runtime " + Fixed(secs, 3) + " s");
  return check.Result(std::to_string(c.store.size()) + " frames, " +
                      std::to_string(c.store.fe_count()) + " FEs, " +
                      Fixed(secs, 4) + " s");
}

// 2. Analytic gradient of the total loss against central differences.
Outcome GradientFidelity(const Corpus &c) {
  const auto start = std::chrono::steady_clock::now();
  EncoderConfig encoder;
  encoder.d_model = 8;
  encoder.n_layers = 1;
  encoder.n_heads = 2;
  encoder.d_ff = 16;
  encoder.dtype = DType::kF64;
  TrainConfig config;
  Model model = NewModel(c.train, c.store, encoder, config);
  const auto stream = BuildTrainingStream(c.train, c.store, model.vocab, config);
  const TrainingExample &example = stream.front();
  ParameterSet &params = model.params;

  ParameterGradients grads = params.ZerosLike();
  ExampleLossAndGradient(Encoder(params, model.encoder), params, example.pair,
                         example.labels, 1.0, &grads);
  auto loss = [&] {
    return ExampleLoss(Encoder(params, model.encoder), params, example.pair,
                       example.labels)
        .total;
  };

  // Token embedding rows outside the example have zero gradient, so the
  // coordinates are drawn from the rows the example touches first.
  std::mt19937_64 rng(2);
  const double eps = 1e-5;
  Checker check;
  double worst = 0.0;
  size_t probed = 0, nonzero = 0;
  size_t min_per_tensor = SIZE_MAX;
  for (size_t t = 0; t < params.size(); ++t) {
    auto &data = params[t].data;
    std::vector<size_t> coords;
    const bool is_embedding = params[t].rows() == model.encoder.vocab_size;
    if (is_embedding) {
      std::set<int> rows(example.pair.ids.begin(), example.pair.ids.end());
      std::vector<size_t> used;
      for (int r : rows) {
        for (int k = 0; k < params[t].cols(); ++k) {
          used.push_back(size_t(r) * params[t].cols() + k);
        }
      }
      std::shuffle(used.begin(), used.end(), rng);
      coords = used;
      if (coords.size() > 200) coords.resize(200);
      for (size_t extra : testing::SampleCoordinates(data.size(), 20, rng)) {
        coords.push_back(extra);
      }
    } else {
      coords = testing::SampleCoordinates(data.size(), 200, rng);
    }
    const size_t required = std::min<size_t>(200, data.size());
    check.Expect(coords.size() >= required,
                 params.names()[t] + ": too few coordinates");
    min_per_tensor = std::min(min_per_tensor, coords.size());
    for (size_t i : coords) {
      const double saved = data[i];
      data[i] = saved + eps;
      const double plus = loss();
      data[i] = saved - eps;
      const double minus = loss();
      data[i] = saved;
      const double numeric = (plus - minus) / (2 * eps);
      const double rel = testing::RelativeError(grads[t].data[i], numeric, 1e-6);
      worst = std::max(worst, rel);
      ++probed;
      nonzero += grads[t].data[i] != 0.0;
      check.Expect(rel <= 1e-4, params.names()[t] + "[" + std::to_string(i) +
                                    "] rel " + std::to_string(rel));
    }
  }
  const double secs = Seconds(start);
  check.Expect(secs < 60.0, "runtime " + Fixed(secs, 1) + " s");
  std::ostringstream summary;
  summary << params.size() << " tensors, " << probed << " coordinates ("
          << nonzero << " non-zero, >= " << min_per_tensor
          << " per tensor), worst rel " << worst << ", " << Fixed(secs, 2)
          << " s";
  return check.Result(summary.str());
}

// 3. Decoder against brute force with the strict null rule.
Outcome DecodeOracle() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(11);
  Checker check;
  const int cases = 5000;
  int nulls = 0;
  for (int trial = 0; trial < cases; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 20);
    const auto d = testing::RandomDistribution(rng, n);
    const SpanPrediction p = DecodeOne(d);
    nulls += !p.span.has_value();
    check.Expect(testing::AgreesWithOracle(p, d),
                 "case " + std::to_string(trial));
  }
  const double secs = Seconds(start);
  check.Expect(secs < 5.0, "runtime " + Fixed(secs, 2) + " s");
  return check.Result(std::to_string(cases) + " cases (" +
                      std::to_string(nulls) + " null), " + Fixed(secs, 3) +
                      " s");
}

// 4. Scorer against a set-intersection oracle.
Outcome MetricOracle() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(12);
  Checker check;
  const int cases = 5000;
  int no_pred = 0, no_gold = 0;
  for (int trial = 0; trial < cases; ++trial) {
    const auto sc = testing::RandomScoringCase(rng);
    const Metrics got = Evaluate(sc.predictions, sc.gold);
    const Metrics want = testing::OracleMetrics(sc.predictions, sc.gold);
    no_pred += want.predicted_count == 0;
    no_gold += want.gold_count == 0;
    check.Expect(got == want, "case " + std::to_string(trial));
  }
  check.Expect(no_pred > 0 && no_gold > 0, "degenerate cases not covered");
  const double secs = Seconds(start);
  check.Expect(secs < 5.0, "runtime " + Fixed(secs, 2) + " s");
  return check.Result(std::to_string(cases) + " cases (" +
                      std::to_string(no_pred) + " with 0 predicted, " +
                      std::to_string(no_gold) + " with 0 gold), " +
                      Fixed(secs, 3) + " s");
}

double TrainF1(const Model &model, const Corpus &c) {
  return Evaluate(Predictor(model).PredictAll(c.train, c.store), c.train).f1;
}

// 5. Overfit the training split and check the loss sequence reproduces.
Outcome OverfitConvergence(const Corpus &c) {
  TrainConfig config;  // batch 8, lr 1e-3, seed 7, 200 epochs
  EncoderConfig encoder;  // d_model 32, 2 layers, 4 heads
  Checker check;
  std::vector<std::vector<double>> losses;
  double f1 = 0.0, first_secs = 0.0;
  for (int run = 0; run < 2; ++run) {
    const auto start = std::chrono::steady_clock::now();
    Model model = NewModel(c.train, c.store, encoder, config);
    const auto stream =
        BuildTrainingStream(c.train, c.store, model.vocab, config);
    losses.push_back(Train(stream, model, config).epoch_loss);
    if (run == 0) {
      f1 = TrainF1(model, c);
      first_secs = Seconds(start);
    }
  }
  check.Expect(f1 >= 0.99, "train F1 " + Fixed(f1, 4));
  check.Expect(losses[0].size() <= 200, "too many epochs");
  check.Expect(first_secs < 300.0, "runtime " + Fixed(first_secs, 1) + " s");
  check.Expect(losses[0] == losses[1], "rerun loss sequence differs");
  return check.Result("train F1 " + Fixed(f1, 4) + " after " +
                      std::to_string(losses[0].size()) + " epochs, final loss " +
                      std::to_string(losses[0].back()) +
                      ", rerun identical: " +
                      (losses[0] == losses[1] ? "yes" : "no") + ", " +
                      Fixed(first_secs, 1) + " s");
}

// 6. Augmented stream size per dataset.
Outcome AugmentationAccounting(const Corpus &c) {
  Checker check;
  std::string summary;
  const Vocabulary vocab = Vocabulary::Build(c.train, c.store);
  const std::vector<std::pair<std::string, const std::vector<AnnotatedInstance> *>>
      splits = {{"train", &c.train}, {"dev", &c.dev}, {"test", &c.test}};
  for (const auto &[name, instances] : splits) {
    size_t arguments = 0;
    for (const auto &i : *instances) arguments += i.arguments.size();
    TrainConfig config;
    config.augment_fe_defs = true;
    const size_t size =
        BuildTrainingStream(*instances, c.store, vocab, config).size();
    const size_t expected = instances->size() + arguments;
    check.Expect(size == expected, name + ": " + std::to_string(size) +
                                       " != " + std::to_string(expected));
    summary += (summary.empty() ? "" : ", ") + name + " " +
               std::to_string(size) + " = " +
               std::to_string(instances->size()) + " + " +
               std::to_string(arguments);
  }
  return check.Result(summary);
}

// 7. k = 0 holdout of one frame, in both template modes.
Outcome ZeroShot(const Corpus &c) {
  const std::string held = c.store.begin()->name;
  const Frame &frame = c.store.at(held);
  HoldoutSetup setup;
  setup.frames = {held};
  setup.k = 0;
  setup.train.epochs = 100;
  Checker check;
  std::map<std::string, double> held_f1;
  for (TemplateMode mode : {TemplateMode::kFrameDef, TemplateMode::kQuestion}) {
    setup.train.template_mode = mode;
    const std::string label(TemplateModeName(mode));
    const ExperimentRun run =
        RunHoldoutExperiment(c.train, c.test, c.store, setup, label);
    check.Expect(run.holdout_certified, label + ": holdout not certified");
    const FrameReport *row = nullptr;
    for (const auto &r : run.per_frame) {
      if (r.frame == held) row = &r;
    }
    check.Expect(row != nullptr, label + ": no per-frame entry");
    if (row != nullptr) {
      check.Expect(row->held_out, label + ": not marked held out");
      check.Expect(row->train_occurrences == 0,
                   label + ": held-out frame seen in training");
      check.Expect(row->stream_examples == 0,
                   label + ": held-out frame in the stream");
      check.Expect(row->test_instances > 0, label + ": no test instances");
      held_f1[label] = row->metrics.f1;
    }
    check.Expect(run.predictions.size() == c.test.size(),
                 label + ": prediction count");
    for (size_t i = 0; i < c.test.size() && i < run.predictions.size(); ++i) {
      if (c.test[i].frame != held) continue;
      const auto &p = run.predictions[i].predictions;
      bool complete = p.size() == frame.fe_order.size();
      for (size_t k = 0; complete && k < p.size(); ++k) {
        complete = p[k].fe == frame.fe_order[k];
      }
      check.Expect(complete, label + ": incomplete predictions for instance " +
                                 std::to_string(i + 1));
    }
  }
  const double def = held_f1["frame-def"], question = held_f1["question"];
  return check.Result(
      "held out " + held + ", certified 0 occurrences; held-out F1 frame-def " +
      Fixed(def, 4) + " vs question " + Fixed(question, 4) + " (" +
      (def >= question ? "definition >= question" : "definition < question") +
      ", reported only)");
}

// 8. Two targets in one sentence are indistinguishable without markers.
Outcome TargetMarkerAblation(const Corpus &c) {
  Checker check;
  const AnnotatedInstance *a = nullptr, *b = nullptr;
  for (size_t i = 0; i < c.test.size() && a == nullptr; ++i) {
    for (size_t j = i + 1; j < c.test.size(); ++j) {
      if (c.test[i].tokens == c.test[j].tokens &&
          c.test[i].target != c.test[j].target &&
          c.test[i].frame != c.test[j].frame) {
        a = &c.test[i];
        b = &c.test[j];
        break;
      }
    }
  }
  if (a == nullptr) return {false, "no shared-token pair in the test split"};

  // Same frame for both: only the target position tells them apart.
  AnnotatedInstance first = *a, second = *b;
  second.frame = first.frame;
  second.arguments.clear();
  first.arguments.clear();

  EncoderConfig encoder;
  encoder.d_model = 8;
  encoder.n_layers = 1;
  encoder.n_heads = 2;
  encoder.d_ff = 16;
  TrainConfig config;
  config.epochs = 3;
  config.markers.target_markers = false;
  Model off = NewModel(c.train, c.store, encoder, config);
  Train(BuildTrainingStream(c.train, c.store, off.vocab, config), off, config);
  const EncodedPair off_a = PairFor(first, c.store, off);
  const EncodedPair off_b = PairFor(second, c.store, off);
  check.Expect(off_a == off_b, "pairs differ without markers");
  const auto pred_a = PredictInstance(first, c.store, off);
  const auto pred_b = PredictInstance(second, c.store, off);
  check.Expect(pred_a == pred_b, "predictions differ without markers");

  Model on = off;
  on.markers.target_markers = true;
  const EncodedPair on_a = PairFor(first, c.store, on);
  const EncodedPair on_b = PairFor(second, c.store, on);
  check.Expect(!(on_a == on_b), "pairs identical with markers");
  return check.Result("targets " + std::to_string(a->target) + " (" + a->frame +
                      ") and " + std::to_string(b->target) + " (" + b->frame +
                      "): markers off -> identical pairs and " +
                      std::to_string(pred_a.size()) +
                      " identical predictions; markers on -> pairs differ");
}

// 9. Save, load and compare dev predictions and F64 forward outputs.
Outcome CheckpointRoundTrip(const Corpus &c) {
  Checker check;
  EncoderConfig encoder;
  encoder.dtype = DType::kF64;
  TrainConfig config;
  config.epochs = 5;
  Model model = NewModel(c.train, c.store, encoder, config);
  Train(BuildTrainingStream(c.train, c.store, model.vocab, config), model,
        config);
  const auto dir = testing::TempDir("acceptance");
  SaveCheckpoint(model, dir / "model.json");
  const Model loaded = LoadCheckpoint(dir / "model.json");
  check.Expect(loaded == model, "model fields differ");

  const auto before = Predictor(model).PredictAll(c.dev, c.store);
  const auto after = Predictor(loaded).PredictAll(c.dev, c.store);
  size_t spans = 0;
  for (size_t i = 0; i < c.dev.size(); ++i) {
    check.Expect(before[i].predictions == after[i].predictions,
                 "dev instance " + std::to_string(i + 1));
    spans += before[i].predictions.size();
  }
  const Encoder original(model.params, model.encoder);
  const Encoder restored(loaded.params, loaded.encoder);
  for (const auto &instance : c.dev) {
    const EncodedPair pair = PairFor(instance, c.store, model);
    const Matrix x = original.Forward(pair).reps;
    const Matrix y = restored.Forward(pair).reps;
    check.Expect(x.rows() == y.rows() && x.cols() == y.cols() &&
                     std::memcmp(x.data(), y.data(),
                                 sizeof(double) * x.size()) == 0,
                 "forward outputs differ");
  }
  std::filesystem::remove_all(dir);
  return check.Result(std::to_string(c.dev.size()) + " dev instances, " +
                      std::to_string(spans) +
                      " span decisions identical, F64 forward bitwise equal");
}

int Main() {
  const Corpus corpus;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria =
      {{"template completeness", [&] { return TemplateCompleteness(corpus); }},
       {"gradient fidelity", [&] { return GradientFidelity(corpus); }},
       {"decode-oracle equivalence", [] { return DecodeOracle(); }},
       {"metric-oracle equivalence", [] { return MetricOracle(); }},
       {"overfit convergence", [&] { return OverfitConvergence(corpus); }},
       {"augmentation accounting", [&] { return AugmentationAccounting(corpus); }},
       {"zero-shot mechanics", [&] { return ZeroShot(corpus); }},
       {"target-marker ablation", [&] { return TargetMarkerAblation(corpus); }},
       {"checkpoint round trip", [&] { return CheckpointRoundTrip(corpus); }}};
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception &e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] "
              << criteria[i].first << ": " << outcome.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace aged

int main() { return aged::Main(); }
