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

#include "aged/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "aged/errors.h"
#include "aged/logging.h"
#include "aged/parallel.h"

namespace aged {
namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;

class Adam {
 public:
  explicit Adam(const ParameterSet &params)
      : first_(params.ZerosLike()), second_(params.ZerosLike()) {}

  void Step(ParameterSet &params, const ParameterGradients &grads, double lr) {
    ++t_;
    const double correction1 = 1.0 - std::pow(kBeta1, t_);
    const double correction2 = 1.0 - std::pow(kBeta2, t_);
    for (size_t i = 0; i < params.size(); ++i) {
      auto &p = params[i].data;
      const auto &g = grads[i].data;
      auto &m = first_[i].data;
      auto &v = second_[i].data;
      for (size_t j = 0; j < p.size(); ++j) {
        m[j] = kBeta1 * m[j] + (1.0 - kBeta1) * g[j];
        v[j] = kBeta2 * v[j] + (1.0 - kBeta2) * g[j] * g[j];
        const double m_hat = m[j] / correction1;
        const double v_hat = v[j] / correction2;
        p[j] -= lr * m_hat / (std::sqrt(v_hat) + kAdamEpsilon);
      }
    }
  }

 private:
  ParameterSet first_;
  ParameterSet second_;
  int t_ = 0;
};

void Zero(ParameterSet &set) {
  for (size_t i = 0; i < set.size(); ++i) {
    std::fill(set[i].data.begin(), set[i].data.end(), 0.0);
  }
}

std::filesystem::path BestPath(const std::filesystem::path &path) {
  auto best = path;
  best.replace_filename(path.stem().string() + ".best" +
                        path.extension().string());
  return best;
}

uint64_t MixSeed(uint64_t seed, uint64_t a, uint64_t b) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(a), static_cast<uint32_t>(b)};
  std::mt19937_64 rng(seq);
  return rng();
}

}  // namespace

void TrainConfig::Validate() const {
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("learning_rate must be a finite value >= 0");
  }
  if (template_mode == TemplateMode::kFEDef) {
    throw ValidationError("training mode must be frame-def or question");
  }
  if (eval_every < 0) throw ValidationError("eval_every must be >= 0");
  if (workers < 1) throw ValidationError("workers must be >= 1");
}

nlohmann::ordered_json TrainConfig::ToJson() const {
  return {{"epochs", epochs},
          {"batch_size", batch_size},
          {"learning_rate", learning_rate},
          {"seed", seed},
          {"augment_fe_defs", augment_fe_defs},
          {"template_mode", std::string(TemplateModeName(template_mode))},
          {"target_markers", markers.target_markers},
          {"frame_label_markers", markers.frame_label_markers},
          {"role_label_markers", markers.role_label_markers},
          {"checkpoint", checkpoint_path.string()},
          {"eval_every", eval_every},
          {"max_len", max_len},
          {"workers", workers},
          {"clip_norm", clip_norm}};
}

std::vector<TrainingExample> BuildTrainingStream(
    const std::vector<AnnotatedInstance> &instances, const FrameStore &store,
    const Vocabulary &vocab, const TrainConfig &config) {
  const AssembleOptions assemble{config.markers.target_markers, config.max_len};
  std::vector<TrainingExample> stream;
  auto add = [&](size_t index, const DefinitionTemplate &tmpl,
                 Provenance provenance, const std::string &fe) {
    const auto &instance = instances[index];
    stream.push_back(TrainingExample{Assemble(instance, tmpl, vocab, assemble),
                                     GoldLabels(instance, tmpl), provenance, fe,
                                     index});
  };

  for (size_t i = 0; i < instances.size(); ++i) {
    const auto &instance = instances[i];
    const Frame &frame = store.at(instance.frame);
    if (config.template_mode == TemplateMode::kQuestion) {
      for (const auto &fe : frame.fe_order) {
        add(i, BuildQuestionTemplate(frame, fe, config.markers),
            Provenance::kFromQuestion, fe);
      }
      continue;
    }
    add(i, BuildFrameTemplate(frame, config.markers), Provenance::kFromFrameDef,
        "");
    if (!config.augment_fe_defs) continue;
    for (const auto &fe : frame.fe_order) {
      if (instance.FindArgument(fe) == nullptr) continue;
      add(i, BuildFETemplate(frame, fe, config.markers), Provenance::kFromFEDef,
          fe);
    }
  }
  return stream;
}

nlohmann::ordered_json TrainingReport::ToJson() const {
  auto score = [](const DevScore &s) {
    return nlohmann::ordered_json{{"epoch", s.epoch},
                                  {"precision", s.precision},
                                  {"recall", s.recall},
                                  {"f1", s.f1}};
  };
  nlohmann::ordered_json out;
  out["stream_size"] = stream_size;
  out["steps"] = steps;
  out["epoch_loss"] = epoch_loss;
  out["dev"] = nlohmann::ordered_json::array();
  for (const auto &s : dev) out["dev"].push_back(score(s));
  out["best_dev"] = best_dev ? score(*best_dev) : nlohmann::ordered_json();
  return out;
}

TrainingReport Train(const std::vector<TrainingExample> &stream, Model &model,
                     const TrainConfig &config,
                     const DevEvaluator &dev_evaluator) {
  config.Validate();
  if (stream.empty()) throw ValidationError("training stream is empty");

  TrainingReport report;
  report.stream_size = stream.size();
  Adam adam(model.params);
  ParameterGradients batch_grad = model.params.ZerosLike();
  const size_t batch_size = static_cast<size_t>(config.batch_size);
  std::vector<ParameterGradients> example_grads(
      std::min(batch_size, stream.size()), model.params.ZerosLike());
  std::vector<double> example_loss(example_grads.size());

  std::vector<size_t> order(stream.size());
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    std::seed_seq seq{static_cast<uint32_t>(config.seed),
                      static_cast<uint32_t>(config.seed >> 32),
                      static_cast<uint32_t>(epoch)};
    std::mt19937_64 shuffle_rng(seq);
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double epoch_sum = 0.0;
    size_t batch_index = 0;
    for (size_t begin = 0; begin < order.size(); begin += batch_size, ++batch_index) {
      const size_t count = std::min(batch_size, order.size() - begin);
      const double weight = 1.0 / static_cast<double>(count);
      const Encoder encoder(model.params, model.encoder);

      ParallelFor(count, config.workers, [&](size_t k) {
        const auto &example = stream[order[begin + k]];
        Zero(example_grads[k]);
        example_loss[k] =
            ExampleLossAndGradient(encoder, model.params, example.pair,
                                   example.labels, weight, &example_grads[k],
                                   MixSeed(config.seed, report.steps, k))
                .total;
      });

      Zero(batch_grad);
      for (size_t k = 0; k < count; ++k) {
        if (!std::isfinite(example_loss[k])) {
          throw RuntimeFailure("non-finite loss in epoch " +
                               std::to_string(epoch) + ", batch " +
                               std::to_string(batch_index) + " (example " +
                               std::to_string(order[begin + k]) + ")");
        }
        epoch_sum += example_loss[k];
        batch_grad.AddScaled(example_grads[k], 1.0);
      }
      if (config.clip_norm > 0.0) {
        const double norm = std::sqrt(batch_grad.SquaredNorm());
        if (norm > config.clip_norm) batch_grad.Scale(config.clip_norm / norm);
      }
      adam.Step(model.params, batch_grad, config.learning_rate);
      ++report.steps;
    }
    const double mean_loss = epoch_sum / static_cast<double>(stream.size());
    report.epoch_loss.push_back(mean_loss);
    Log().debug("epoch {} mean loss {:.6f}", epoch, mean_loss);

    if (dev_evaluator && config.eval_every > 0 &&
        epoch % config.eval_every == 0) {
      DevScore score = dev_evaluator(model);
      score.epoch = epoch;
      report.dev.push_back(score);
      Log().info("epoch {} loss {:.4f} dev F1 {:.4f}", epoch, mean_loss,
                 score.f1);
      if (!report.best_dev || score.f1 > report.best_dev->f1) {
        report.best_dev = score;
        if (!config.checkpoint_path.empty()) {
          SaveCheckpoint(model, BestPath(config.checkpoint_path));
        }
      }
    }
  }
  if (!config.checkpoint_path.empty()) {
    SaveCheckpoint(model, config.checkpoint_path);
  }
  return report;
}

Model NewModel(const std::vector<AnnotatedInstance> &vocab_instances,
               const FrameStore &store, EncoderConfig encoder,
               const TrainConfig &config) {
  Model model;
  model.vocab = Vocabulary::Build(vocab_instances, store);
  encoder.vocab_size = model.vocab.size();
  encoder.max_len = config.max_len;
  model.encoder = encoder;
  model.template_mode = config.template_mode;
  model.markers = config.markers;
  model.params = InitParameters(encoder);
  return model;
}

}  // namespace aged
