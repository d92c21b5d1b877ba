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

#include "aged/cli.h"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aged/checkpoint.h"
#include "aged/decoder_eval.h"
#include "aged/errors.h"
#include "aged/experiment.h"
#include "aged/framenet_store.h"
#include "aged/logging.h"
#include "aged/template_engine.h"
#include "aged/trainer.h"

namespace aged {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

constexpr char kResolutionHelp[] =
    "Settings resolve in this order: command-line flags, then the --config "
    "file, then built-in defaults. The config file is flat `key = value` "
    "text whose keys are flag names with '-' replaced by '_'. Unknown keys "
    "are ignored with a warning.";

std::string BundledFile(const char *name) {
  return (fs::path(AGED_DATA_DIR) / name).string();
}

std::string UtcNow() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string Trim(const std::string &s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string Unquote(const std::string &s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') &&
      s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

bool IsFlag(const CLI::Option *opt) { return opt->get_expected_min() == 0; }

std::string ConfigKey(const CLI::Option *opt) {
  std::string key = opt->get_lnames().front();
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

// Options that describe the run itself rather than its configuration.
bool IsMetaOption(const CLI::Option *opt) {
  if (opt->get_lnames().empty()) return true;
  const std::string &name = opt->get_lnames().front();
  return name == "help" || name == "config";
}

// Translates `key = value` lines into flag tokens for `sub`.
std::vector<std::string> ConfigTokens(const fs::path &path,
                                      const CLI::App &sub) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = Trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError("config line is not `key = value`", number);
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Unquote(Trim(line.substr(eq + 1)));
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    const CLI::Option *opt = sub.get_option_no_throw("--" + flag);
    if (key.empty() || opt == nullptr || IsMetaOption(opt)) {
      Log().warn("{}:{}: unknown config key '{}' ignored", path.string(),
                 number, key);
      continue;
    }
    if (IsFlag(opt)) {
      if (value == "true" || value == "1") {
        tokens.push_back("--" + flag);
      } else if (value != "false" && value != "0") {
        throw DataError("config key '" + key + "' expects true or false",
                        number);
      }
      continue;
    }
    tokens.push_back("--" + flag);
    tokens.push_back(value);
  }
  return tokens;
}

// Inserts config-file settings ahead of the user's flags so the flags win
// under the take-last policy.
std::vector<std::string> ExpandConfig(const CLI::App &app,
                                      const std::vector<std::string> &args) {
  auto sub_it = std::find_if(args.begin(), args.end(), [&](const auto &a) {
    return !a.empty() && a[0] != '-' &&
           app.get_subcommand_no_throw(a) != nullptr;
  });
  if (sub_it == args.end()) return args;
  const CLI::App &sub = *app.get_subcommand_no_throw(*sub_it);
  std::string config;
  for (auto it = sub_it + 1; it != args.end(); ++it) {
    if (*it == "--config" && it + 1 != args.end()) config = *(it + 1);
    if (it->rfind("--config=", 0) == 0) config = it->substr(9);
  }
  if (config.empty()) return args;
  std::vector<std::string> out(args.begin(), sub_it + 1);
  for (auto &t : ConfigTokens(config, sub)) out.push_back(std::move(t));
  out.insert(out.end(), sub_it + 1, args.end());
  return out;
}

std::map<std::string, std::string> ResolvedConfig(const CLI::App &sub) {
  std::map<std::string, std::string> resolved;
  for (const CLI::Option *opt : sub.get_options()) {
    if (IsMetaOption(opt)) continue;
    std::string value;
    if (IsFlag(opt)) {
      value = opt->count() > 0 ? "true" : "false";
    } else if (opt->count() > 0) {
      const auto &results = opt->reduced_results();
      for (size_t i = 0; i < results.size(); ++i) {
        value += (i ? "," : "") + results[i];
      }
    } else {
      value = opt->get_default_str();
    }
    resolved[ConfigKey(opt)] = value;
  }
  return resolved;
}

void RequireWritable(const std::vector<fs::path> &outputs, bool force) {
  for (const auto &path : outputs) {
    if (!force && fs::exists(path)) {
      throw ValidationError(path.string() +
                            " exists; pass --force to overwrite");
    }
  }
}

class RunManifest {
 public:
  RunManifest(std::string command, const CLI::App &sub, uint64_t seed,
              fs::path path)
      : command_(std::move(command)),
        config_(ResolvedConfig(sub)),
        seed_(seed),
        path_(std::move(path)),
        started_(UtcNow()) {}

  void AddInput(const fs::path &path) {
    inputs_[path.string()] = FileDigest(path);
  }

  void Write(bool finished) const {
    ojson out;
    out["command"] = command_;
    out["config"] = config_;
    out["inputs"] = inputs_;
    out["seed"] = seed_;
    out["version"] = AGED_VERSION;
    out["started_at"] = started_;
    out["finished_at"] = finished ? ojson(UtcNow()) : ojson();
    std::ofstream file(path_);
    if (!file) throw RuntimeFailure("cannot write " + path_.string());
    file << out.dump(2) << "\n";
  }

  const fs::path &path() const { return path_; }

 private:
  std::string command_;
  std::map<std::string, std::string> config_;
  std::map<std::string, std::string> inputs_;
  uint64_t seed_;
  fs::path path_;
  std::string started_;
};

fs::path Beside(const fs::path &artifact, const std::string &suffix) {
  return fs::path(artifact.string() + suffix);
}

fs::path BestCheckpointPath(const fs::path &checkpoint) {
  return checkpoint.parent_path() /
         (checkpoint.stem().string() + ".best" +
          checkpoint.extension().string());
}

struct CommonFlags {
  std::string config;
  bool force = false;
  int workers = 1;
  std::string manifest;
};

void AddCommonFlags(CLI::App *sub, CommonFlags &f) {
  sub->add_option("--config", f.config, "flat key = value settings file");
  sub->add_flag("--force", f.force, "overwrite existing outputs");
  sub->add_option("--workers", f.workers, "worker threads")
      ->check(CLI::PositiveNumber);
}

struct ModelFlags {
  std::string mode = "frame-def";
  bool augment_fe_defs = false;
  bool no_target_markers = false;
  bool no_label_markers = false;
  int epochs = 200;
  int batch_size = 8;
  double lr = 1e-3;
  uint64_t seed = 7;
  int d_model = 32;
  int layers = 2;
  int heads = 4;
  int d_ff = 128;
  int max_len = 256;
  std::string dtype = "f32";
  double dropout = 0.0;
  double clip_norm = 1.0;
};

void AddModelFlags(CLI::App *sub, ModelFlags &f) {
  sub->add_option("--mode", f.mode, "template mode")
      ->check(CLI::IsMember({"frame-def", "question"}));
  sub->add_flag("--augment-fe-defs", f.augment_fe_defs,
                "add one FE-definition example per gold argument");
  sub->add_flag("--no-target-markers", f.no_target_markers,
                "omit <t> </t> around the target");
  sub->add_flag("--no-label-markers", f.no_label_markers,
                "omit <f>/<r> label markers in templates");
  sub->add_option("--epochs", f.epochs)->check(CLI::NonNegativeNumber);
  sub->add_option("--batch-size", f.batch_size)->check(CLI::PositiveNumber);
  sub->add_option("--lr", f.lr, "Adam learning rate");
  sub->add_option("--seed", f.seed, "initialization and shuffling seed");
  sub->add_option("--d-model", f.d_model)->check(CLI::PositiveNumber);
  sub->add_option("--layers", f.layers)->check(CLI::PositiveNumber);
  sub->add_option("--heads", f.heads)->check(CLI::PositiveNumber);
  sub->add_option("--d-ff", f.d_ff)->check(CLI::PositiveNumber);
  sub->add_option("--max-len", f.max_len)->check(CLI::PositiveNumber);
  sub->add_option("--dtype", f.dtype)->check(CLI::IsMember({"f32", "f64"}));
  sub->add_option("--dropout", f.dropout);
  sub->add_option("--clip-norm", f.clip_norm, "<= 0 disables clipping");
}

EncoderConfig ToEncoderConfig(const ModelFlags &f) {
  EncoderConfig c;
  c.d_model = f.d_model;
  c.n_layers = f.layers;
  c.n_heads = f.heads;
  c.d_ff = f.d_ff;
  c.max_len = f.max_len;
  c.seed = f.seed;
  c.dtype = f.dtype == "f64" ? DType::kF64 : DType::kF32;
  c.dropout = f.dropout;
  return c;
}

TrainConfig ToTrainConfig(const ModelFlags &f, int workers) {
  TrainConfig c;
  c.epochs = f.epochs;
  c.batch_size = f.batch_size;
  c.learning_rate = f.lr;
  c.seed = f.seed;
  c.augment_fe_defs = f.augment_fe_defs;
  c.markers.target_markers = !f.no_target_markers;
  c.markers.frame_label_markers = !f.no_label_markers;
  c.markers.role_label_markers = !f.no_label_markers;
  c.template_mode = ParseTemplateMode(f.mode);
  c.max_len = f.max_len;
  c.workers = workers;
  c.clip_norm = f.clip_norm;
  return c;
}

void WriteJsonFile(const fs::path &path, const ojson &json) {
  std::ofstream file(path);
  if (!file) throw RuntimeFailure("cannot write " + path.string());
  file << json.dump(2) << "\n";
}

// ---- ingest ----------------------------------------------------------------

struct IngestFlags {
  CommonFlags common;
  std::string frames = BundledFile("frames.jsonl");
  std::string instances;
};

int RunIngest(const CLI::App &sub, const IngestFlags &f, std::ostream &out) {
  RunManifest manifest("ingest", sub, 0, f.common.manifest);
  manifest.AddInput(f.frames);
  if (!f.instances.empty()) manifest.AddInput(f.instances);
  manifest.Write(false);

  const FrameStore store = LoadOntology(f.frames);
  ojson counts;
  counts["frames"] = store.size();
  counts["frame_elements"] = store.fe_count();
  if (!f.instances.empty()) {
    LoadStats stats;
    const auto instances = LoadInstances(f.instances, store, &stats);
    size_t arguments = 0;
    for (const auto &i : instances) arguments += i.arguments.size();
    counts["instances"] = instances.size();
    counts["arguments"] = arguments;
    counts["duplicate_fe_spans"] = stats.duplicate_fe_spans;
  }
  out << counts.dump() << "\n";
  manifest.Write(true);
  return 0;
}

// ---- template --------------------------------------------------------------

struct TemplateFlags {
  CommonFlags common;
  std::string frames = BundledFile("frames.jsonl");
  std::string frame = "Attack";
  std::string fe;
  std::string mode = "frame-def";
  bool no_label_markers = false;
};

int RunTemplate(const CLI::App &sub, const TemplateFlags &f,
                std::ostream &out) {
  RunManifest manifest("template", sub, 0, f.common.manifest);
  manifest.AddInput(f.frames);
  manifest.Write(false);

  const FrameStore store = LoadOntology(f.frames);
  const Frame &frame = store.at(f.frame);
  MarkerOptions markers;
  markers.frame_label_markers = !f.no_label_markers;
  markers.role_label_markers = !f.no_label_markers;
  const TemplateMode mode = ParseTemplateMode(f.mode);
  if (mode != TemplateMode::kFrameDef && f.fe.empty()) {
    throw ValidationError("--fe is required for mode " + f.mode);
  }
  DefinitionTemplate tmpl;
  switch (mode) {
    case TemplateMode::kFrameDef:
      tmpl = BuildFrameTemplate(frame, markers);
      break;
    case TemplateMode::kFEDef:
      tmpl = BuildFETemplate(frame, f.fe, markers);
      break;
    case TemplateMode::kQuestion:
      tmpl = BuildQuestionTemplate(frame, f.fe, markers);
      break;
  }
  out << RenderSurface(tmpl) << "\n";
  for (const auto &slot : tmpl.slots) {
    out << "  slot " << slot.fe << ": tokens " << slot.start << ".."
        << slot.end << "\n";
  }
  manifest.Write(true);
  return 0;
}

// ---- train -----------------------------------------------------------------

struct TrainFlags {
  CommonFlags common;
  ModelFlags model;
  std::string frames = BundledFile("frames.jsonl");
  std::string train = BundledFile("train.jsonl");
  std::string dev;
  std::string checkpoint;
  int eval_every = 1;
};

int RunTrain(const CLI::App &sub, const TrainFlags &f, std::ostream &out) {
  const fs::path checkpoint = f.checkpoint;
  const fs::path report_path = Beside(checkpoint, ".report.json");
  std::vector<fs::path> outputs = {checkpoint, report_path,
                                   Beside(checkpoint, ".manifest.json")};
  if (!f.dev.empty()) outputs.push_back(BestCheckpointPath(checkpoint));
  RequireWritable(outputs, f.common.force);

  TrainConfig config = ToTrainConfig(f.model, f.common.workers);
  config.checkpoint_path = checkpoint;
  config.eval_every = f.dev.empty() ? 0 : f.eval_every;
  config.Validate();
  const EncoderConfig encoder = ToEncoderConfig(f.model);

  RunManifest manifest("train", sub, config.seed, outputs[2]);
  manifest.AddInput(f.frames);
  manifest.AddInput(f.train);
  if (!f.dev.empty()) manifest.AddInput(f.dev);

  const FrameStore store = LoadOntology(f.frames);
  const auto train = LoadInstances(f.train, store);
  std::vector<AnnotatedInstance> dev;
  if (!f.dev.empty()) dev = LoadInstances(f.dev, store);

  Model model = NewModel(train, store, encoder, config);
  const auto stream = BuildTrainingStream(train, store, model.vocab, config);
  manifest.Write(false);

  DevEvaluator evaluator;
  if (!dev.empty()) {
    evaluator = [&](const Model &m) {
      const Predictor predictor(m);
      const Metrics metrics =
          Evaluate(predictor.PredictAll(dev, store, config.workers), dev);
      return DevScore{0, metrics.precision, metrics.recall, metrics.f1};
    };
  }
  const TrainingReport report = Train(stream, model, config, evaluator);

  ojson report_json = report.ToJson();
  report_json["train_config"] = config.ToJson();
  report_json["encoder"] = model.encoder.ToJson();
  WriteJsonFile(report_path, report_json);
  manifest.Write(true);

  out << "trained " << report.steps << " steps over " << report.stream_size
      << " examples; final loss "
      << (report.epoch_loss.empty() ? 0.0 : report.epoch_loss.back())
      << "; checkpoint " << checkpoint.string() << "\n";
  return 0;
}

// ---- predict ---------------------------------------------------------------

struct PredictFlags {
  CommonFlags common;
  std::string frames = BundledFile("frames.jsonl");
  std::string checkpoint;
  std::string instances = BundledFile("test.jsonl");
  std::string out;
};

int RunPredict(const CLI::App &sub, const PredictFlags &f, std::ostream &out) {
  const fs::path out_path = f.out;
  const fs::path manifest_path = Beside(out_path, ".manifest.json");
  RequireWritable({out_path, manifest_path}, f.common.force);

  RunManifest manifest("predict", sub, 0, manifest_path);
  manifest.AddInput(f.frames);
  manifest.AddInput(f.checkpoint);
  manifest.AddInput(f.instances);
  manifest.Write(false);

  const FrameStore store = LoadOntology(f.frames);
  const auto instances = LoadInstances(f.instances, store);
  const Model model = LoadCheckpoint(f.checkpoint);
  const Predictor predictor(model);
  const auto predictions =
      predictor.PredictAll(instances, store, f.common.workers);

  std::ofstream file(out_path);
  if (!file) throw RuntimeFailure("cannot write " + out_path.string());
  for (const auto &p : predictions) file << p.ToJson().dump() << "\n";
  file.close();
  manifest.Write(true);
  out << "wrote " << predictions.size() << " predictions to "
      << out_path.string() << "\n";
  return 0;
}

// ---- eval ------------------------------------------------------------------

struct EvalFlags {
  CommonFlags common;
  std::string gold = BundledFile("test.jsonl");
  std::string pred;
  std::string frames;
};

std::vector<InstancePrediction> LoadPredictions(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::vector<InstancePrediction> out;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (Trim(line).empty()) continue;
    try {
      out.push_back(InstancePrediction::FromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception &e) {
      throw DataError(std::string("malformed prediction: ") + e.what(),
                      number);
    } catch (const ValidationError &e) {
      throw DataError(e.what(), number);
    }
  }
  return out;
}

int RunEval(const CLI::App &sub, const EvalFlags &f, std::ostream &out) {
  RunManifest manifest("eval", sub, 0, f.common.manifest);
  manifest.AddInput(f.gold);
  manifest.AddInput(f.pred);
  if (!f.frames.empty()) manifest.AddInput(f.frames);
  manifest.Write(false);

  const auto gold = f.frames.empty()
                        ? LoadInstancesUnchecked(f.gold)
                        : LoadInstances(f.gold, LoadOntology(f.frames));
  const auto predictions = LoadPredictions(f.pred);
  Metrics metrics;
  try {
    metrics = Evaluate(predictions, gold);
  } catch (const AlignmentError &e) {
    throw ValidationError("misaligned at instance " +
                          std::to_string(e.index() + 1) + ": " + e.what());
  }
  out << metrics.ToJson().dump() << "\n";
  manifest.Write(true);
  return 0;
}

// ---- experiment ------------------------------------------------------------

struct ExperimentFlags {
  CommonFlags common;
  ModelFlags model;
  std::string frames = BundledFile("frames.jsonl");
  std::string train = BundledFile("train.jsonl");
  std::string test = BundledFile("test.jsonl");
  std::vector<std::string> holdout = {"Attack"};
  std::string k = "0";
  uint64_t sample_seed = 0;
  bool compare_modes = false;
  bool ablate_target_markers = false;
  std::string out;
};

size_t ParseK(const std::string &text) {
  if (text == "full") return kFullShot;
  try {
    size_t used = 0;
    const long long value = std::stoll(text, &used);
    if (used == text.size() && value >= 0) return static_cast<size_t>(value);
  } catch (const std::exception &) {
  }
  throw ValidationError("--k must be a non-negative integer or 'full', got '" +
                        text + "'");
}

int RunExperiment(const CLI::App &sub, const ExperimentFlags &f,
                  std::ostream &out) {
  const size_t k = ParseK(f.k);
  fs::path manifest_path = f.common.manifest;
  if (!f.out.empty()) {
    manifest_path = Beside(f.out, ".manifest.json");
    RequireWritable({f.out, manifest_path}, f.common.force);
  }

  HoldoutSetup setup;
  setup.frames = {f.holdout.begin(), f.holdout.end()};
  setup.k = k;
  setup.sample_seed = f.sample_seed;
  setup.encoder = ToEncoderConfig(f.model);
  setup.train = ToTrainConfig(f.model, f.common.workers);
  setup.train.Validate();
  setup.encoder.Validate();

  RunManifest manifest("experiment", sub, setup.train.seed, manifest_path);
  manifest.AddInput(f.frames);
  manifest.AddInput(f.train);
  manifest.AddInput(f.test);

  const FrameStore store = LoadOntology(f.frames);
  const auto train = LoadInstances(f.train, store);
  const auto test = LoadInstances(f.test, store);
  for (const auto &name : setup.frames) store.at(name);
  manifest.Write(false);

  ExperimentReport report;
  report.held_out_frames = setup.frames;
  report.k = k;
  report.sample_seed = f.sample_seed;
  report.runs.push_back(RunHoldoutExperiment(
      train, test, store, setup,
      std::string(TemplateModeName(setup.train.template_mode))));
  if (f.compare_modes) {
    HoldoutSetup other = setup;
    other.train.template_mode =
        setup.train.template_mode == TemplateMode::kQuestion
            ? TemplateMode::kFrameDef
            : TemplateMode::kQuestion;
    report.runs.push_back(RunHoldoutExperiment(
        train, test, store, other,
        std::string(TemplateModeName(other.train.template_mode))));
  }
  if (f.ablate_target_markers) {
    HoldoutSetup ablated = setup;
    ablated.train.markers.target_markers = false;
    report.runs.push_back(
        RunHoldoutExperiment(train, test, store, ablated,
                             report.runs.front().label + " w/o target markers"));
  }

  const std::string text = report.ToJson().dump(2);
  if (f.out.empty()) {
    out << text << "\n";
  } else {
    std::ofstream file(f.out);
    if (!file) throw RuntimeFailure("cannot write " + f.out);
    file << text << "\n";
    for (const auto &run : report.runs) {
      out << run.label << ": overall F1 " << run.overall.f1
          << ", held-out F1 " << run.held_out.f1 << "\n";
    }
  }
  manifest.Write(true);
  return 0;
}

std::string DefaultManifest(const std::string &command) {
  return "aged-" + command + ".manifest.json";
}

}  // namespace

std::string FileDigest(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw RuntimeFailure("SHA-256 unavailable");
  }
  std::vector<char> buffer(1 << 16);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    if (in.gcount() > 0) {
      EVP_DigestUpdate(ctx.get(), buffer.data(),
                       static_cast<size_t>(in.gcount()));
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &length);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

int Dispatch(const std::vector<std::string> &args, std::ostream &out,
             std::ostream &err) {
  CLI::App app{"Frame-semantic role labeling with definitions as queries."};
  app.name("aged");
  app.set_version_flag("--version", AGED_VERSION);
  app.require_subcommand(1, 1);
  app.failure_message(CLI::FailureMessage::help);
  app.footer(kResolutionHelp);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
      ->always_capture_default();

  IngestFlags ingest;
  ingest.common.manifest = DefaultManifest("ingest");
  auto *ingest_cmd = app.add_subcommand("ingest", "validate data, print counts");
  AddCommonFlags(ingest_cmd, ingest.common);
  ingest_cmd->add_option("--frames", ingest.frames, "frame ontology JSONL");
  ingest_cmd->add_option("--instances", ingest.instances,
                         "annotated instances JSONL");
  ingest_cmd->add_option("--manifest", ingest.common.manifest);

  TemplateFlags tmpl;
  tmpl.common.manifest = DefaultManifest("template");
  auto *template_cmd = app.add_subcommand("template", "render a template");
  AddCommonFlags(template_cmd, tmpl.common);
  template_cmd->add_option("--frames", tmpl.frames, "frame ontology JSONL");
  template_cmd->add_option("--frame", tmpl.frame, "frame name");
  template_cmd->add_option("--fe", tmpl.fe, "frame element (fe-def, question)");
  template_cmd->add_option("--mode", tmpl.mode)
      ->check(CLI::IsMember({"frame-def", "fe-def", "question"}));
  template_cmd->add_flag("--no-label-markers", tmpl.no_label_markers);
  template_cmd->add_option("--manifest", tmpl.common.manifest);

  TrainFlags train;
  auto *train_cmd = app.add_subcommand("train", "train a model from scratch");
  AddCommonFlags(train_cmd, train.common);
  train_cmd->add_option("--frames", train.frames, "frame ontology JSONL");
  train_cmd->add_option("--train", train.train, "training instances JSONL");
  train_cmd->add_option("--dev", train.dev, "dev instances for best-F1 saving");
  train_cmd->add_option("--eval-every", train.eval_every, "epochs between dev"
                        " evaluations")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--checkpoint", train.checkpoint, "output checkpoint")
      ->required();
  AddModelFlags(train_cmd, train.model);

  PredictFlags predict;
  auto *predict_cmd = app.add_subcommand("predict", "predict argument spans");
  AddCommonFlags(predict_cmd, predict.common);
  predict_cmd->add_option("--frames", predict.frames, "frame ontology JSONL");
  predict_cmd->add_option("--checkpoint", predict.checkpoint)->required();
  predict_cmd->add_option("--instances", predict.instances, "instances JSONL");
  predict_cmd->add_option("--out", predict.out, "predictions JSONL")
      ->required();

  EvalFlags eval;
  eval.common.manifest = DefaultManifest("eval");
  auto *eval_cmd = app.add_subcommand("eval", "score predictions");
  AddCommonFlags(eval_cmd, eval.common);
  eval_cmd->add_option("--gold", eval.gold, "gold instances JSONL");
  eval_cmd->add_option("--pred", eval.pred, "predictions JSONL")->required();
  eval_cmd->add_option("--frames", eval.frames,
                       "frame ontology; validates gold when given");
  eval_cmd->add_option("--manifest", eval.common.manifest);

  ExperimentFlags experiment;
  experiment.common.manifest = DefaultManifest("experiment");
  auto *experiment_cmd =
      app.add_subcommand("experiment", "k-shot holdout experiment");
  AddCommonFlags(experiment_cmd, experiment.common);
  experiment_cmd->add_option("--frames", experiment.frames);
  experiment_cmd->add_option("--train", experiment.train);
  experiment_cmd->add_option("--test", experiment.test);
  experiment_cmd->add_option("--holdout", experiment.holdout,
                             "held-out frames")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  experiment_cmd->add_option("--k", experiment.k,
                             "training instances kept per held-out frame, "
                             "or 'full'");
  experiment_cmd->add_option("--sample-seed", experiment.sample_seed);
  experiment_cmd->add_flag("--compare-modes", experiment.compare_modes,
                           "also run the other template mode");
  experiment_cmd->add_flag("--ablate-target-markers",
                           experiment.ablate_target_markers,
                           "also run without target markers");
  experiment_cmd->add_option("--out", experiment.out,
                             "report path (default: stdout)");
  experiment_cmd->add_option("--manifest", experiment.common.manifest,
                             "manifest path when --out is not given");
  AddModelFlags(experiment_cmd, experiment.model);

  try {
    std::vector<std::string> argv = ExpandConfig(app, args);
    std::reverse(argv.begin(), argv.end());
    try {
      app.parse(argv);
    } catch (const CLI::ParseError &e) {
      return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    if (ingest_cmd->parsed()) return RunIngest(*ingest_cmd, ingest, out);
    if (template_cmd->parsed()) return RunTemplate(*template_cmd, tmpl, out);
    if (train_cmd->parsed()) return RunTrain(*train_cmd, train, out);
    if (predict_cmd->parsed()) return RunPredict(*predict_cmd, predict, out);
    if (eval_cmd->parsed()) return RunEval(*eval_cmd, eval, out);
    if (experiment_cmd->parsed()) {
      return RunExperiment(*experiment_cmd, experiment, out);
    }
    err << app.help();
    return 1;
  } catch (const ValidationError &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const RuntimeFailure &e) {
    err << "runtime error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    err << "runtime error: " << e.what() << "\n";
    return 2;
  }
}

int Dispatch(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return Dispatch(args, std::cout, std::cerr);
}

}  // namespace aged
