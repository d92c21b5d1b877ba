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

#include "aged/framenet_store.h"

#include <algorithm>
#include <fstream>
#include <random>

#include "aged/errors.h"
#include "aged/logging.h"

namespace aged {

using nlohmann::json;

namespace {

std::string SegmentSurface(const MarkedSegment &segment) {
  if (const auto *plain = std::get_if<PlainText>(&segment)) return plain->text;
  return std::get<FEMention>(segment).surface;
}

json MarkedTextToJson(const MarkedText &text) {
  json segments = json::array();
  for (const auto &segment : text.segments) {
    if (const auto *plain = std::get_if<PlainText>(&segment)) {
      segments.push_back({{"text", plain->text}});
    } else {
      const auto &mention = std::get<FEMention>(segment);
      segments.push_back({{"fe", mention.fe}, {"surface", mention.surface}});
    }
  }
  return segments;
}

MarkedText MarkedTextFromJson(const json &segments, const std::string &where) {
  if (!segments.is_array()) {
    throw ValidationError(where + ": definition must be an array of segments");
  }
  MarkedText text;
  for (const auto &segment : segments) {
    if (!segment.is_object()) {
      throw ValidationError(where + ": segment must be an object");
    }
    if (segment.contains("fe")) {
      text.segments.emplace_back(FEMention{segment.at("fe").get<std::string>(),
                                           segment.at("surface").get<std::string>()});
    } else if (segment.contains("text")) {
      text.segments.emplace_back(PlainText{segment.at("text").get<std::string>()});
    } else {
      throw ValidationError(where + ": segment needs \"text\" or \"fe\"");
    }
  }
  return text;
}

// Runs fn(line_text, line_number) over the non-blank lines of a file.
template <typename Fn>
void ForEachLine(const std::filesystem::path &path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    fn(line, number);
  }
}

template <typename Fn>
void WriteLines(const std::filesystem::path &path, size_t count, Fn line_at) {
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  for (size_t i = 0; i < count; ++i) out << line_at(i).dump() << '\n';
  if (!out) throw RuntimeFailure("write failed: " + path.string());
}

}  // namespace

std::string MarkedText::Surface() const {
  std::string out;
  for (const auto &segment : segments) out += SegmentSurface(segment);
  return out;
}

std::vector<std::string> MarkedText::MentionedFEs() const {
  std::vector<std::string> names;
  for (const auto &segment : segments) {
    if (const auto *mention = std::get_if<FEMention>(&segment)) {
      if (std::find(names.begin(), names.end(), mention->fe) == names.end()) {
        names.push_back(mention->fe);
      }
    }
  }
  return names;
}

const FrameElement &Frame::fe(const std::string &fe_name) const {
  auto it = fes.find(fe_name);
  if (it == fes.end()) {
    throw ValidationError("frame " + name + " has no FE \"" + fe_name + "\"");
  }
  return it->second;
}

const Argument *AnnotatedInstance::FindArgument(const std::string &fe) const {
  for (const auto &argument : arguments) {
    if (argument.fe == fe) return &argument;
  }
  return nullptr;
}

void ValidateFrame(const Frame &frame) {
  if (frame.name.empty()) throw ValidationError("frame name is empty");
  const std::string where = "frame " + frame.name;

  std::set<std::string> ordered;
  for (const auto &name : frame.fe_order) {
    if (name.empty()) throw ValidationError(where + ": empty FE name");
    if (!ordered.insert(name).second) {
      throw ValidationError(where + ": FE \"" + name +
                            "\" listed twice in fe_order");
    }
  }

  auto check_text = [&](const MarkedText &text, const std::string &owner) {
    for (const auto &segment : text.segments) {
      if (SegmentSurface(segment).empty()) {
        throw ValidationError(owner + ": empty segment surface");
      }
      if (const auto *mention = std::get_if<FEMention>(&segment)) {
        if (mention->surface.find_first_not_of(" \t\r\n_") ==
            std::string::npos) {
          throw ValidationError(owner + ": blank surface for FE \"" +
                                mention->fe + "\"");
        }
        if (!ordered.count(mention->fe)) {
          throw ValidationError(owner + ": mention of unknown FE \"" +
                                mention->fe + "\"");
        }
      }
    }
  };
  check_text(frame.definition, where);

  if (frame.fes.size() != ordered.size()) {
    throw ValidationError(where + ": fe_order does not match fes");
  }
  for (const auto &[name, element] : frame.fes) {
    if (!ordered.count(name)) {
      throw ValidationError(where + ": FE \"" + name +
                            "\" missing from fe_order");
    }
    if (element.name != name) {
      throw ValidationError(where + ": FE key \"" + name +
                            "\" does not match its name");
    }
    check_text(element.definition, where + " FE " + name);
  }
}

void FrameStore::Add(Frame frame) {
  ValidateFrame(frame);
  if (index_.count(frame.name)) {
    throw ValidationError("duplicate frame \"" + frame.name + "\"");
  }
  index_.emplace(frame.name, frames_.size());
  frames_.push_back(std::move(frame));
}

const Frame *FrameStore::Find(const std::string &name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &frames_[it->second];
}

const Frame &FrameStore::at(const std::string &name) const {
  const Frame *frame = Find(name);
  if (frame == nullptr) throw ValidationError("unknown frame \"" + name + "\"");
  return *frame;
}

size_t FrameStore::fe_count() const {
  size_t count = 0;
  for (const auto &frame : frames_) count += frame.fes.size();
  return count;
}

json FrameToJson(const Frame &frame) {
  json fes = json::object();
  for (const auto &name : frame.fe_order) {
    const auto &element = frame.fes.at(name);
    fes[name] = {{"core_type",
                  element.core_type == CoreType::kCore ? "core" : "noncore"},
                 {"definition", MarkedTextToJson(element.definition)}};
  }
  return {{"name", frame.name},
          {"definition", MarkedTextToJson(frame.definition)},
          {"fe_order", frame.fe_order},
          {"fes", fes}};
}

Frame FrameFromJson(const json &record) {
  if (!record.is_object()) throw ValidationError("frame record must be an object");
  Frame frame;
  frame.name = record.at("name").get<std::string>();
  const std::string where = "frame " + frame.name;
  frame.definition = MarkedTextFromJson(record.at("definition"), where);
  frame.fe_order = record.at("fe_order").get<std::vector<std::string>>();
  for (const auto &[name, value] : record.at("fes").items()) {
    FrameElement element;
    element.name = name;
    const std::string core = value.value("core_type", std::string("core"));
    if (core == "core") {
      element.core_type = CoreType::kCore;
    } else if (core == "noncore") {
      element.core_type = CoreType::kNonCore;
    } else {
      throw ValidationError(where + ": bad core_type \"" + core + "\"");
    }
    element.definition =
        MarkedTextFromJson(value.at("definition"), where + " FE " + name);
    frame.fes.emplace(name, std::move(element));
  }
  return frame;
}

json InstanceToJson(const AnnotatedInstance &instance) {
  json arguments = json::array();
  for (const auto &argument : instance.arguments) {
    arguments.push_back(
        {{"fe", argument.fe}, {"start", argument.start}, {"end", argument.end}});
  }
  return {{"tokens", instance.tokens},
          {"target", instance.target},
          {"frame", instance.frame},
          {"arguments", arguments}};
}

namespace {

void CheckSpans(const AnnotatedInstance &instance) {
  const int n = instance.size();
  if (n == 0) throw ValidationError("instance has no tokens");
  if (instance.target < 1 || instance.target > n) {
    throw ValidationError("target " + std::to_string(instance.target) +
                          " out of range 1.." + std::to_string(n));
  }
  std::set<std::string> seen;
  for (const auto &argument : instance.arguments) {
    if (argument.start > argument.end) {
      throw ValidationError("span error: start " +
                            std::to_string(argument.start) + " > end " +
                            std::to_string(argument.end));
    }
    if (argument.start < 1 || argument.end > n) {
      throw ValidationError("span error: [" + std::to_string(argument.start) +
                            ", " + std::to_string(argument.end) +
                            "] out of range 1.." + std::to_string(n));
    }
    if (!seen.insert(argument.fe).second) {
      throw ValidationError("FE \"" + argument.fe + "\" annotated twice");
    }
  }
}

}  // namespace

void ValidateInstance(const AnnotatedInstance &instance,
                      const FrameStore &store) {
  const Frame &frame = store.at(instance.frame);
  for (const auto &argument : instance.arguments) {
    if (!frame.HasFE(argument.fe)) {
      throw ValidationError("unknown FE \"" + argument.fe + "\" for frame " +
                            frame.name);
    }
  }
  CheckSpans(instance);
}

AnnotatedInstance ParseInstance(const json &record, LoadStats *stats) {
  if (!record.is_object()) {
    throw ValidationError("instance record must be an object");
  }
  AnnotatedInstance instance;
  instance.tokens = record.at("tokens").get<std::vector<std::string>>();
  instance.target = record.at("target").get<int>();
  instance.frame = record.at("frame").get<std::string>();
  for (const auto &value : record.value("arguments", json::array())) {
    Argument argument{value.at("fe").get<std::string>(),
                      value.at("start").get<int>(), value.at("end").get<int>()};
    auto existing = std::find_if(
        instance.arguments.begin(), instance.arguments.end(),
        [&](const Argument &a) { return a.fe == argument.fe; });
    if (existing == instance.arguments.end()) {
      instance.arguments.push_back(std::move(argument));
      continue;
    }
    // Multi-span FE: keep the leftmost span.
    if (stats != nullptr) ++stats->duplicate_fe_spans;
    if (argument.start < existing->start) *existing = std::move(argument);
  }
  CheckSpans(instance);
  return instance;
}

AnnotatedInstance InstanceFromJson(const json &record, const FrameStore &store,
                                   LoadStats *stats) {
  AnnotatedInstance instance = ParseInstance(record, stats);
  ValidateInstance(instance, store);
  return instance;
}

FrameStore LoadOntology(const std::filesystem::path &path) {
  FrameStore store;
  ForEachLine(path, [&](const std::string &line, size_t number) {
    try {
      store.Add(FrameFromJson(json::parse(line)));
    } catch (const json::exception &e) {
      throw DataError(std::string("malformed frame record: ") + e.what(), number);
    } catch (const ValidationError &e) {
      throw DataError(e.what(), number);
    }
  });
  Log().info("loaded {} frames ({} FEs) from {}", store.size(),
             store.fe_count(), path.string());
  return store;
}

namespace {

template <typename Parse>
std::vector<AnnotatedInstance> LoadInstanceLines(
    const std::filesystem::path &path, LoadStats *stats, Parse parse) {
  std::vector<AnnotatedInstance> instances;
  LoadStats local;
  ForEachLine(path, [&](const std::string &line, size_t number) {
    try {
      instances.push_back(parse(json::parse(line), &local));
    } catch (const json::exception &e) {
      throw DataError(std::string("malformed instance record: ") + e.what(),
                      number);
    } catch (const ValidationError &e) {
      throw DataError(e.what(), number);
    }
  });
  if (local.duplicate_fe_spans > 0) {
    Log().warn("{}: dropped {} extra spans of multiply annotated FEs",
               path.string(), local.duplicate_fe_spans);
  }
  if (stats != nullptr) stats->duplicate_fe_spans += local.duplicate_fe_spans;
  return instances;
}

}  // namespace

std::vector<AnnotatedInstance> LoadInstances(const std::filesystem::path &path,
                                             const FrameStore &store,
                                             LoadStats *stats) {
  return LoadInstanceLines(path, stats, [&](const json &record, LoadStats *s) {
    return InstanceFromJson(record, store, s);
  });
}

std::vector<AnnotatedInstance> LoadInstancesUnchecked(
    const std::filesystem::path &path) {
  return LoadInstanceLines(path, nullptr, [](const json &record, LoadStats *s) {
    return ParseInstance(record, s);
  });
}

void SaveOntology(const FrameStore &store, const std::filesystem::path &path) {
  std::vector<const Frame *> frames;
  for (const auto &frame : store) frames.push_back(&frame);
  WriteLines(path, frames.size(),
             [&](size_t i) { return FrameToJson(*frames[i]); });
}

void SaveInstances(const std::vector<AnnotatedInstance> &instances,
                   const std::filesystem::path &path) {
  WriteLines(path, instances.size(),
             [&](size_t i) { return InstanceToJson(instances[i]); });
}

std::vector<AnnotatedInstance> FilterByFrames(
    const std::vector<AnnotatedInstance> &instances,
    const std::set<std::string> &frame_names, FilterMode mode) {
  const bool keep = mode == FilterMode::kKeep;
  std::vector<AnnotatedInstance> out;
  for (const auto &instance : instances) {
    if ((frame_names.count(instance.frame) > 0) == keep) out.push_back(instance);
  }
  return out;
}

std::vector<AnnotatedInstance> SampleKShot(
    const std::vector<AnnotatedInstance> &instances,
    const std::set<std::string> &frame_names, size_t k, uint64_t seed) {
  std::vector<bool> retain(instances.size(), true);
  std::mt19937_64 rng(seed);
  // std::set iterates in sorted order, so the draw sequence is stable.
  for (const auto &name : frame_names) {
    std::vector<size_t> members;
    for (size_t i = 0; i < instances.size(); ++i) {
      if (instances[i].frame == name) members.push_back(i);
    }
    if (members.size() <= k) continue;
    std::shuffle(members.begin(), members.end(), rng);
    for (size_t j = k; j < members.size(); ++j) retain[members[j]] = false;
  }
  std::vector<AnnotatedInstance> out;
  for (size_t i = 0; i < instances.size(); ++i) {
    if (retain[i]) out.push_back(instances[i]);
  }
  return out;
}

}  // namespace aged
