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

// Frame ontology and annotated instances, read from JSON Lines.
//
// Frame record:
//   {"name": str, "definition": [segment...], "fe_order": [str...],
//    "fes": {fe: {"core_type": "core"|"noncore", "definition": [segment...]}}}
// where a segment is {"text": str} or {"fe": str, "surface": str}.
//
// Instance record (1-based inclusive token indices):
//   {"tokens": [str...], "target": int, "frame": str,
//    "arguments": [{"fe": str, "start": int, "end": int}...]}

#ifndef AGED_FRAMENET_STORE_H_
#define AGED_FRAMENET_STORE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace aged {

struct PlainText {
  std::string text;
  bool operator==(const PlainText &) const = default;
};

struct FEMention {
  std::string fe;
  std::string surface;
  bool operator==(const FEMention &) const = default;
};

using MarkedSegment = std::variant<PlainText, FEMention>;

// Definition prose with inline frame-element mentions.
struct MarkedText {
  std::vector<MarkedSegment> segments;

  // Concatenation of all segment surfaces.
  std::string Surface() const;
  // FE names mentioned, in order of first appearance.
  std::vector<std::string> MentionedFEs() const;

  bool operator==(const MarkedText &) const = default;
};

enum class CoreType { kCore, kNonCore };

struct FrameElement {
  std::string name;
  CoreType core_type = CoreType::kCore;
  MarkedText definition;

  bool operator==(const FrameElement &) const = default;
};

struct Frame {
  std::string name;
  MarkedText definition;
  std::vector<std::string> fe_order;
  std::map<std::string, FrameElement> fes;

  bool HasFE(const std::string &fe) const { return fes.count(fe) > 0; }
  const FrameElement &fe(const std::string &name) const;

  bool operator==(const Frame &) const = default;
};

struct Argument {
  std::string fe;
  int start = 0;  // 1-based, inclusive
  int end = 0;

  bool operator==(const Argument &) const = default;
};

struct AnnotatedInstance {
  std::vector<std::string> tokens;
  int target = 1;  // 1-based
  std::string frame;
  std::vector<Argument> arguments;

  int size() const { return static_cast<int>(tokens.size()); }
  const Argument *FindArgument(const std::string &fe) const;

  bool operator==(const AnnotatedInstance &) const = default;
};

// Checks the structural invariants of a frame; throws ValidationError.
void ValidateFrame(const Frame &frame);

// Immutable (after loading) collection of frames, in insertion order.
class FrameStore {
 public:
  FrameStore() = default;

  // Validates and adds a frame. Throws ValidationError on duplicates or
  // invariant violations.
  void Add(Frame frame);

  const Frame *Find(const std::string &name) const;
  // Throws ValidationError for unknown frames.
  const Frame &at(const std::string &name) const;

  size_t size() const { return frames_.size(); }
  bool empty() const { return frames_.empty(); }
  size_t fe_count() const;
  std::vector<Frame>::const_iterator begin() const { return frames_.begin(); }
  std::vector<Frame>::const_iterator end() const { return frames_.end(); }

  bool operator==(const FrameStore &other) const {
    return frames_ == other.frames_;
  }

 private:
  std::vector<Frame> frames_;
  std::unordered_map<std::string, size_t> index_;
};

// Counters collected while loading instances.
struct LoadStats {
  // Extra spans dropped because an FE was annotated more than once.
  size_t duplicate_fe_spans = 0;
};

// JSON (de)serialization of individual records.
nlohmann::json FrameToJson(const Frame &frame);
Frame FrameFromJson(const nlohmann::json &record);
nlohmann::json InstanceToJson(const AnnotatedInstance &instance);

// Parses one instance record, checking only spans and target against the
// token count. When the same FE is annotated more than once, only the
// leftmost span is kept.
AnnotatedInstance ParseInstance(const nlohmann::json &record,
                                LoadStats *stats = nullptr);

// ParseInstance followed by ValidateInstance.
AnnotatedInstance InstanceFromJson(const nlohmann::json &record,
                                   const FrameStore &store,
                                   LoadStats *stats = nullptr);

// Checks an instance against the store; throws ValidationError.
void ValidateInstance(const AnnotatedInstance &instance,
                      const FrameStore &store);

FrameStore LoadOntology(const std::filesystem::path &path);
std::vector<AnnotatedInstance> LoadInstances(const std::filesystem::path &path,
                                             const FrameStore &store,
                                             LoadStats *stats = nullptr);
// Without a store: frame and FE names are not checked.
std::vector<AnnotatedInstance> LoadInstancesUnchecked(
    const std::filesystem::path &path);

void SaveOntology(const FrameStore &store, const std::filesystem::path &path);
void SaveInstances(const std::vector<AnnotatedInstance> &instances,
                   const std::filesystem::path &path);

enum class FilterMode { kKeep, kDrop };

// Keeps (or drops) exactly the instances whose frame is in frame_names.
// Order is preserved.
std::vector<AnnotatedInstance> FilterByFrames(
    const std::vector<AnnotatedInstance> &instances,
    const std::set<std::string> &frame_names, FilterMode mode);

// Keeps at most k uniformly sampled instances of every frame in frame_names
// and all instances of other frames. Order is preserved and the selection is
// a pure function of (instances, frame_names, k, seed).
std::vector<AnnotatedInstance> SampleKShot(
    const std::vector<AnnotatedInstance> &instances,
    const std::set<std::string> &frame_names, size_t k, uint64_t seed);

}  // namespace aged

#endif  // AGED_FRAMENET_STORE_H_
