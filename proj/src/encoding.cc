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

#include "aged/encoding.h"

#include "aged/errors.h"

namespace aged {

Vocabulary::Vocabulary() {
  for (const char *token : {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "<t>", "</t>",
                            "<f>", "</f>", "<r>", "</r>"}) {
    Add(token);
  }
}

int Vocabulary::Add(const std::string &token) {
  auto [it, inserted] = ids_.emplace(token, size());
  if (inserted) tokens_.push_back(token);
  return it->second;
}

int Vocabulary::Id(const std::string &token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnkId : it->second;
}

Vocabulary Vocabulary::Build(const std::vector<AnnotatedInstance> &instances,
                             const FrameStore &store) {
  Vocabulary vocab;
  for (const auto &instance : instances) {
    for (const auto &token : instance.tokens) vocab.Add(token);
  }
  // Template tokens: "What's", "of", "?" and separators, then every frame
  // rendered in all modes so mention surfaces and names are covered.
  if (!store.empty()) {
    for (const auto &token : {"What's", "of", "?", "|", ","}) vocab.Add(token);
  }
  for (const auto &frame : store) {
    for (const auto &token : BuildFrameTemplate(frame).tokens) vocab.Add(token);
    for (const auto &fe : frame.fe_order) {
      for (const auto &token : BuildFETemplate(frame, fe).tokens) {
        vocab.Add(token);
      }
    }
  }
  return vocab;
}

nlohmann::ordered_json Vocabulary::ToJson() const { return tokens_; }

Vocabulary Vocabulary::FromJson(const nlohmann::ordered_json &tokens) {
  Vocabulary vocab;
  const auto list = tokens.get<std::vector<std::string>>();
  if (list.size() < static_cast<size_t>(kNumReservedTokens)) {
    throw ValidationError("vocabulary is missing reserved tokens");
  }
  for (size_t i = 0; i < list.size(); ++i) {
    if (i < static_cast<size_t>(kNumReservedTokens)) {
      if (list[i] != vocab.tokens_[i]) {
        throw ValidationError("vocabulary reserved token mismatch at id " +
                              std::to_string(i));
      }
      continue;
    }
    if (vocab.Add(list[i]) != static_cast<int>(i)) {
      throw ValidationError("duplicate vocabulary token \"" + list[i] + "\"");
    }
  }
  return vocab;
}

EncodedPair Assemble(const AnnotatedInstance &instance,
                     const DefinitionTemplate &tmpl, const Vocabulary &vocab,
                     const AssembleOptions &opts) {
  if (instance.frame != tmpl.frame) {
    throw ValidationError("instance frame " + instance.frame +
                          " does not match template frame " + tmpl.frame);
  }
  EncodedPair pair;
  pair.n = instance.size();
  auto push = [&](int id, SegmentType segment) {
    pair.ids.push_back(id);
    pair.segment.push_back(segment);
  };

  push(kClsId, SegmentType::kText);
  pair.cls_pos = 0;
  pair.sentence_pos.push_back(pair.cls_pos);
  for (int i = 1; i <= pair.n; ++i) {
    const bool is_target = opts.target_markers && i == instance.target;
    if (is_target) push(vocab.Id(std::string(kTargetOpen)), SegmentType::kText);
    pair.sentence_pos.push_back(pair.length());
    push(vocab.Id(instance.tokens[i - 1]), SegmentType::kText);
    if (is_target) push(vocab.Id(std::string(kTargetClose)), SegmentType::kText);
  }
  push(kSepId, SegmentType::kText);

  const int offset = pair.length();
  for (const auto &token : tmpl.tokens) {
    push(vocab.Id(token), SegmentType::kDefinition);
  }
  push(kSepId, SegmentType::kDefinition);
  for (const auto &slot : tmpl.slots) {
    pair.slot_pos.push_back(
        SlotPosition{slot.fe, offset + slot.start, offset + slot.end});
  }

  if (pair.length() > opts.max_len) {
    throw ValidationError("assembled pair of length " +
                          std::to_string(pair.length()) + " exceeds max_len " +
                          std::to_string(opts.max_len));
  }
  return pair;
}

std::vector<SlotLabel> GoldLabels(const AnnotatedInstance &instance,
                                  const DefinitionTemplate &tmpl) {
  std::vector<SlotLabel> labels;
  labels.reserve(tmpl.slots.size());
  for (const auto &slot : tmpl.slots) {
    const Argument *argument = instance.FindArgument(slot.fe);
    labels.push_back(argument ? SlotLabel{argument->start, argument->end}
                              : SlotLabel{0, 0});
  }
  return labels;
}

}  // namespace aged
