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

// Text-definition pair assembly:
//
//   [CLS] w_1 ... <t> w_t </t> ... w_n [SEP] template tokens [SEP]
//
// Pointer candidates are the [CLS] row (no argument) plus the n sentence
// rows; markers and definition tokens are never candidates.

#ifndef AGED_ENCODING_H_
#define AGED_ENCODING_H_

#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "aged/framenet_store.h"
#include "aged/template_engine.h"

namespace aged {

inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr int kClsId = 2;
inline constexpr int kSepId = 3;
inline constexpr int kNumReservedTokens = 10;

// Word-level vocabulary. Ids 0-9 are reserved, in this order:
// [PAD] [UNK] [CLS] [SEP] <t> </t> <f> </f> <r> </r>.
class Vocabulary {
 public:
  Vocabulary();

  // Every token of the instances and of the store's names and definitions,
  // in first-occurrence order after the reserved tokens.
  static Vocabulary Build(const std::vector<AnnotatedInstance> &instances,
                          const FrameStore &store);

  // Returns the token's id, or kUnkId when unseen.
  int Id(const std::string &token) const;
  const std::string &Token(int id) const { return tokens_.at(id); }
  int size() const { return static_cast<int>(tokens_.size()); }

  // Adds a token if missing and returns its id.
  int Add(const std::string &token);

  // JSON array of tokens in id order.
  nlohmann::ordered_json ToJson() const;
  static Vocabulary FromJson(const nlohmann::ordered_json &tokens);

  bool operator==(const Vocabulary &other) const {
    return tokens_ == other.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

enum class SegmentType { kText = 0, kDefinition = 1 };

struct SlotPosition {
  std::string fe;
  int start = 0;  // inclusive positions in the assembled sequence
  int end = 0;

  bool operator==(const SlotPosition &) const = default;
};

struct EncodedPair {
  std::vector<int> ids;
  std::vector<SegmentType> segment;
  // sentence_pos[i] is the assembled position of w_i for i in 1..n;
  // sentence_pos[0] is cls_pos. Size n + 1.
  std::vector<int> sentence_pos;
  int cls_pos = 0;
  std::vector<SlotPosition> slot_pos;
  int n = 0;

  int length() const { return static_cast<int>(ids.size()); }
  // Assembled positions of the n + 1 pointer candidates.
  const std::vector<int> &candidates() const { return sentence_pos; }

  bool operator==(const EncodedPair &) const = default;
};

struct AssembleOptions {
  bool target_markers = true;
  int max_len = 256;
};

// Gold (start, end) for one slot in sentence indices; (0, 0) = no argument.
struct SlotLabel {
  int start = 0;
  int end = 0;

  bool operator==(const SlotLabel &) const = default;
};

// Builds the assembled id sequence and its index maps. Throws
// ValidationError if the frames differ or the pair exceeds max_len.
EncodedPair Assemble(const AnnotatedInstance &instance,
                     const DefinitionTemplate &tmpl, const Vocabulary &vocab,
                     const AssembleOptions &opts = {});

// One label per template slot, in slot order.
std::vector<SlotLabel> GoldLabels(const AnnotatedInstance &instance,
                                  const DefinitionTemplate &tmpl);

}  // namespace aged

#endif  // AGED_ENCODING_H_
