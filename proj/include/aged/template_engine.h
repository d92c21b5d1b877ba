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

// Query templates built from frame and FE definitions.
//
//   frame-def:  <f> Attack </f> | raw definition ... | <r> Weapon </r> , ...
//   fe-def:     <f> Attack </f> | <r> Assailant </r> | raw definition ...
//   question:   What's <r> Assailant </r> of <f> Attack </f> ?
//
// Every FE mention in a definition is wrapped in <r> ... </r>. The leftmost
// mention of an FE is its slot; later mentions are context only.

#ifndef AGED_TEMPLATE_ENGINE_H_
#define AGED_TEMPLATE_ENGINE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aged/framenet_store.h"

namespace aged {

inline constexpr std::string_view kFrameOpen = "<f>";
inline constexpr std::string_view kFrameClose = "</f>";
inline constexpr std::string_view kRoleOpen = "<r>";
inline constexpr std::string_view kRoleClose = "</r>";
inline constexpr std::string_view kTargetOpen = "<t>";
inline constexpr std::string_view kTargetClose = "</t>";
inline constexpr std::string_view kPartSeparator = "|";
inline constexpr std::string_view kListSeparator = ",";

// Which marker tokens are emitted. Turning a marker off deletes its tokens;
// slot and sentence indices are recomputed accordingly.
struct MarkerOptions {
  bool target_markers = true;       // <t> </t> around the target word
  bool frame_label_markers = true;  // <f> </f> around the frame name
  bool role_label_markers = true;   // <r> </r> around FE mentions

  bool operator==(const MarkerOptions &) const = default;
};

enum class TemplateMode { kFrameDef, kFEDef, kQuestion };

std::string_view TemplateModeName(TemplateMode mode);
// Accepts "frame-def", "fe-def" and "question".
TemplateMode ParseTemplateMode(std::string_view name);

// An FE slot: inclusive 0-based token range of the mention surface inside
// the template (markers excluded).
struct Slot {
  std::string fe;
  int start = 0;
  int end = 0;

  bool operator==(const Slot &) const = default;
};

struct DefinitionTemplate {
  TemplateMode mode = TemplateMode::kFrameDef;
  std::string frame;
  std::optional<std::string> focus_fe;  // set iff mode != kFrameDef
  std::vector<std::string> tokens;
  std::vector<Slot> slots;

  const Slot *FindSlot(const std::string &fe) const;

  bool operator==(const DefinitionTemplate &) const = default;
};

// Splits on whitespace after mapping '_' to ' ' (FE and frame names).
std::vector<std::string> TokenizeName(std::string_view name);
// Splits on whitespace.
std::vector<std::string> TokenizeText(std::string_view text);

DefinitionTemplate BuildFrameTemplate(const Frame &frame,
                                      const MarkerOptions &opts = {});
// Throws ValidationError if fe is not an FE of frame.
DefinitionTemplate BuildFETemplate(const Frame &frame, const std::string &fe,
                                   const MarkerOptions &opts = {});
DefinitionTemplate BuildQuestionTemplate(const Frame &frame,
                                         const std::string &fe,
                                         const MarkerOptions &opts = {});

// Space-joined tokens, markers included.
std::string RenderSurface(const DefinitionTemplate &tmpl);

}  // namespace aged

#endif  // AGED_TEMPLATE_ENGINE_H_
