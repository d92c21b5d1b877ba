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

#include "aged/template_engine.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "aged/errors.h"

namespace aged {
namespace {

// Appends template tokens and records the leftmost mention of each FE.
class TemplateWriter {
 public:
  TemplateWriter(TemplateMode mode, const Frame &frame,
                 const MarkerOptions &opts)
      : opts_(opts) {
    tmpl_.mode = mode;
    tmpl_.frame = frame.name;
  }

  void Word(std::string_view token) { tmpl_.tokens.emplace_back(token); }

  void Words(const std::vector<std::string> &tokens) {
    for (const auto &t : tokens) Word(t);
  }

  void FrameName(const std::string &name) {
    if (opts_.frame_label_markers) Word(kFrameOpen);
    Words(TokenizeName(name));
    if (opts_.frame_label_markers) Word(kFrameClose);
  }

  // Emits <r> surface </r>; the first mention of each FE becomes its slot.
  void Mention(const std::string &fe, const std::string &surface) {
    if (opts_.role_label_markers) Word(kRoleOpen);
    const int start = static_cast<int>(tmpl_.tokens.size());
    Words(TokenizeName(surface));
    const int end = static_cast<int>(tmpl_.tokens.size()) - 1;
    if (opts_.role_label_markers) Word(kRoleClose);
    if (end >= start && tmpl_.FindSlot(fe) == nullptr) {
      tmpl_.slots.push_back(Slot{fe, start, end});
    }
  }

  void Definition(const MarkedText &text) {
    for (const auto &segment : text.segments) {
      if (const auto *plain = std::get_if<PlainText>(&segment)) {
        Words(TokenizeText(plain->text));
      } else {
        const auto &mention = std::get<FEMention>(segment);
        Mention(mention.fe, mention.surface);
      }
    }
  }

  DefinitionTemplate Take() { return std::move(tmpl_); }

 private:
  MarkerOptions opts_;
  DefinitionTemplate tmpl_;
};

}  // namespace

std::string_view TemplateModeName(TemplateMode mode) {
  switch (mode) {
    case TemplateMode::kFrameDef:
      return "frame-def";
    case TemplateMode::kFEDef:
      return "fe-def";
    case TemplateMode::kQuestion:
      return "question";
  }
  return "frame-def";
}

TemplateMode ParseTemplateMode(std::string_view name) {
  if (name == "frame-def") return TemplateMode::kFrameDef;
  if (name == "fe-def") return TemplateMode::kFEDef;
  if (name == "question") return TemplateMode::kQuestion;
  throw ValidationError("unknown template mode \"" + std::string(name) + "\"");
}

const Slot *DefinitionTemplate::FindSlot(const std::string &fe) const {
  for (const auto &slot : slots) {
    if (slot.fe == fe) return &slot;
  }
  return nullptr;
}

std::vector<std::string> TokenizeText(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

std::vector<std::string> TokenizeName(std::string_view name) {
  std::string spaced(name);
  std::replace(spaced.begin(), spaced.end(), '_', ' ');
  return TokenizeText(spaced);
}

DefinitionTemplate BuildFrameTemplate(const Frame &frame,
                                      const MarkerOptions &opts) {
  TemplateWriter writer(TemplateMode::kFrameDef, frame, opts);
  writer.FrameName(frame.name);
  writer.Word(kPartSeparator);
  writer.Definition(frame.definition);
  writer.Word(kPartSeparator);

  // FE list: every FE the raw definition leaves unmentioned, in fe_order.
  const auto mentioned = frame.definition.MentionedFEs();
  bool first = true;
  for (const auto &fe : frame.fe_order) {
    if (std::find(mentioned.begin(), mentioned.end(), fe) != mentioned.end()) {
      continue;
    }
    if (!first) writer.Word(kListSeparator);
    first = false;
    writer.Mention(fe, fe);
  }
  return writer.Take();
}

DefinitionTemplate BuildFETemplate(const Frame &frame, const std::string &fe,
                                   const MarkerOptions &opts) {
  const FrameElement &element = frame.fe(fe);
  TemplateWriter writer(TemplateMode::kFEDef, frame, opts);
  writer.FrameName(frame.name);
  writer.Word(kPartSeparator);
  writer.Mention(fe, fe);
  writer.Word(kPartSeparator);
  writer.Definition(element.definition);
  auto tmpl = writer.Take();
  tmpl.focus_fe = fe;
  return tmpl;
}

DefinitionTemplate BuildQuestionTemplate(const Frame &frame,
                                         const std::string &fe,
                                         const MarkerOptions &opts) {
  frame.fe(fe);
  TemplateWriter writer(TemplateMode::kQuestion, frame, opts);
  writer.Word("What's");
  writer.Mention(fe, fe);
  writer.Word("of");
  writer.FrameName(frame.name);
  writer.Word("?");
  auto tmpl = writer.Take();
  tmpl.focus_fe = fe;
  return tmpl;
}

std::string RenderSurface(const DefinitionTemplate &tmpl) {
  std::string out;
  for (const auto &token : tmpl.tokens) {
    if (!out.empty()) out += ' ';
    out += token;
  }
  return out;
}

}  // namespace aged
