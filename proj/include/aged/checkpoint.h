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

// Checkpoint file layout (one JSON document):
//
//   {"config": {"encoder": {...}, "template_mode": "frame-def",
//               "markers": {"target": true, "frame_label": true,
//                           "role_label": true}},
//    "vocab":  [token, ...],
//    "params": {name: {"shape": [...], "data": [...]}, ...}}
//
// Parameter values are written with 17 significant digits, so reloading
// reproduces every double exactly.

#ifndef AGED_CHECKPOINT_H_
#define AGED_CHECKPOINT_H_

#include <filesystem>

#include "aged/encoding.h"
#include "aged/neural_core.h"
#include "aged/template_engine.h"

namespace aged {

// Everything needed to run a trained model.
struct Model {
  EncoderConfig encoder;
  TemplateMode template_mode = TemplateMode::kFrameDef;
  MarkerOptions markers;
  Vocabulary vocab;
  ParameterSet params;

  bool operator==(const Model &) const = default;
};

nlohmann::ordered_json ModelToJson(const Model &model);
Model ModelFromJson(const nlohmann::ordered_json &json);

// Throws RuntimeFailure on I/O errors, ValidationError on malformed files.
void SaveCheckpoint(const Model &model, const std::filesystem::path &path);
Model LoadCheckpoint(const std::filesystem::path &path);

}  // namespace aged

#endif  // AGED_CHECKPOINT_H_
