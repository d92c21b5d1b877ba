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

#include "aged/checkpoint.h"

#include <fstream>

#include "aged/errors.h"

namespace aged {

nlohmann::ordered_json ModelToJson(const Model &model) {
  nlohmann::ordered_json config;
  config["encoder"] = model.encoder.ToJson();
  config["template_mode"] = std::string(TemplateModeName(model.template_mode));
  config["markers"] = {{"target", model.markers.target_markers},
                       {"frame_label", model.markers.frame_label_markers},
                       {"role_label", model.markers.role_label_markers}};
  nlohmann::ordered_json out;
  out["config"] = std::move(config);
  out["vocab"] = model.vocab.ToJson();
  out["params"] = model.params.ToJson();
  return out;
}

Model ModelFromJson(const nlohmann::ordered_json &json) {
  try {
    Model model;
    const auto &config = json.at("config");
    model.encoder = EncoderConfig::FromJson(config.at("encoder"));
    model.template_mode =
        ParseTemplateMode(config.at("template_mode").get<std::string>());
    const auto &markers = config.at("markers");
    model.markers.target_markers = markers.at("target").get<bool>();
    model.markers.frame_label_markers = markers.at("frame_label").get<bool>();
    model.markers.role_label_markers = markers.at("role_label").get<bool>();
    model.vocab = Vocabulary::FromJson(json.at("vocab"));
    model.params = ParameterSet::FromJson(json.at("params"));
    if (model.vocab.size() != model.encoder.vocab_size) {
      throw ValidationError("vocabulary size does not match encoder config");
    }
    return model;
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("malformed checkpoint: ") + e.what());
  }
}

void SaveCheckpoint(const Model &model, const std::filesystem::path &path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot write checkpoint " + path.string());
  out << ModelToJson(model).dump() << '\n';
  if (!out) throw RuntimeFailure("checkpoint write failed: " + path.string());
}

Model LoadCheckpoint(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open checkpoint " + path.string());
  nlohmann::ordered_json json;
  try {
    json = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError("malformed checkpoint " + path.string() + ": " +
                          e.what());
  }
  return ModelFromJson(json);
}

}  // namespace aged
