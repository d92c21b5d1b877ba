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

// A small synthetic FrameNet-style corpus: four frames (Attack, Getting,
// Motion, Commerce_buy) with hand-written definitions and sentences produced
// from seeded patterns. The files under data/mini_framenet/ are generated
// from these functions.

#ifndef AGED_MINI_FRAMENET_H_
#define AGED_MINI_FRAMENET_H_

#include <filesystem>
#include <string>
#include <vector>

#include "aged/framenet_store.h"

namespace aged::mini_framenet {

FrameStore Ontology();

// Instances of one split: "train", "dev" or "test".
std::vector<AnnotatedInstance> Split(const std::string &name);

// Writes frames.jsonl, train.jsonl, dev.jsonl and test.jsonl into dir.
void WriteCorpus(const std::filesystem::path &dir);

}  // namespace aged::mini_framenet

#endif  // AGED_MINI_FRAMENET_H_
