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

#include "aged/mini_framenet.h"

#include <map>
#include <random>
#include <sstream>

#include "aged/errors.h"

namespace aged::mini_framenet {
namespace {

// Definition pieces: plain strings, or Mention(...) for an FE mention.
struct Piece {
  std::string text;
  bool is_mention = false;
};

Piece M(const std::string &fe) { return Piece{fe, true}; }
Piece T(const std::string &text) { return Piece{text, false}; }

MarkedText Def(std::initializer_list<Piece> pieces) {
  MarkedText text;
  for (const auto &piece : pieces) {
    if (piece.is_mention) {
      text.segments.emplace_back(FEMention{piece.text, piece.text});
    } else {
      text.segments.emplace_back(PlainText{piece.text});
    }
  }
  return text;
}

void AddFE(Frame &frame, const std::string &name, CoreType core,
           MarkedText definition) {
  frame.fe_order.push_back(name);
  frame.fes.emplace(name, FrameElement{name, core, std::move(definition)});
}

constexpr CoreType kCore = CoreType::kCore;
constexpr CoreType kNonCore = CoreType::kNonCore;

Frame AttackFrame() {
  Frame f;
  f.name = "Attack";
  f.definition = Def({T("An "), M("Assailant"), T(" physically attacks a "),
                      M("Victim"), T(" with the intent to harm them . The "),
                      M("Assailant"), T(" may act with a "), M("Purpose"),
                      T(" .")});
  AddFE(f, "Assailant", kCore,
        Def({T("The person or group that attacks the "), M("Victim"), T(" .")}));
  AddFE(f, "Victim", kCore,
        Def({T("The being or entity that is attacked by the "), M("Assailant"),
             T(" .")}));
  AddFE(f, "Weapon", kCore,
        Def({T("The instrument used by the "), M("Assailant"),
             T(" to injure the "), M("Victim"), T(" .")}));
  AddFE(f, "Purpose", kNonCore,
        Def({T("The goal the "), M("Assailant"), T(" wants to achieve .")}));
  AddFE(f, "Time", kNonCore, Def({T("When the attack takes place .")}));
  return f;
}

Frame GettingFrame() {
  Frame f;
  f.name = "Getting";
  f.definition = Def({T("A "), M("Recipient"), T(" starts to possess a "),
                      M("Theme"), T(" that comes from a "), M("Source"),
                      T(" .")});
  AddFE(f, "Recipient", kCore,
        Def({T("The entity that ends up in possession of the "), M("Theme"),
             T(" .")}));
  AddFE(f, "Theme", kCore,
        Def({T("The object that the "), M("Recipient"), T(" gets .")}));
  AddFE(f, "Source", kCore,
        Def({T("The earlier possessor of the "), M("Theme"), T(" .")}));
  AddFE(f, "Manner", kNonCore,
        Def({T("The way in which the "), M("Recipient"), T(" gets the "),
             M("Theme"), T(" .")}));
  return f;
}

Frame MotionFrame() {
  Frame f;
  f.name = "Motion";
  f.definition = Def({T("Some "), M("Theme"), T(" starts out at a "),
                      M("Source"), T(" and ends up at a "), M("Goal"),
                      T(" .")});
  AddFE(f, "Theme", kCore, Def({T("The entity that changes location .")}));
  AddFE(f, "Source", kCore,
        Def({T("The place where the "), M("Theme"), T(" begins to move .")}));
  AddFE(f, "Goal", kCore,
        Def({T("The place where the "), M("Theme"), T(" ends up .")}));
  AddFE(f, "Path", kCore,
        Def({T("The route the "), M("Theme"), T(" follows between "),
             M("Source"), T(" and "), M("Goal"), T(" .")}));
  AddFE(f, "Time", kNonCore, Def({T("When the motion occurs .")}));
  return f;
}

Frame CommerceBuyFrame() {
  Frame f;
  f.name = "Commerce_buy";
  f.definition = Def({T("The "), M("Buyer"), T(" gives "), M("Money"),
                      T(" to the "), M("Seller"), T(" and in exchange gets the "),
                      M("Goods"), T(" .")});
  AddFE(f, "Buyer", kCore,
        Def({T("The person who wants the "), M("Goods"), T(" .")}));
  AddFE(f, "Goods", kCore,
        Def({T("Anything that is exchanged for "), M("Money"), T(" .")}));
  AddFE(f, "Seller", kCore,
        Def({T("The individual who hands over the "), M("Goods"),
             T(" to the "), M("Buyer"), T(" .")}));
  AddFE(f, "Money", kCore,
        Def({T("The thing given in exchange for the "), M("Goods"), T(" .")}));
  return f;
}

struct FramePatterns {
  std::string frame;
  std::vector<std::string> targets;
  // "{FE}" = filler, "@" = target, "[ ... ]" = optional group.
  std::vector<std::string> patterns;
  std::map<std::string, std::vector<std::string>> fillers;
};

const std::vector<FramePatterns> &Patterns() {
  static const std::vector<FramePatterns> patterns = {
      {"Attack",
       {"attacked", "invaded", "raided", "ambushed"},
       {"{Assailant} @ {Victim} [ with {Weapon} ] [ at {Time} ]",
        "{Victim} was @ by {Assailant} [ at {Time} ]",
        "[ at {Time} ] {Assailant} @ {Victim} [ to {Purpose} ]"},
       {{"Assailant", {"the rebels", "a small army", "the soldiers",
                       "two men", "the pirates", "an angry mob"}},
        {"Victim", {"the village", "the convoy", "the embassy",
                    "a police station", "the town", "the guards"}},
        {"Weapon", {"rifles", "heavy artillery", "knives", "a truck bomb",
                    "stones"}},
        {"Purpose", {"seize the gold", "punish the traitors",
                     "free the prisoners"}},
        {"Time", {"dawn", "midnight", "noon", "night"}}}},
      {"Getting",
       {"got", "received", "obtained", "acquired"},
       {"{Recipient} [ {Manner} ] @ {Theme} [ from {Source} ]",
        "{Theme} was @ by {Recipient} [ from {Source} ]"},
       {{"Recipient", {"the museum", "my sister", "the students",
                       "a local charity", "the winner"}},
        {"Theme", {"a letter", "the prize", "a new car", "ancient coins",
                   "the package"}},
        {"Source", {"the mayor", "an old friend", "the bank", "a stranger"}},
        {"Manner", {"quickly", "eagerly", "secretly"}}}},
      {"Motion",
       {"moved", "travelled", "went", "drifted"},
       {"{Theme} @ from {Source} to {Goal} [ through {Path} ]",
        "[ at {Time} ] {Theme} @ [ through {Path} ] to {Goal}"},
       {{"Theme", {"the train", "the refugees", "a herd of cattle",
                   "the ship", "the travellers"}},
        {"Source", {"the station", "the north", "the old harbor", "the city"}},
        {"Goal", {"the coast", "the capital", "a safe camp", "the border"}},
        {"Path", {"the valley", "the mountains", "a narrow tunnel"}},
        {"Time", {"dawn", "midnight", "noon", "night"}}}},
      {"Commerce_buy",
       {"bought", "purchased"},
       {"{Buyer} @ {Goods} [ from {Seller} ] [ for {Money} ]",
        "{Goods} was @ by {Buyer} [ for {Money} ]"},
       {{"Buyer", {"the farmer", "my uncle", "the company",
                   "a young couple"}},
        {"Goods", {"a house", "fresh bread", "two horses",
                   "the old factory"}},
        {"Seller", {"the baker", "a dealer", "the bank", "the neighbors"}},
        {"Money", {"ten dollars", "a fortune", "cash",
                   "three gold coins"}}}},
  };
  return patterns;
}

std::vector<std::string> Words(const std::string &text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

template <typename Rng>
size_t Pick(Rng &rng, size_t count) {
  return std::uniform_int_distribution<size_t>(0, count - 1)(rng);
}

template <typename Rng>
AnnotatedInstance Realize(const FramePatterns &fp, const std::string &pattern,
                          Rng &rng) {
  AnnotatedInstance instance;
  instance.frame = fp.frame;
  bool skipping = false;
  for (const auto &piece : Words(pattern)) {
    if (piece == "[") {
      skipping = std::bernoulli_distribution(0.5)(rng) == false;
      continue;
    }
    if (piece == "]") {
      skipping = false;
      continue;
    }
    if (skipping) continue;
    if (piece == "@") {
      instance.tokens.push_back(fp.targets[Pick(rng, fp.targets.size())]);
      instance.target = static_cast<int>(instance.tokens.size());
    } else if (piece.front() == '{') {
      const std::string fe = piece.substr(1, piece.size() - 2);
      const auto &options = fp.fillers.at(fe);
      const int start = static_cast<int>(instance.tokens.size()) + 1;
      for (auto &w : Words(options[Pick(rng, options.size())])) {
        instance.tokens.push_back(std::move(w));
      }
      instance.arguments.push_back(
          Argument{fe, start, static_cast<int>(instance.tokens.size())});
    } else {
      instance.tokens.push_back(piece);
    }
  }
  return instance;
}

// Sentences with two targets, annotated once per target.
std::vector<AnnotatedInstance> TwoTargetInstances(const std::string &split) {
  std::vector<AnnotatedInstance> out;
  auto add = [&](const std::string &sentence, int attack_target,
                 std::vector<Argument> attack_args, int buy_target,
                 std::vector<Argument> buy_args) {
    const auto tokens = Words(sentence);
    out.push_back({tokens, attack_target, "Attack", std::move(attack_args)});
    out.push_back({tokens, buy_target, "Commerce_buy", std::move(buy_args)});
  };
  if (split == "train") {
    add("the rebels attacked the village and bought food from the farmers", 3,
        {{"Assailant", 1, 2}, {"Victim", 4, 5}}, 7,
        {{"Buyer", 1, 2}, {"Goods", 8, 8}, {"Seller", 10, 11}});
    add("the pirates raided the convoy and purchased rifles for cash", 3,
        {{"Assailant", 1, 2}, {"Victim", 4, 5}}, 7,
        {{"Buyer", 1, 2}, {"Goods", 8, 8}, {"Money", 10, 10}});
  } else if (split == "test") {
    add("two men ambushed the guards and bought two horses from a dealer", 3,
        {{"Assailant", 1, 2}, {"Victim", 4, 5}}, 7,
        {{"Buyer", 1, 2}, {"Goods", 8, 9}, {"Seller", 11, 12}});
  }
  return out;
}

}  // namespace

FrameStore Ontology() {
  FrameStore store;
  store.Add(AttackFrame());
  store.Add(GettingFrame());
  store.Add(MotionFrame());
  store.Add(CommerceBuyFrame());
  return store;
}

std::vector<AnnotatedInstance> Split(const std::string &name) {
  size_t per_frame = 0;
  uint64_t seed = 0;
  if (name == "train") {
    per_frame = 12;
    seed = 11;
  } else if (name == "dev") {
    per_frame = 4;
    seed = 23;
  } else if (name == "test") {
    per_frame = 6;
    seed = 37;
  } else {
    throw ValidationError("unknown split \"" + name + "\"");
  }
  std::mt19937_64 rng(seed);
  std::vector<AnnotatedInstance> out;
  for (const auto &fp : Patterns()) {
    for (size_t i = 0; i < per_frame; ++i) {
      out.push_back(Realize(fp, fp.patterns[i % fp.patterns.size()], rng));
    }
  }
  for (auto &instance : TwoTargetInstances(name)) out.push_back(std::move(instance));
  const FrameStore store = Ontology();
  for (const auto &instance : out) ValidateInstance(instance, store);
  return out;
}

void WriteCorpus(const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  SaveOntology(Ontology(), dir / "frames.jsonl");
  for (const char *split : {"train", "dev", "test"}) {
    SaveInstances(Split(split), dir / (std::string(split) + ".jsonl"));
  }
}

}  // namespace aged::mini_framenet
