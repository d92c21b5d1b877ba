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

#include "aged/cli.h"

#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "test_util.h"

namespace aged {
namespace {

namespace fs = std::filesystem;
using testing::ReadText;
using testing::TempDir;
using testing::WriteText;

const fs::path kData = AGED_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = Dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json ReadJson(const fs::path &path) {
  return nlohmann::json::parse(ReadText(path));
}

// Small, fast model flags.
std::vector<std::string> Tiny(std::vector<std::string> args) {
  for (const char *flag : {"--epochs", "2", "--d-model", "8", "--layers", "1",
                           "--heads", "2", "--d-ff", "16"}) {
    args.push_back(flag);
  }
  return args;
}

TEST_CASE("digest of a known file") {
  const auto dir = TempDir("cli");
  WriteText(dir / "abc", "abc");
  CHECK(FileDigest(dir / "abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("ingest prints counts and writes a manifest") {
  const auto dir = TempDir("cli");
  const auto r = Run({"ingest", "--frames", (kData / "frames.jsonl").string(),
                      "--instances", (kData / "train.jsonl").string(),
                      "--manifest", (dir / "m.json").string()});
  REQUIRE(r.code == 0);
  const auto counts = nlohmann::json::parse(r.out);
  CHECK(counts["frames"] == 4);
  CHECK(counts["instances"] == 52);
  const auto manifest = ReadJson(dir / "m.json");
  CHECK(manifest["command"] == "ingest");
  CHECK(manifest["inputs"][(kData / "train.jsonl").string()] ==
        FileDigest(kData / "train.jsonl"));
  CHECK(manifest["version"] == "0.1.0");
  CHECK(!manifest["finished_at"].is_null());
}

TEST_CASE("usage errors exit with 1") {
  const auto unknown_flag = Run({"ingest", "--bogus"});
  CHECK(unknown_flag.code == 1);
  CHECK(unknown_flag.err.find("Usage") != std::string::npos);
  CHECK(Run({"frobnicate"}).code == 1);
  CHECK(Run({}).code == 1);
  CHECK(Run({"eval"}).code == 1);  // --pred is required
  const auto version = Run({"--version"});
  CHECK(version.code == 0);
  CHECK(version.out.find("0.1.0") != std::string::npos);
  const auto help = Run({"train", "--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("command-line flags, then the --config file") !=
        std::string::npos);
}

TEST_CASE("bad data exits with 1") {
  const auto dir = TempDir("cli");
  WriteText(dir / "frames.jsonl", "{not json\n");
  const auto r = Run({"ingest", "--frames", (dir / "frames.jsonl").string(),
                      "--manifest", (dir / "m.json").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 1") != std::string::npos);
}

TEST_CASE("template renders the requested mode") {
  const auto dir = TempDir("cli");
  const auto r = Run({"template", "--frame", "Attack", "--fe", "Victim",
                      "--mode", "question", "--manifest",
                      (dir / "m.json").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("What's <r> Victim </r> of <f> Attack </f> ?\n", 0) == 0);
  const auto bare = Run({"template", "--frame", "Attack", "--fe", "Victim",
                         "--mode", "question", "--no-label-markers",
                         "--manifest", (dir / "m2.json").string()});
  CHECK(bare.out.rfind("What's Victim of Attack ?\n", 0) == 0);
  CHECK(Run({"template", "--mode", "fe-def", "--manifest",
             (dir / "m3.json").string()})
            .code == 1);
}

TEST_CASE("defaults only: the resolved map is the documented default map") {
  const auto dir = TempDir("cli");
  REQUIRE(Run({"template", "--manifest", (dir / "m.json").string()}).code == 0);
  const auto config = ReadJson(dir / "m.json")["config"];
  CHECK(config["frames"] == (kData / "frames.jsonl").string());
  CHECK(config["frame"] == "Attack");
  CHECK(config["mode"] == "frame-def");
  CHECK(config["fe"] == "");
  CHECK(config["no_label_markers"] == "false");
  CHECK(config["force"] == "false");
  CHECK(config["workers"] == "1");
}

TEST_CASE("config file precedence, unknown keys and type errors") {
  const auto dir = TempDir("cli");
  WriteText(dir / "run.cfg",
            "# settings\nlr = 0.01\nbatch_size = 4\nfuture_option = yes\n"
            "augment_fe_defs = true\n");
  auto train = [&](const std::string &name, std::vector<std::string> extra) {
    std::vector<std::string> args =
        Tiny({"train", "--config", (dir / "run.cfg").string(), "--checkpoint",
              (dir / name).string()});
    args.insert(args.end(), extra.begin(), extra.end());
    return Run(args);
  };

  REQUIRE(train("a.json", {"--lr", "0.001"}).code == 0);
  auto config = ReadJson(dir / "a.json.manifest.json")["config"];
  CHECK(config["lr"] == "0.001");
  CHECK(config["batch_size"] == "4");
  CHECK(config["augment_fe_defs"] == "true");
  CHECK(!config.contains("future_option"));

  REQUIRE(train("b.json", {}).code == 0);
  config = ReadJson(dir / "b.json.manifest.json")["config"];
  CHECK(config["lr"] == "0.01");
  CHECK(ReadJson(dir / "b.json.report.json")["train_config"]["learning_rate"] ==
        0.01);

  WriteText(dir / "bad.cfg", "epochs = many\n");
  CHECK(Run(Tiny({"train", "--checkpoint", (dir / "c.json").string(),
                  "--config", (dir / "bad.cfg").string()}))
            .code == 1);
  WriteText(dir / "garbled.cfg", "just some words\n");
  CHECK(Run({"train", "--checkpoint", (dir / "d.json").string(), "--config",
             (dir / "garbled.cfg").string()})
            .code == 1);
  CHECK(Run({"train", "--checkpoint", (dir / "e.json").string(), "--config",
             (dir / "missing.cfg").string()})
            .code == 1);
}

TEST_CASE("train, predict and eval end to end with overwrite protection") {
  const auto dir = TempDir("cli");
  const std::string ckpt = (dir / "model.json").string();
  REQUIRE(Run(Tiny({"train", "--checkpoint", ckpt, "--dev",
                    (kData / "dev.jsonl").string()}))
              .code == 0);
  CHECK(fs::exists(dir / "model.json.report.json"));
  CHECK(fs::exists(dir / "model.best.json"));
  const auto manifest = ReadJson(dir / "model.json.manifest.json");
  CHECK(manifest["seed"] == 7);
  CHECK(manifest["inputs"][(kData / "dev.jsonl").string()] ==
        FileDigest(kData / "dev.jsonl"));

  const auto again = Run(Tiny({"train", "--checkpoint", ckpt}));
  CHECK(again.code == 1);
  CHECK(again.err.find("--force") != std::string::npos);

  const std::string preds = (dir / "preds.jsonl").string();
  REQUIRE(Run({"predict", "--checkpoint", ckpt, "--out", preds}).code == 0);
  CHECK(Run({"predict", "--checkpoint", ckpt, "--out", preds}).code == 1);
  CHECK(Run({"predict", "--checkpoint", ckpt, "--out", preds, "--force"}).code ==
        0);

  const auto eval = Run({"eval", "--pred", preds, "--manifest",
                         (dir / "eval.json").string(), "--frames",
                         (kData / "frames.jsonl").string()});
  REQUIRE(eval.code == 0);
  const auto metrics = nlohmann::json::parse(eval.out);
  for (const char *key : {"precision", "recall", "f1", "tp", "pred", "gold"}) {
    CHECK(metrics.contains(key));
  }
  CHECK(metrics["gold"] > 0);
}

TEST_CASE("identical manifests give identical artifacts") {
  const auto a = TempDir("cli");
  const auto b = TempDir("cli");
  for (const auto &dir : {a, b}) {
    REQUIRE(Run(Tiny({"train", "--checkpoint", (dir / "m.json").string()}))
                .code == 0);
    REQUIRE(Run({"predict", "--checkpoint", (dir / "m.json").string(), "--out",
                 (dir / "p.jsonl").string()})
                .code == 0);
  }
  CHECK(ReadText(a / "m.json") == ReadText(b / "m.json"));
  CHECK(ReadText(a / "p.jsonl") == ReadText(b / "p.jsonl"));
}

TEST_CASE("misaligned eval names the first misaligned instance") {
  const auto dir = TempDir("cli");
  const std::string gold = (kData / "dev.jsonl").string();
  std::string lines;
  for (int i = 0; i < 3; ++i) {
    lines += R"({"frame":"Attack","predictions":[]})" "\n";
  }
  WriteText(dir / "short.jsonl", lines);
  const auto r = Run({"eval", "--gold", gold, "--pred",
                      (dir / "short.jsonl").string(), "--manifest",
                      (dir / "m.json").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("instance 4") != std::string::npos);

  // Same count, but the frame of instance 1 disagrees.
  std::string wrong;
  const auto dev = LoadInstancesUnchecked(gold);
  for (size_t i = 0; i < dev.size(); ++i) {
    wrong += std::string(R"({"frame":")") + (i == 1 ? "Nope" : dev[i].frame) +
             R"(","predictions":[]})" "\n";
  }
  WriteText(dir / "wrong.jsonl", wrong);
  const auto w = Run({"eval", "--gold", gold, "--pred",
                      (dir / "wrong.jsonl").string(), "--manifest",
                      (dir / "m2.json").string()});
  CHECK(w.code == 1);
  CHECK(w.err.find("instance 2") != std::string::npos);
}

TEST_CASE("runtime failures exit with 2") {
  const auto dir = TempDir("cli");
  const auto r = Run({"ingest", "--manifest",
                      (dir / "no" / "such" / "dir" / "m.json").string()});
  CHECK(r.code == 2);
}

TEST_CASE("experiment report with mode comparison") {
  const auto dir = TempDir("cli");
  const auto r = Run(Tiny({"experiment", "--holdout", "Getting", "--k", "0",
                           "--compare-modes", "--out",
                           (dir / "report.json").string()}));
  REQUIRE(r.code == 0);
  const auto report = ReadJson(dir / "report.json");
  CHECK(report["k"] == 0);
  REQUIRE(report["runs"].size() == 2);
  CHECK(report["runs"][0]["template_mode"] == "frame-def");
  CHECK(report["runs"][1]["template_mode"] == "question");
  bool saw_getting = false;
  for (const auto &row : report["runs"][0]["per_frame"]) {
    if (row["frame"] == "Getting") {
      saw_getting = true;
      CHECK(row["train_occurrences"] == 0);
      CHECK(row["held_out"] == true);
      CHECK(row["metrics"].contains("f1"));
    }
  }
  CHECK(saw_getting);
  CHECK(fs::exists(dir / "report.json.manifest.json"));
  CHECK(Run(Tiny({"experiment", "--k", "several", "--out",
                  (dir / "r2.json").string()}))
            .code == 1);
}

}  // namespace
}  // namespace aged
