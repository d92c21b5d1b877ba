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

#include "aged/decoder_eval.h"

#include <doctest.h>

#include <random>

#include "aged/errors.h"
#include "aged/experiment.h"
#include "aged/mini_framenet.h"
#include "aged/trainer.h"
#include "oracles.h"

namespace aged {
namespace {

PointerDistribution Dist(std::vector<double> start, std::vector<double> end) {
  return {"fe", std::move(start), std::move(end)};
}

TEST_CASE("decode examples") {
  SUBCASE("best valid pair beats null") {
    const auto p = DecodeOne(Dist({0.1, 0.6, 0.2, 0.1}, {0.1, 0.1, 0.7, 0.1}));
    REQUIRE(p.span.has_value());
    CHECK(*p.span == std::make_pair(1, 2));
    CHECK(p.score == doctest::Approx(0.42));
  }
  SUBCASE("null dominates") {
    const auto p =
        DecodeOne(Dist({0.9, 0.05, 0.03, 0.02}, {0.9, 0.02, 0.03, 0.05}));
    CHECK(!p.span.has_value());
    CHECK(p.score == doctest::Approx(0.81));
  }
  SUBCASE("start after end is never chosen") {
    const auto d = Dist({0.02, 0.08, 0.1, 0.8}, {0.02, 0.8, 0.1, 0.08});
    const auto p = DecodeOne(d);
    CHECK(p.span == testing::BruteForceDecode(d));
    REQUIRE(p.span.has_value());
    CHECK(p.span->first <= p.span->second);
  }
  SUBCASE("ties go to null") {
    const auto p = DecodeOne(Dist({0.5, 0.5}, {0.5, 0.5}));
    CHECK(!p.span.has_value());
  }
  SUBCASE("mismatched lengths are rejected") {
    CHECK_THROWS_AS(DecodeOne(Dist({0.5, 0.5}, {1.0})), ValidationError);
  }
}

TEST_CASE("property: decode equals the brute-force oracle") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto d = testing::RandomDistribution(rng, 1 + int(rng() % 20));
    CHECK(DecodeOne(d).span == testing::BruteForceDecode(d));
  }
}

TEST_CASE("property: agreeing independent argmaxes are returned unchanged") {
  std::mt19937_64 rng(2);
  int agreeing = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const auto d = testing::RandomDistribution(rng, 1 + int(rng() % 10));
    int s = 1, e = 1;
    for (int i = 1; i <= d.n(); ++i) {
      if (d.start_probs[i] > d.start_probs[s]) s = i;
      if (d.end_probs[i] > d.end_probs[e]) e = i;
    }
    if (s > e || d.start_probs[s] * d.end_probs[e] <=
                     d.start_probs[0] * d.end_probs[0]) {
      continue;
    }
    ++agreeing;
    const auto p = DecodeOne(d);
    REQUIRE(p.span.has_value());
    CHECK(*p.span == std::make_pair(s, e));
  }
  CHECK(agreeing > 100);
}

AnnotatedInstance Gold(std::vector<Argument> arguments) {
  return {{"a", "b", "c", "d"}, 1, "Attack", std::move(arguments)};
}

InstancePrediction Pred(std::vector<SpanPrediction> predictions) {
  return {"Attack", std::move(predictions)};
}

TEST_CASE("metrics examples") {
  SUBCASE("perfect match") {
    const auto gold = Gold({{"Assailant", 1, 1}, {"Victim", 3, 4}});
    const auto m = Evaluate(
        {Pred({{"Assailant", std::make_pair(1, 1), 1.0},
               {"Victim", std::make_pair(3, 4), 1.0},
               {"Weapon", std::nullopt, 1.0}})},
        {gold});
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f1 == 1.0);
  }
  SUBCASE("three predicted, two gold, one match") {
    const auto m = Evaluate(
        {Pred({{"Assailant", std::make_pair(1, 1), 1.0},
               {"Victim", std::make_pair(2, 4), 1.0},
               {"Weapon", std::make_pair(2, 2), 1.0}})},
        {Gold({{"Assailant", 1, 1}, {"Victim", 3, 4}})});
    CHECK(m.true_positives == 1);
    CHECK(m.predicted_count == 3);
    CHECK(m.gold_count == 2);
    CHECK(m.precision == doctest::Approx(1.0 / 3));
    CHECK(m.recall == doctest::Approx(0.5));
    CHECK(m.f1 == doctest::Approx(0.4));
  }
  SUBCASE("nothing predicted") {
    const auto m = Evaluate({Pred({{"Assailant", std::nullopt, 1.0}})},
                            {Gold({{"Assailant", 1, 1}, {"Victim", 3, 4}})});
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
    CHECK(m.f1 == 0.0);
    CHECK(m.gold_count == 2);
  }
  SUBCASE("nothing at all") {
    const auto m = Evaluate({}, {});
    CHECK(m == Metrics::FromCounts(0, 0, 0));
    CHECK(m.f1 == 0.0);
  }
}

TEST_CASE("evaluate rejects misaligned input") {
  const auto gold = Gold({{"Assailant", 1, 1}});
  try {
    Evaluate({Pred({})}, {gold, gold});
    FAIL("expected an alignment error");
  } catch (const AlignmentError &e) {
    CHECK(e.index() == 1);
  }
  InstancePrediction wrong_frame = Pred({});
  wrong_frame.frame = "Motion";
  CHECK_THROWS_AS(Evaluate({Pred({}), wrong_frame}, {gold, gold}),
                  AlignmentError);
  CHECK_THROWS_AS(Evaluate({Pred({{"Assailant", std::nullopt, 0.0},
                                  {"Assailant", std::nullopt, 0.0}})},
                           {gold}),
                  AlignmentError);
}

TEST_CASE("property: evaluate equals the set-intersection oracle") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto c = testing::RandomScoringCase(rng);
    CHECK(Evaluate(c.predictions, c.gold) ==
          testing::OracleMetrics(c.predictions, c.gold));
  }
}

TEST_CASE("metrics accumulate by counts") {
  Metrics a = Metrics::FromCounts(2, 4, 5);
  a += Metrics::FromCounts(1, 1, 3);
  CHECK(a == Metrics::FromCounts(3, 5, 8));
  const auto json = a.ToJson();
  CHECK(json["tp"] == 3);
  CHECK(json["pred"] == 5);
  CHECK(json["gold"] == 8);
}

TEST_CASE("prediction JSON round trip") {
  const InstancePrediction p{
      "Attack",
      {{"Assailant", std::make_pair(1, 2), 0.5}, {"Victim", std::nullopt, 0.25}}};
  const auto back = InstancePrediction::FromJson(
      nlohmann::json::parse(p.ToJson().dump()));
  CHECK(back.frame == p.frame);
  CHECK(back.predictions == p.predictions);
  CHECK(p.ToJson().dump().find("\"span\":null") != std::string::npos);
}

TEST_CASE("untrained predictor emits one prediction per FE") {
  const FrameStore store = mini_framenet::Ontology();
  const auto train = mini_framenet::Split("train");
  const auto test = mini_framenet::Split("test");
  EncoderConfig encoder;
  encoder.d_model = 8;
  encoder.n_layers = 1;
  encoder.n_heads = 2;
  encoder.d_ff = 16;
  for (TemplateMode mode : {TemplateMode::kFrameDef, TemplateMode::kQuestion}) {
    TrainConfig config;
    config.template_mode = mode;
    const Model model = NewModel(train, store, encoder, config);
    const Predictor predictor(model);
    const auto serial = predictor.PredictAll(test, store, 1);
    const auto threaded = predictor.PredictAll(test, store, 3);
    REQUIRE(serial.size() == test.size());
    for (size_t i = 0; i < test.size(); ++i) {
      const Frame &frame = store.at(test[i].frame);
      REQUIRE(serial[i].predictions.size() == frame.fe_order.size());
      for (size_t k = 0; k < frame.fe_order.size(); ++k) {
        CHECK(serial[i].predictions[k].fe == frame.fe_order[k]);
      }
      CHECK(serial[i].predictions == threaded[i].predictions);
      CHECK(PredictInstance(test[i], store, model) == serial[i].predictions);
    }
  }
}

}  // namespace
}  // namespace aged
