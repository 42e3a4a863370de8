// Copyright 2026 The ToXCL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include "common/error.hpp"
#include "doctest.h"
#include "metrics/metrics.hpp"
#include "support/fixtures.hpp"
#include "support/toy.hpp"

using namespace toxcl;
using metrics::GoldExplanation;
using metrics::HypExplanation;
using std::nullopt;

TEST_CASE("BLEU-4 and ROUGE-L match the oracle table") {
  for (const auto& c : testing::text_metric_cases()) {
    INFO("hyp: " << c.hyp);
    CHECK(std::abs(metrics::bleu4(c.refs, c.hyp) - c.bleu4) < 1e-3);
    CHECK(std::abs(metrics::rouge_l(c.refs, c.hyp) - c.rouge_l) < 1e-3);
  }
}

TEST_CASE("text metric edge cases") {
  std::vector<std::string> refs{"a b c"};
  CHECK(metrics::bleu4(refs, "") == 0.0);
  CHECK(metrics::rouge_l(refs, "   ") == 0.0);
  CHECK(metrics::bleu4(std::vector<std::string>{}, "a b c") == 0.0);
  for (const auto& c : testing::text_metric_cases()) {
    const double b = metrics::bleu4(c.refs, c.hyp);
    const double r = metrics::rouge_l(c.refs, c.hyp);
    CHECK(b >= 0.0);
    CHECK(b <= 100.0);
    CHECK(r >= 0.0);
    CHECK(r <= 100.0);
  }
}

TEST_CASE("accuracy and macro F1 match scikit-learn") {
  for (const auto& c : testing::classification_cases()) {
    const auto m = metrics::classification_metrics(c.golds, c.preds);
    CHECK(std::abs(m.accuracy - c.accuracy) < 1e-9);
    CHECK(std::abs(m.macro_f1 - c.macro_f1) < 1e-9);
    CHECK(m.confusion.total() == c.golds.size());
  }
  std::vector<int> a{0, 1}, b{0};
  CHECK_THROWS_AS(metrics::classification_metrics(a, b), Error);
  CHECK_THROWS_AS(metrics::classification_metrics(std::vector<int>{}, std::vector<int>{}), Error);
}

TEST_CASE("explanation scoring follows the NONE rules") {
  metrics::Bleu4Scorer bleu;
  metrics::RougeLScorer rouge;
  const metrics::Scorer* scorers[] = {&bleu, &rouge};

  std::vector<GoldExplanation> golds{{}, {"women are inferior"}};
  std::vector<HypExplanation> hyps{nullopt, std::string("women are inferior")};
  auto s = metrics::explanation_eval(golds, hyps, scorers);
  CHECK(s.at("bleu4") == doctest::Approx(100.0));
  CHECK(s.at("rouge_l") == doctest::Approx(100.0));

  hyps = {std::string("anything"), nullopt};
  s = metrics::explanation_eval(golds, hyps, scorers);
  CHECK(s.at("bleu4") == 0.0);
  CHECK(s.at("rouge_l") == 0.0);

  golds = {{}, {}, {"x y"}, {"a b"}};
  hyps = {nullopt, std::string("t"), nullopt, std::string("a b")};
  s = metrics::explanation_eval(golds, hyps, scorers);
  CHECK(s.at("rouge_l") == doctest::Approx(50.0));

  std::vector<HypExplanation> short_hyps{nullopt};
  CHECK_THROWS_AS(metrics::explanation_eval(golds, short_hyps, scorers), Error);
}

TEST_CASE("Krippendorff alpha matches the reference package") {
  using R = std::vector<std::vector<std::optional<double>>>;
  R two{{1, 1, 0, 0}, {1, 0, 0, 1}};
  CHECK(std::abs(metrics::krippendorff_alpha(two, metrics::DistanceMetric::kNominal) -
                 testing::kAlphaNominal2x4) < 1e-6);
  R four{{1, 2, 3, 3, 2, 1, 4, 1, 2, nullopt},
         {1, 2, 3, 3, 2, 2, 4, 1, 2, 5},
         {nullopt, 3, 3, 3, 2, 3, 4, 2, 2, 5},
         {1, 2, 3, 3, 2, 4, 4, 1, 2, 5}};
  CHECK(std::abs(metrics::krippendorff_alpha(four, metrics::DistanceMetric::kNominal) -
                 testing::kAlphaNominal4x10) < 1e-6);
  CHECK(std::abs(metrics::krippendorff_alpha(four, metrics::DistanceMetric::kOrdinal) -
                 testing::kAlphaOrdinal4x10) < 1e-6);
  CHECK(std::abs(metrics::krippendorff_alpha(four, metrics::DistanceMetric::kInterval) -
                 testing::kAlphaInterval4x10) < 1e-6);
  R scale{{3, 2, 3, 1, 2, 3}, {3, 2, 2, 1, 2, 3}, {2, 2, 3, 1, 3, 3}};
  CHECK(std::abs(metrics::krippendorff_alpha(scale, metrics::DistanceMetric::kNominal) -
                 testing::kAlphaNominal3x6) < 1e-6);
  CHECK(std::abs(metrics::krippendorff_alpha(scale, metrics::DistanceMetric::kOrdinal) -
                 testing::kAlphaOrdinal3x6) < 1e-6);

  R agree{{2, 2, 2}, {2, 2, 2}};
  CHECK(metrics::krippendorff_alpha(agree, metrics::DistanceMetric::kNominal) == 1.0);
  R lonely{{1, nullopt}, {nullopt, 2}};
  CHECK_THROWS_AS(metrics::krippendorff_alpha(lonely, metrics::DistanceMetric::kNominal), Error);
  CHECK_THROWS_AS(metrics::distance_metric_from_string("ratio"), Error);
}

TEST_CASE("external command scorer") {
  testing::TempDir dir;
  // Scores 100 when the hypothesis names a reference exactly, else 25.
  const auto script = dir / "score.py";
  testing::write_file(script,
                      "import json, sys\n"
                      "for line in sys.stdin:\n"
                      "    it = json.loads(line)\n"
                      "    print(100 if it['hypothesis'] in it['references'] else 25)\n");
  metrics::ExternalCommandScorer ext("exact", "python3 " + script.string());
  std::vector<metrics::ScoringItem> items{{{"a b"}, "a b"}, {{"a b"}, "c"}};
  CHECK(ext.score_batch(items) == std::vector<double>{100.0, 25.0});

  const metrics::Scorer* scorers[] = {&ext};
  std::vector<GoldExplanation> golds{{"a b"}, {"a b"}, {}};
  std::vector<HypExplanation> hyps{std::string("a b"), std::string("zzz"), nullopt};
  CHECK(metrics::explanation_eval(golds, hyps, scorers).at("exact") == doctest::Approx(75.0));

  metrics::ExternalCommandScorer broken("broken", "false");
  CHECK_THROWS_AS(broken.score_batch(items), Error);
  metrics::ExternalCommandScorer out_of_range("big", "python3 -c 'import sys\nfor _ in sys.stdin: print(500)'");
  CHECK_THROWS_AS(out_of_range.score_batch(items), Error);

  CHECK(metrics::make_scorer("bleu4")->name() == "bleu4");
  CHECK(metrics::make_scorer("exact", {{"exact", "cat"}})->name() == "exact");
  CHECK_THROWS_AS(metrics::make_scorer("meteor"), Error);
}

TEST_CASE("prediction files and reports") {
  testing::TempDir dir;
  std::vector<metrics::PredictionRecord> recs{
      {"a", 1, 1, {"women are inferior", "women are weak"}, std::string("women are inferior")},
      {"b", 0, 0, {}, nullopt},
      {"c", 1, 0, {"x"}, nullopt},
  };
  metrics::write_predictions(dir / "p.jsonl", recs);
  const auto back = metrics::read_predictions(dir / "p.jsonl");
  REQUIRE(back.size() == 3);
  CHECK(back[0].gold_explanations == recs[0].gold_explanations);
  CHECK(back[1].pred_explanation == nullopt);
  CHECK(metrics::to_json(back[1]).at("pred_explanation") == "[None]");

  metrics::Bleu4Scorer bleu;
  const metrics::Scorer* scorers[] = {&bleu};
  const auto report = metrics::evaluate(back, scorers);
  CHECK(report.n == 3);
  CHECK(report.accuracy == doctest::Approx(200.0 / 3.0));
  CHECK(report.per_scorer.at("bleu4") == doctest::Approx(200.0 / 3.0));
  CHECK(report.confusion.counts[1][0] == 1);

  const auto j = metrics::to_json(report);
  const auto round = metrics::report_from_json(j);
  CHECK(round.per_scorer == report.per_scorer);
  CHECK(round.confusion == report.confusion);
  CHECK(metrics::tsv_header(report).find("bleu4") != std::string::npos);
  CHECK(metrics::tsv_row(report, "test").rfind("test\t", 0) == 0);

  testing::write_file(dir / "bad.jsonl", "{\"id\": \"a\"}\n");
  try {
    metrics::read_predictions(dir / "bad.jsonl");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.row() == 1);
  }
}
