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
#include "core/classifier.hpp"
#include "core/losses.hpp"
#include "core/schedule.hpp"
#include "core/training.hpp"
#include "doctest.h"
#include "nn/bundle.hpp"
#include "nn/params.hpp"
#include "support/toy.hpp"
#include "tg/tg.hpp"

using namespace toxcl;
using core::Probs;

TEST_CASE("cls_loss examples") {
  std::vector<Probs> perfect{{1.0, 0.0}};
  std::vector<int> zero{0};
  CHECK(core::cls_loss(perfect, zero) < 1e-6);
  std::vector<Probs> half{{0.5, 0.5}};
  for (int y : {0, 1}) {
    std::vector<int> l{y};
    CHECK(core::cls_loss(half, l) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
  std::vector<Probs> batch{{0.2, 0.8}, {0.9, 0.1}};
  std::vector<int> labels{1, 0};
  CHECK(std::abs(core::cls_loss(batch, labels) - 0.164252033486) < 1e-9);
  std::vector<int> short_labels{1};
  CHECK_THROWS_AS(core::cls_loss(batch, short_labels), Error);
}

TEST_CASE("clm_loss examples") {
  std::vector<double> ones{1.0, 1.0};
  CHECK(core::clm_loss(ones) < 1e-6);
  std::vector<double> p{0.5, 0.25, 0.125};
  CHECK(std::abs(core::clm_loss(p) - 1.386294361120) < 1e-9);
  CHECK_THROWS_AS(core::clm_loss(std::vector<double>{}), Error);
  const int v = 37;
  nn::Matrix uniform = nn::Matrix::Zero(4, v);
  core::ExplanationTokens e{{5, 6, 7, 8}, 2};
  CHECK(core::clm_loss(uniform, e) == doctest::Approx(std::log(v)).epsilon(1e-12));
  core::ExplanationTokens empty{{}, 2};
  CHECK_THROWS_AS(core::clm_loss(uniform, empty), Error);
}

TEST_CASE("joint, final and kd losses") {
  core::LossWeights w;
  CHECK(core::joint_loss(0.5, 0.25, w) == 0.75);
  w.alpha = 0.0;
  CHECK(core::joint_loss(0.5, 0.25, w) == 0.25);
  w = {2.0, 0.5, 1.0, 1.0};
  CHECK(core::joint_loss(1.0, 2.0, w) == 3.0);
  w = {};
  CHECK(core::final_loss(0.75, 0.51, w) == doctest::Approx(1.26).epsilon(1e-12));
  w.gamma = 0.0;
  CHECK(core::final_loss(core::joint_loss(0.5, 0.25, w), 0.9, w) ==
        core::joint_loss(0.5, 0.25, w));
  w = {1.0, 1.0, 1.0, 0.5};
  CHECK(core::final_loss(1.0, 0.4, w) == doctest::Approx(1.2).epsilon(1e-12));

  CHECK(core::kd_loss({0.7, 0.3}, {0.7, 0.3}) == 0.0);
  CHECK(std::abs(core::kd_loss({0.5, 0.5}, {0.9, 0.1}) - 0.510825623766) < 1e-9);
  const double big = core::kd_loss({0.5, 0.5}, {1.0 - 1e-7, 1e-7});
  CHECK(std::isfinite(big));
  CHECK(big > 5.0);
  CHECK_THROWS_AS(core::kd_loss({0.5, 0.6}, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(core::kd_loss({0.5, 0.5}, {1.2, -0.2}), Error);

  CHECK_THROWS_AS((core::LossWeights{0, 0, 0, 0}.validate()), Error);
  CHECK_THROWS_AS((core::LossWeights{-1, 1, 1, 1}.validate()), Error);
  CHECK_THROWS_AS((core::LossWeights{NAN, 1, 1, 1}.validate()), Error);
}

namespace {

nn::ModelBundle tiny_student(std::uint64_t seed = 3) {
  std::vector<std::string> inputs{"Target:women Post:women are ruining everything",
                                  "Target:none Post:the weather is nice"};
  std::vector<std::string> targets{"women are harmful"};
  nn::DecodingSettings d;
  d.max_input_length = 32;
  d.max_decode_length = 8;
  return nn::ModelBundle::from_backbone(nn::BundleKind::kStudent, "toxcl-tiny", inputs, targets,
                                        d, seed);
}

// Full student objective on one example, built independently of the
// training loop.
double objective(nn::ModelBundle& b, bool backward) {
  const std::string input = "Target:women Post:women are ruining everything";
  auto ids = b.encode_text(input);
  std::vector<char> valid(ids.size(), 1);
  auto target = b.encode_target("women are harmful");
  target.push_back(nn::Vocabulary::kEos);
  nn::Graph g(backward);
  const auto& m = b.model();
  auto enc = m.encode(g, ids, valid);
  auto logits = m.classifier_logits(g, m.pooled(g, enc, valid));
  auto probs = g.softmax(logits);
  auto l_cls = g.class_nll(probs, 1);
  auto l_clm = core::decoder_nll(g, m, enc, valid, target, 3);
  nn::Matrix teacher(1, 2);
  teacher << 0.3, 0.7;
  auto l_tf = g.kl_to_constant(probs, teacher);
  const std::pair<double, nn::Graph::Var> terms[] = {{1.0, l_cls}, {0.7, l_clm}, {0.5, l_tf}};
  auto total = g.weighted_sum(terms);
  if (backward) {
    b.model().params().zero_grad();
    g.backward(total);
  }
  return g.scalar(total);
}

}  // namespace

TEST_CASE("full-model gradients match central differences") {
  auto b = tiny_student();
  objective(b, true);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01(0.0, 1.0);
  const auto& params = b.model().params().all();
  std::vector<nn::Matrix> grads;
  for (const auto& p : params) grads.push_back(p->grad);
  const double h = 1e-4;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<nn::Matrix> dir;
    double analytic = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
      nn::Matrix d = nn::Matrix::NullaryExpr(params[i]->value.rows(), params[i]->value.cols(),
                                             [&] { return n01(rng); });
      analytic += (grads[i].array() * d.array()).sum();
      dir.push_back(std::move(d));
    }
    for (std::size_t i = 0; i < params.size(); ++i) params[i]->value += h * dir[i];
    const double up = objective(b, false);
    for (std::size_t i = 0; i < params.size(); ++i) params[i]->value -= 2 * h * dir[i];
    const double down = objective(b, false);
    for (std::size_t i = 0; i < params.size(); ++i) params[i]->value += h * dir[i];
    const double numeric = (up - down) / (2 * h);
    const double rel = std::abs(numeric - analytic) / std::max(std::abs(analytic), 1e-8);
    CHECK(rel < 1e-4);
  }
}

TEST_CASE("classifier_forward: normalization, masking, single token") {
  auto b = tiny_student();
  const std::string input = "Target:women Post:women are ruining everything";
  auto out = core::classifier_forward(b, input);
  CHECK(out.probs[0] + out.probs[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.pooled.size() == 32);
  for (std::size_t pad : {20, 31}) {
    auto padded = core::classifier_forward(b, input, pad);
    CHECK(std::abs(padded.probs[1] - out.probs[1]) < 1e-5);
    CHECK(padded.label() == out.label());
  }
  // One token: the pooled vector is that token's final hidden state.
  std::vector<int> one{b.vocab().id("women")};
  std::vector<char> valid{1};
  nn::Graph g(false);
  auto enc = g.value(b.model().encode(g, one, valid));
  auto single = core::classifier_forward_ids(b, one);
  for (int k = 0; k < enc.cols(); ++k) CHECK(single.pooled[k] == doctest::Approx(enc(0, k)));
  CHECK_THROWS_AS(core::classifier_forward(b, "   "), Error);
}

TEST_CASE("tie goes to the non-toxic label") {
  core::ClassifierOutput out;
  out.probs = {0.5, 0.5};
  CHECK(out.label() == 0);
  out.probs = {0.4, 0.6};
  CHECK(out.label() == 1);
}

TEST_CASE("bundle save/load keeps forward outputs") {
  auto b = tiny_student();
  testing::TempDir dir;
  b.save(dir / "s");
  auto back = nn::ModelBundle::load(dir / "s");
  const std::string input = "Target:none Post:the weather is nice";
  CHECK(core::classifier_forward(back, input).probs == core::classifier_forward(b, input).probs);
  CHECK(back.id() == b.id());
  CHECK_THROWS_AS(nn::ModelBundle::load(dir / "missing"), Error);
}

TEST_CASE("batch schedule is deterministic and covers each epoch") {
  core::BatchSchedule a(10, 4, 5), b(10, 4, 5);
  std::vector<std::size_t> seen;
  for (int i = 0; i < 3; ++i) {
    auto x = a.next();
    CHECK(x == b.next());
    seen.insert(seen.end(), x.begin(), x.end());
  }
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i < 10; ++i) CHECK(seen[i] == i);
  CHECK(core::total_steps(3, core::ScheduleUnit::kEpochs, 10, 4) == 9);
  CHECK(core::total_steps(7, core::ScheduleUnit::kIterations, 10, 4) == 7);
}

namespace {

std::vector<core::TrainingExample> toy_examples() {
  // Gold groups stand in for generated ones.
  std::vector<core::TrainingExample> out;
  for (const auto& inst : testing::toy_corpus()) {
    const auto target = tg::build_target_label(tg::TargetGroupSet(*inst.annotated_groups));
    out.push_back({tg::format_input(target, inst.post), corpus::to_int(inst.label),
                   inst.references});
  }
  return out;
}

core::TrainConfig toy_train_config(long long steps) {
  auto c = testing::toy_config("unused").student;
  c.iterations_or_epochs = steps;
  return c;
}

}  // namespace

TEST_CASE("teacher overfits the toy corpus and training is deterministic") {
  const auto examples = toy_examples();
  auto cfg = toy_train_config(150);
  std::vector<double> first, second;
  auto teacher = core::train_teacher(examples, cfg, [&](const core::StepMetrics& m) {
    first.push_back(m.l_cls);
  });
  core::train_teacher(examples, toy_train_config(10),
                      [&](const core::StepMetrics& m) { second.push_back(m.l_cls); });
  REQUIRE(second.size() == 10);
  for (int i = 0; i < 10; ++i) CHECK(first[i] == second[i]);  // bitwise
  int correct = 0;
  for (const auto& ex : examples) correct += core::classifier_forward(teacher, ex.input).label() == ex.label;
  CHECK(correct >= 31);
  CHECK_FALSE(teacher.model().arch().decoder);
}

TEST_CASE("student training logs consistent losses and leaves the teacher untouched") {
  const auto examples = toy_examples();
  auto teacher = core::train_teacher(examples, toy_train_config(40));
  const auto before = teacher.checksum();
  auto cfg = toy_train_config(30);
  cfg.weights = {0.7, 1.3, 0.9, 0.4};
  std::vector<core::StepMetrics> log;
  auto student = core::train_toxcl(examples, teacher, cfg,
                                   [&](const core::StepMetrics& m) { log.push_back(m); });
  CHECK(teacher.checksum() == before);
  REQUIRE(log.size() == 30);
  for (const auto& m : log) {
    const double expect = 0.9 * (0.7 * m.l_cls + 1.3 * m.l_clm) + 0.4 * m.l_tf;
    CHECK(std::abs(m.l_total - expect) < 1e-6);
    CHECK(m.l_cls >= 0.0);
    CHECK(m.l_clm >= 0.0);
    CHECK(m.l_tf >= 0.0);
  }
  CHECK(student.train_config().at("weights").at("gamma").get<double>() == 0.4);
  CHECK(student.train_config().at("teacher_id").get<std::string>() == teacher.id());

  // Non-toxic examples supervise [None] [EOS].
  core::TrainingExample neutral{"Target:none Post:x", 0, {}};
  CHECK(core::explanation_target(student, neutral) ==
        std::vector<int>{nn::Vocabulary::kNone, nn::Vocabulary::kEos});
  core::TrainingExample bad{"Target:none Post:x", 1, {}};
  CHECK_THROWS_AS(core::explanation_target(student, bad), Error);
}

TEST_CASE("train config JSON round trip") {
  core::TrainConfig c;
  c.weights.gamma = 0.0;
  c.schedule_unit = core::ScheduleUnit::kIterations;
  nlohmann::json j = c;
  CHECK(j.at("weights").at("gamma") == 0.0);
  CHECK(j.get<core::TrainConfig>() == c);
}
