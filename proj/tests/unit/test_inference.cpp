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

#include <algorithm>
#include <numeric>
#include <random>

#include "common/error.hpp"
#include "doctest.h"
#include "inference/inference.hpp"
#include "nn/bundle.hpp"
#include "support/toy.hpp"

using namespace toxcl;
using inference::Components;
using inference::PredictOptions;

namespace {

bool mentions_toxic(std::string_view s) { return s.find("ruin") != std::string_view::npos; }

}  // namespace

TEST_CASE("label 0 yields the sentinel without calling the decoder") {
  testing::StubTargetGenerator tg("women");
  testing::StubClassifier cls(0);
  testing::CountingDecoder dec;
  auto p = inference::predict({&tg, &cls, &dec}, "some post");
  CHECK(p.label == 0);
  CHECK_FALSE(p.explanation.has_value());
  CHECK(dec.calls() == 0);
  CHECK(inference::to_json(p).at("explanation") == "[None]");
}

TEST_CASE("label 1 always yields text") {
  testing::StubTargetGenerator tg("women");
  testing::StubClassifier cls(1);
  testing::CountingDecoder plain;
  auto p = inference::predict({&tg, &cls, &plain}, "some post");
  CHECK(p.explanation == std::optional<std::string>("they are targeted"));
  CHECK(plain.calls() == 1);

  // Every beam is the sentinel: a second, sentinel-free decode is used.
  testing::CountingDecoder stubborn(true);
  p = inference::predict({&tg, &cls, &stubborn}, "some post");
  CHECK(p.explanation == std::optional<std::string>("they are targeted"));
  CHECK(stubborn.calls() == 2);
}

TEST_CASE("disabling conditional decoding changes behavior") {
  testing::StubTargetGenerator tg("women");
  testing::StubClassifier toxic(1), clean(0);
  testing::CountingDecoder stubborn(true), plain;
  PredictOptions off{false};
  auto p = inference::predict({&tg, &toxic, &stubborn}, "x", off);
  CHECK(p.label == 1);
  CHECK_FALSE(p.explanation.has_value());  // the inconsistency the constraint removes
  p = inference::predict({&tg, &clean, &plain}, "x", off);
  CHECK(p.label == 0);
  CHECK(p.explanation.has_value());
  CHECK(plain.calls() == 1);
}

TEST_CASE("target groups flow into the classifier input") {
  testing::StubTargetGenerator tg("Women, none, jews");
  std::string seen;
  testing::StubClassifier cls([&](std::string_view in) {
    seen = std::string(in);
    return 0;
  });
  testing::CountingDecoder dec;
  auto p = inference::predict({&tg, &cls, &dec}, "hello there");
  CHECK(seen == "Target:jews, women Post:hello there");
  CHECK(p.target_groups.groups() == std::vector<std::string>{"jews", "women"});
  const auto j = inference::to_json(p);
  CHECK(j.size() == 4);
  CHECK(j.at("target_groups") == nlohmann::json::array({"jews", "women"}));
}

TEST_CASE("errors: empty post, missing components, decode failure") {
  testing::StubTargetGenerator tg;
  testing::StubClassifier cls(1);
  testing::CountingDecoder dec;
  CHECK_THROWS_AS(inference::predict({&tg, &cls, &dec}, "  \t"), Error);
  try {
    inference::predict({&tg, nullptr, &dec}, "x");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotLoaded);
  }
  struct Mute final : inference::ExplanationDecoder {
    std::vector<inference::DecodedExplanation> decode(std::string_view, bool) const override {
      return {};
    }
  } mute;
  try {
    inference::predict({&tg, &cls, &mute}, "x");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDecodeFailure);
  }
}

TEST_CASE("batches are element-wise and order-preserving") {
  testing::StubTargetGenerator tg;
  testing::StubClassifier cls([](std::string_view in) { return mentions_toxic(in) ? 1 : 0; });
  testing::CountingDecoder dec;
  Components c{&tg, &cls, &dec};
  std::mt19937_64 rng(9);
  std::vector<std::string> posts;
  for (int i = 0; i < 40; ++i) posts.push_back(testing::fuzz_post(rng) + (i % 3 ? "" : " ruin"));
  const auto base = inference::predict_batch(c, posts);
  std::vector<std::size_t> perm(posts.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::string> shuffled;
  for (auto i : perm) shuffled.push_back(posts[i]);
  const auto out = inference::predict_batch(c, shuffled);
  for (std::size_t k = 0; k < perm.size(); ++k) CHECK(out[k] == base[perm[k]]);
  for (std::size_t i = 0; i < posts.size(); ++i) CHECK(base[i] == inference::predict(c, posts[i]));

  CHECK(inference::predict_batch(c, std::vector<std::string>{}).empty());
  std::vector<std::string> with_blank{"ok", "", "ok"};
  try {
    inference::predict_batch(c, with_blank);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.row() == 1);
    CHECK(std::string(e.what()).find("item 1") != std::string::npos);
  }
}

TEST_CASE("bundle-backed pipeline keeps the decoding invariant") {
  std::vector<std::string> inputs{"women are ruining everything", "the weather is nice"};
  std::vector<std::string> targets{"women", "women are harmful"};
  nn::DecodingSettings d;
  d.max_input_length = 32;
  d.max_decode_length = 6;
  auto tg = nn::ModelBundle::from_backbone(nn::BundleKind::kTargetGenerator, "toxcl-tiny", inputs,
                                           targets, d, 1);
  auto student = nn::ModelBundle::from_backbone(nn::BundleKind::kStudent, "toxcl-tiny", inputs,
                                                targets, d, 2);
  inference::Pipeline pipe(std::move(tg), std::move(student), 2);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto before = pipe.decoder_invocations();
    auto p = inference::predict(pipe.components(), testing::fuzz_post(rng));
    CHECK(p.explanation.has_value() == (p.label == 1));
    if (p.label == 0) CHECK(pipe.decoder_invocations() == before);
  }
}
