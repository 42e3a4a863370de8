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

#include "inference/inference.hpp"

#include "common/error.hpp"
#include "common/text.hpp"
#include "corpus/corpus.hpp"
#include "nn/beam_search.hpp"
#include "nn/vocab.hpp"

namespace toxcl::inference {

BundleDecoder::BundleDecoder(const nn::ModelBundle& bundle, int beam_size)
    : bundle_(bundle), beam_size_(beam_size) {
  require(beam_size >= 1, ErrorCode::kInvalidArgument, "beam_size must be >= 1");
  require(bundle.model().arch().decoder, ErrorCode::kInvalidArgument,
          "explanation decoding needs a bundle with a decoder");
}

std::vector<DecodedExplanation> BundleDecoder::decode(std::string_view model_input,
                                                      bool forbid_sentinel) const {
  ++invocations_;
  nn::BeamOptions opts;
  opts.beam_size = beam_size_;
  opts.max_length = bundle_.decoding().max_decode_length;
  opts.window = bundle_.decoding().window;
  opts.forbid_sentinel = forbid_sentinel;
  std::vector<DecodedExplanation> out;
  for (const auto& h : nn::beam_search(bundle_.model(), bundle_.encode_text(model_input), opts)) {
    DecodedExplanation d;
    d.sentinel = !h.tokens.empty() && h.tokens.front() == nn::Vocabulary::kNone;
    d.text = bundle_.vocab().decode(h.tokens);
    if (d.text.empty()) d.sentinel = true;
    d.score = h.score;
    out.push_back(std::move(d));
  }
  return out;
}

nlohmann::json to_json(const Prediction& p) {
  return nlohmann::json{
      {"label", p.label},
      {"probs", {p.probs[0], p.probs[1]}},
      {"target_groups", p.target_groups.groups()},
      {"explanation", p.explanation ? *p.explanation : std::string(corpus::kNoneSentinel)}};
}

namespace {

std::optional<std::string> first_text(const std::vector<DecodedExplanation>& cands) {
  for (const auto& c : cands) {
    if (!c.sentinel && !text::trim(c.text).empty() && c.text != corpus::kNoneSentinel) {
      return c.text;
    }
  }
  return std::nullopt;
}

}  // namespace

Prediction predict(const Components& c, std::string_view post, const PredictOptions& options) {
  require(c.tg && c.classifier && c.decoder, ErrorCode::kNotLoaded, "models are not loaded");
  require(!text::trim(post).empty(), ErrorCode::kEmptyInput, "post is empty");
  Prediction p;
  const auto targets = c.tg->generate(post);
  p.target_raw = targets.raw;
  p.target_groups = targets.parsed;
  const std::string input = tg::format_input(tg::target_string(targets), post);
  const auto cls = c.classifier->classify(input);
  p.probs = cls.probs;
  p.label = cls.label();

  if (!options.conditional_decoding) {
    const auto cands = c.decoder->decode(input, false);
    if (!cands.empty() && !cands.front().sentinel) p.explanation = cands.front().text;
    return p;
  }
  if (p.label == 0) return p;  // [None] without touching the decoder

  p.explanation = first_text(c.decoder->decode(input, false));
  // Every beam ended in [None]: decode again with the sentinel banned.
  if (!p.explanation) p.explanation = first_text(c.decoder->decode(input, true));
  require(p.explanation.has_value(), ErrorCode::kDecodeFailure,
          "decoder produced no explanation for a toxic prediction");
  return p;
}

std::vector<Prediction> predict_batch(const Components& c, std::span<const std::string> posts,
                                      const PredictOptions& options) {
  std::vector<Prediction> out;
  out.reserve(posts.size());
  for (std::size_t i = 0; i < posts.size(); ++i) {
    try {
      out.push_back(predict(c, posts[i], options));
    } catch (const Error& e) {
      throw Error(e.code(), "item " + std::to_string(i) + ": " + e.what(), i);
    }
  }
  return out;
}

Pipeline::Pipeline(nn::ModelBundle tg, nn::ModelBundle student, int beam_size)
    : tg_(std::move(tg)),
      student_(std::move(student)),
      tg_gen_(tg_),
      classifier_(student_),
      decoder_(student_, beam_size) {
  require(tg_.kind() == nn::BundleKind::kTargetGenerator, ErrorCode::kInvalidArgument,
          "first bundle is not a target generator");
  require(student_.kind() == nn::BundleKind::kStudent, ErrorCode::kInvalidArgument,
          "second bundle is not a student model");
}

}  // namespace toxcl::inference
