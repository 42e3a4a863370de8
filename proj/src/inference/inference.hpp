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

#ifndef TOXCL_INFERENCE_INFERENCE_HPP_
#define TOXCL_INFERENCE_INFERENCE_HPP_

#include <atomic>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/classifier.hpp"
#include "json.hpp"
#include "nn/bundle.hpp"
#include "tg/tg.hpp"

namespace toxcl::inference {

class TargetGenerator {
 public:
  virtual ~TargetGenerator() = default;
  virtual tg::TargetGeneration generate(std::string_view post) const = 0;
};

class ToxicityClassifier {
 public:
  virtual ~ToxicityClassifier() = default;
  virtual core::ClassifierOutput classify(std::string_view model_input) const = 0;
};

struct DecodedExplanation {
  std::string text;
  bool sentinel = false;  // the [None] sequence, or nothing at all
  double score = 0.0;
};

class ExplanationDecoder {
 public:
  virtual ~ExplanationDecoder() = default;
  // Candidates best first. With forbid_sentinel the decoder may not produce
  // the [None] sequence.
  virtual std::vector<DecodedExplanation> decode(std::string_view model_input,
                                                 bool forbid_sentinel) const = 0;
};

class BundleTargetGenerator final : public TargetGenerator {
 public:
  explicit BundleTargetGenerator(const nn::ModelBundle& bundle) : bundle_(bundle) {}
  tg::TargetGeneration generate(std::string_view post) const override {
    return tg::generate_targets(bundle_, post);
  }

 private:
  const nn::ModelBundle& bundle_;
};

class BundleClassifier final : public ToxicityClassifier {
 public:
  explicit BundleClassifier(const nn::ModelBundle& bundle) : bundle_(bundle) {}
  core::ClassifierOutput classify(std::string_view model_input) const override {
    return core::classifier_forward(bundle_, model_input);
  }

 private:
  const nn::ModelBundle& bundle_;
};

class BundleDecoder final : public ExplanationDecoder {
 public:
  BundleDecoder(const nn::ModelBundle& bundle, int beam_size);
  std::vector<DecodedExplanation> decode(std::string_view model_input,
                                         bool forbid_sentinel) const override;
  std::size_t invocations() const { return invocations_.load(); }

 private:
  const nn::ModelBundle& bundle_;
  int beam_size_;
  mutable std::atomic<std::size_t> invocations_{0};
};

struct Prediction {
  int label = 0;
  core::Probs probs{};
  std::string target_raw;
  tg::TargetGroupSet target_groups;
  std::optional<std::string> explanation;  // nullopt is the [None] sentinel

  bool operator==(const Prediction&) const = default;
};

// {label, probs, target_groups, explanation}; the sentinel is "[None]".
nlohmann::json to_json(const Prediction& p);

struct PredictOptions {
  // Label 0 yields [None] without decoding; label 1 always yields text.
  // Disabling it decodes unconditionally and keeps whatever comes out.
  bool conditional_decoding = true;
};

struct Components {
  const TargetGenerator* tg = nullptr;
  const ToxicityClassifier* classifier = nullptr;
  const ExplanationDecoder* decoder = nullptr;
};

// Throws kEmptyInput on a blank post, kNotLoaded when a component is missing,
// kDecodeFailure if no non-sentinel explanation can be produced for label 1.
Prediction predict(const Components& c, std::string_view post, const PredictOptions& options = {});

// Element-wise predict. The first failing item aborts the batch; the error
// message names its index.
std::vector<Prediction> predict_batch(const Components& c, std::span<const std::string> posts,
                                      const PredictOptions& options = {});

// Owns the concrete bundle-backed components for a tg + student pair.
class Pipeline {
 public:
  Pipeline(nn::ModelBundle tg, nn::ModelBundle student, int beam_size);
  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  Components components() const { return {&tg_gen_, &classifier_, &decoder_}; }
  const nn::ModelBundle& tg_bundle() const { return tg_; }
  const nn::ModelBundle& student_bundle() const { return student_; }
  std::size_t decoder_invocations() const { return decoder_.invocations(); }

 private:
  nn::ModelBundle tg_;
  nn::ModelBundle student_;
  BundleTargetGenerator tg_gen_;
  BundleClassifier classifier_;
  BundleDecoder decoder_;
};

}  // namespace toxcl::inference

#endif  // TOXCL_INFERENCE_INFERENCE_HPP_
