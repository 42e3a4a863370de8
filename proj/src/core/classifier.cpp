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

#include "core/classifier.hpp"

#include <cmath>

#include "common/error.hpp"
#include "nn/vocab.hpp"

namespace toxcl::core {

ClassifierOutput classifier_forward(const nn::ModelBundle& bundle, std::string_view input_text,
                                    std::size_t pad_to) {
  return classifier_forward_ids(bundle, bundle.encode_text(input_text), pad_to);
}

ClassifierOutput classifier_forward_ids(const nn::ModelBundle& bundle, std::span<const int> ids,
                                        std::size_t pad_to) {
  require(!ids.empty(), ErrorCode::kEmptyInput, "input is empty after tokenization");
  require(bundle.model().arch().classifier, ErrorCode::kInvalidArgument,
          "bundle has no classification head");
  std::vector<int> padded(ids.begin(), ids.end());
  std::vector<char> valid(ids.size(), 1);
  const auto limit = static_cast<std::size_t>(bundle.model().arch().max_positions);
  for (std::size_t i = ids.size(); i < std::min(pad_to, limit); ++i) {
    padded.push_back(nn::Vocabulary::kPad);
    valid.push_back(0);
  }
  nn::Graph g(false);
  auto enc = bundle.model().encode(g, padded, valid);
  auto pooled = bundle.model().pooled(g, enc, valid);
  auto logits = bundle.model().classifier_logits(g, pooled);
  const auto& z = g.value(logits);
  ClassifierOutput out;
  out.logits = {z(0, 0), z(0, 1)};
  out.probs = softened(out.logits, 1.0);
  const auto& pv = g.value(pooled);
  out.pooled.assign(pv.data(), pv.data() + pv.size());
  return out;
}

Probs softened(const std::array<double, 2>& logits, double temperature) {
  require(temperature > 0.0 && std::isfinite(temperature), ErrorCode::kInvalidArgument,
          "temperature must be positive");
  const double a = logits[0] / temperature;
  const double b = logits[1] / temperature;
  const double m = std::max(a, b);
  const double ea = std::exp(a - m), eb = std::exp(b - m);
  return {ea / (ea + eb), eb / (ea + eb)};
}

}  // namespace toxcl::core
