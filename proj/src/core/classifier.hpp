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

#ifndef TOXCL_CORE_CLASSIFIER_HPP_
#define TOXCL_CORE_CLASSIFIER_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "core/losses.hpp"
#include "nn/bundle.hpp"

namespace toxcl::core {

struct ClassifierOutput {
  Probs probs{};
  std::array<double, 2> logits{};
  std::vector<double> pooled;  // mean of the encoder's last hidden states

  // argmax with ties going to label 0
  int label() const { return probs[1] > probs[0] ? 1 : 0; }
};

// Tokenizes `input_text` and, if pad_to exceeds its length, appends [PAD]
// positions that are masked out of attention and pooling.
ClassifierOutput classifier_forward(const nn::ModelBundle& bundle, std::string_view input_text,
                                    std::size_t pad_to = 0);
ClassifierOutput classifier_forward_ids(const nn::ModelBundle& bundle, std::span<const int> ids,
                                        std::size_t pad_to = 0);

// Softmax of logits / temperature.
Probs softened(const std::array<double, 2>& logits, double temperature);

}  // namespace toxcl::core

#endif  // TOXCL_CORE_CLASSIFIER_HPP_
