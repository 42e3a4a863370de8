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

#ifndef TOXCL_CORE_LOSSES_HPP_
#define TOXCL_CORE_LOSSES_HPP_

#include <array>
#include <span>
#include <vector>

#include "json.hpp"
#include "nn/graph.hpp"

namespace toxcl::core {

// (p0, p1): probability of non-toxic, toxic.
using Probs = std::array<double, 2>;

struct LossWeights {
  double alpha = 1.0;   // classification term of the joint loss
  double beta = 1.0;    // explanation term of the joint loss
  double lambda = 1.0;  // joint loss in the final objective
  double gamma = 1.0;   // distillation term in the final objective

  // Finite, non-negative, not all zero; kInvalidArgument otherwise.
  void validate() const;
  bool operator==(const LossWeights&) const = default;
};

void to_json(nlohmann::json& j, const LossWeights& w);
void from_json(const nlohmann::json& j, LossWeights& w);

// -(1/N) sum_i log p_i[y_i], probabilities clamped to [1e-7, 1 - 1e-7].
double cls_loss(std::span<const Probs> probs, std::span<const int> labels);

// Mean -log p over the gold explanation tokens (clamped).
double clm_loss(std::span<const double> gold_token_probs);

struct ExplanationTokens {
  std::vector<int> tokens;
  int window = 256;
};

// Row t of `logits` scores tokens[t]; the window is applied by whoever
// produced the logits (the decoder's attention mask).
double clm_loss(const nn::Matrix& logits, const ExplanationTokens& explanation);

double joint_loss(double l_cls, double l_clm, const LossWeights& w);

// KL(student || teacher) = sum_j s_j ln(s_j / t_j), both clamped. Throws
// kInvalidDistribution if either input is not a distribution (1e-5).
double kd_loss(const Probs& student, const Probs& teacher);

double final_loss(double l_xcl, double l_tf, const LossWeights& w);

}  // namespace toxcl::core

#endif  // TOXCL_CORE_LOSSES_HPP_
