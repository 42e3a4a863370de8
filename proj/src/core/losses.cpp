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

#include "core/losses.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace toxcl::core {
namespace {

double clamp_prob(double p) { return std::clamp(p, nn::kProbEpsilon, 1.0 - nn::kProbEpsilon); }

void check_distribution(const Probs& p, const char* what) {
  for (double v : p) {
    require(std::isfinite(v) && v >= -1e-12 && v <= 1.0 + 1e-12, ErrorCode::kInvalidDistribution,
            std::string(what) + " has an entry outside [0, 1]");
  }
  require(std::abs(p[0] + p[1] - 1.0) <= 1e-5, ErrorCode::kInvalidDistribution,
          std::string(what) + " does not sum to 1");
}

}  // namespace

void LossWeights::validate() const {
  for (double v : {alpha, beta, lambda, gamma}) {
    require(std::isfinite(v) && v >= 0.0, ErrorCode::kInvalidArgument,
            "loss weights must be finite and non-negative");
  }
  require(alpha + beta + lambda + gamma > 0.0, ErrorCode::kInvalidArgument,
          "loss weights are all zero");
}

void to_json(nlohmann::json& j, const LossWeights& w) {
  j = nlohmann::json{{"alpha", w.alpha}, {"beta", w.beta}, {"lambda", w.lambda}, {"gamma", w.gamma}};
}

void from_json(const nlohmann::json& j, LossWeights& w) {
  LossWeights d;
  w.alpha = j.value("alpha", d.alpha);
  w.beta = j.value("beta", d.beta);
  w.lambda = j.value("lambda", d.lambda);
  w.gamma = j.value("gamma", d.gamma);
}

double cls_loss(std::span<const Probs> probs, std::span<const int> labels) {
  require(probs.size() == labels.size(), ErrorCode::kLengthMismatch,
          "cls_loss: probs and labels differ in length");
  require(!probs.empty(), ErrorCode::kEmptyInput, "cls_loss: empty batch");
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    require(labels[i] == 0 || labels[i] == 1, ErrorCode::kInvalidArgument,
            "labels must be 0 or 1");
    // One-hot y: only the gold class contributes.
    total -= std::log(clamp_prob(probs[i][static_cast<std::size_t>(labels[i])]));
  }
  return total / static_cast<double>(probs.size());
}

double clm_loss(std::span<const double> gold_token_probs) {
  require(!gold_token_probs.empty(), ErrorCode::kEmptyInput, "clm_loss: empty explanation");
  double total = 0.0;
  for (double p : gold_token_probs) total -= std::log(clamp_prob(p));
  return total / static_cast<double>(gold_token_probs.size());
}

double clm_loss(const nn::Matrix& logits, const ExplanationTokens& explanation) {
  require(!explanation.tokens.empty(), ErrorCode::kEmptyInput, "clm_loss: empty explanation");
  require(explanation.window >= 1, ErrorCode::kInvalidArgument, "window must be >= 1");
  require(static_cast<std::size_t>(logits.rows()) == explanation.tokens.size(),
          ErrorCode::kLengthMismatch, "clm_loss: one logits row per token expected");
  std::vector<double> gold;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const int t = explanation.tokens[static_cast<std::size_t>(r)];
    require(t >= 0 && t < logits.cols(), ErrorCode::kInvalidArgument, "token id out of range");
    const double mx = logits.row(r).maxCoeff();
    const double z = (logits.row(r).array() - mx).exp().sum();
    gold.push_back(std::exp(logits(r, t) - mx) / z);
  }
  return clm_loss(gold);
}

double joint_loss(double l_cls, double l_clm, const LossWeights& w) {
  return w.alpha * l_cls + w.beta * l_clm;
}

double kd_loss(const Probs& student, const Probs& teacher) {
  check_distribution(student, "student distribution");
  check_distribution(teacher, "teacher distribution");
  double kl = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    kl += student[j] * std::log(clamp_prob(student[j]) / clamp_prob(teacher[j]));
  }
  return std::max(kl, 0.0);
}

double final_loss(double l_xcl, double l_tf, const LossWeights& w) {
  return w.lambda * l_xcl + w.gamma * l_tf;
}

}  // namespace toxcl::core
