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

#include "core/schedule.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "common/error.hpp"
#include "nn/vocab.hpp"

namespace toxcl::core {

std::string_view to_string(ScheduleUnit u) {
  return u == ScheduleUnit::kEpochs ? "epochs" : "iterations";
}

ScheduleUnit schedule_unit_from_string(std::string_view s) {
  if (s == "epochs") return ScheduleUnit::kEpochs;
  if (s == "iterations" || s == "steps") return ScheduleUnit::kIterations;
  fail(ErrorCode::kInvalidArgument, "unknown schedule unit '" + std::string(s) + "'");
}

long long total_steps(long long amount, ScheduleUnit unit, std::size_t n, int batch_size) {
  require(amount >= 1, ErrorCode::kInvalidArgument, "iterations_or_epochs must be >= 1");
  require(batch_size >= 1, ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  if (unit == ScheduleUnit::kIterations) return amount;
  const auto b = static_cast<std::size_t>(batch_size);
  return amount * static_cast<long long>((n + b - 1) / b);
}

BatchSchedule::BatchSchedule(std::size_t n, int batch_size, std::uint64_t seed)
    : n_(n), batch_size_(static_cast<std::size_t>(batch_size)), rng_(seed), order_(n) {
  require(n >= 1, ErrorCode::kPrecondition, "training set is empty");
  require(batch_size >= 1, ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  reshuffle();
}

void BatchSchedule::reshuffle() {
  // Explicit Fisher-Yates so the order does not depend on the standard
  // library's shuffle implementation.
  for (std::size_t i = n_; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order_[i - 1], order_[pick(rng_)]);
  }
  cursor_ = 0;
}

std::vector<std::size_t> BatchSchedule::next() {
  if (cursor_ >= n_) reshuffle();
  const std::size_t end = std::min(n_, cursor_ + batch_size_);
  std::vector<std::size_t> batch(order_.begin() + static_cast<long>(cursor_),
                                 order_.begin() + static_cast<long>(end));
  cursor_ = end;
  return batch;
}

nn::Graph::Var decoder_nll(nn::Graph& g, const nn::Transformer& model, nn::Graph::Var encoded,
                           std::span<const char> enc_valid, std::span<const int> targets,
                           int window) {
  require(!targets.empty() && targets.back() == nn::Vocabulary::kEos, ErrorCode::kInternal,
          "decoder targets must end with [EOS]");
  std::vector<int> inputs;
  inputs.reserve(targets.size());
  inputs.push_back(nn::Vocabulary::kBos);
  inputs.insert(inputs.end(), targets.begin(), targets.end() - 1);
  auto logits = model.decoder_logits(g, encoded, enc_valid, inputs, window);
  return g.token_nll(logits, targets);
}

}  // namespace toxcl::core
