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

#ifndef TOXCL_CORE_SCHEDULE_HPP_
#define TOXCL_CORE_SCHEDULE_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "nn/graph.hpp"
#include "nn/transformer.hpp"

namespace toxcl::core {

enum class ScheduleUnit { kEpochs, kIterations };
std::string_view to_string(ScheduleUnit u);
ScheduleUnit schedule_unit_from_string(std::string_view s);

// Optimizer steps for a run of `amount` epochs or iterations.
long long total_steps(long long amount, ScheduleUnit unit, std::size_t n, int batch_size);

// Mini-batches over [0, n), reshuffled at each epoch boundary from a seeded
// generator. The last batch of an epoch may be short.
class BatchSchedule {
 public:
  BatchSchedule(std::size_t n, int batch_size, std::uint64_t seed);
  std::vector<std::size_t> next();

 private:
  void reshuffle();

  std::size_t n_;
  std::size_t batch_size_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
};

// Teacher-forced decoder NLL: decoder inputs are [BOS] + targets[:-1].
// `targets` must end with [EOS].
nn::Graph::Var decoder_nll(nn::Graph& g, const nn::Transformer& model, nn::Graph::Var encoded,
                           std::span<const char> enc_valid, std::span<const int> targets,
                           int window);

}  // namespace toxcl::core

#endif  // TOXCL_CORE_SCHEDULE_HPP_
