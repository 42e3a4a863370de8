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

#ifndef TOXCL_CORE_TRAINING_HPP_
#define TOXCL_CORE_TRAINING_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "core/losses.hpp"
#include "core/schedule.hpp"
#include "corpus/corpus.hpp"
#include "json.hpp"
#include "nn/bundle.hpp"

namespace toxcl::core {

// Shared by the teacher and the student; the teacher ignores the loss
// weights, kd_temperature and the decoder fields.
struct TrainConfig {
  std::string backbone_id = "toxcl-small";
  std::string teacher_id;
  LossWeights weights;
  double kd_temperature = 1.0;
  double learning_rate = 1e-5;
  int max_sequence_length = 256;
  long long iterations_or_epochs = 10;
  ScheduleUnit schedule_unit = ScheduleUnit::kEpochs;
  int beam_size = 4;
  std::uint64_t seed = 42;
  int batch_size = 8;
  int max_decode_length = 32;
  int window = 256;  // decoder-history window k
  double weight_decay = 0.01;
  double max_grad_norm = 1.0;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

struct StepMetrics {
  long long step = 0;
  double l_cls = 0.0;
  double l_clm = 0.0;
  double l_tf = 0.0;
  double l_total = 0.0;
};

nlohmann::json to_json(const StepMetrics& m);

using StepCallback = std::function<void(const StepMetrics&)>;

// A post with its TG-augmented model input.
struct TrainingExample {
  std::string input;  // format_input(target string, post)
  int label = 0;
  std::vector<std::string> references;  // empty for non-toxic
};

// Runs the frozen target generator over every post and builds the
// "Target:{G} Post:{IP}" inputs.
std::vector<TrainingExample> prepare_examples(std::span<const corpus::Instance> instances,
                                              const nn::ModelBundle& tg);

// Encoder classifier trained with the classification loss alone.
nn::ModelBundle train_teacher(std::span<const TrainingExample> train, const TrainConfig& config,
                              const StepCallback& on_step = {});
nn::ModelBundle train_teacher(const corpus::CorpusSplit& train, const nn::ModelBundle& tg,
                              const TrainConfig& config, const StepCallback& on_step = {});

// Encoder-decoder student: classification + explanation losses on the
// student, distillation toward the frozen teacher, combined with
// config.weights. Throws kTeacherMutated if the teacher's weights change.
nn::ModelBundle train_toxcl(std::span<const TrainingExample> train, const nn::ModelBundle& teacher,
                            const TrainConfig& config, const StepCallback& on_step = {});
nn::ModelBundle train_toxcl(const corpus::CorpusSplit& train, const nn::ModelBundle& tg,
                            const nn::ModelBundle& teacher, const TrainConfig& config,
                            const StepCallback& on_step = {});

// Decoder target for one example: explanation tokens + [EOS], or
// [None] [EOS] for non-toxic examples.
std::vector<int> explanation_target(const nn::ModelBundle& student, const TrainingExample& ex);

}  // namespace toxcl::core

#endif  // TOXCL_CORE_TRAINING_HPP_
