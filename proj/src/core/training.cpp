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

#include "core/training.hpp"

#include <cmath>

#include "common/error.hpp"
#include "core/classifier.hpp"
#include "nn/params.hpp"
#include "nn/vocab.hpp"
#include "tg/tg.hpp"

namespace toxcl::core {

void TrainConfig::validate() const {
  weights.validate();
  require(learning_rate > 0.0, ErrorCode::kInvalidArgument, "learning_rate must be > 0");
  require(kd_temperature > 0.0, ErrorCode::kInvalidArgument, "kd_temperature must be > 0");
  require(max_sequence_length >= 1, ErrorCode::kInvalidArgument,
          "max_sequence_length must be >= 1");
  require(iterations_or_epochs >= 1, ErrorCode::kInvalidArgument,
          "iterations_or_epochs must be >= 1");
  require(beam_size >= 1, ErrorCode::kInvalidArgument, "beam_size must be >= 1");
  require(batch_size >= 1, ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  require(max_decode_length >= 1, ErrorCode::kInvalidArgument, "max_decode_length must be >= 1");
  require(window >= 1, ErrorCode::kInvalidArgument, "window must be >= 1");
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"backbone_id", c.backbone_id},
                     {"teacher_id", c.teacher_id},
                     {"weights", c.weights},
                     {"kd_temperature", c.kd_temperature},
                     {"learning_rate", c.learning_rate},
                     {"max_sequence_length", c.max_sequence_length},
                     {"iterations_or_epochs", c.iterations_or_epochs},
                     {"schedule_unit", to_string(c.schedule_unit)},
                     {"beam_size", c.beam_size},
                     {"seed", c.seed},
                     {"batch_size", c.batch_size},
                     {"max_decode_length", c.max_decode_length},
                     {"window", c.window},
                     {"weight_decay", c.weight_decay},
                     {"max_grad_norm", c.max_grad_norm}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  TrainConfig d;
  c.backbone_id = j.value("backbone_id", d.backbone_id);
  c.teacher_id = j.value("teacher_id", d.teacher_id);
  c.weights = j.value("weights", d.weights);
  c.kd_temperature = j.value("kd_temperature", d.kd_temperature);
  c.learning_rate = j.value("learning_rate", d.learning_rate);
  c.max_sequence_length = j.value("max_sequence_length", d.max_sequence_length);
  c.iterations_or_epochs = j.value("iterations_or_epochs", d.iterations_or_epochs);
  c.schedule_unit =
      schedule_unit_from_string(j.value("schedule_unit", std::string(to_string(d.schedule_unit))));
  c.beam_size = j.value("beam_size", d.beam_size);
  c.seed = j.value("seed", d.seed);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.max_decode_length = j.value("max_decode_length", d.max_decode_length);
  c.window = j.value("window", d.window);
  c.weight_decay = j.value("weight_decay", d.weight_decay);
  c.max_grad_norm = j.value("max_grad_norm", d.max_grad_norm);
}

nlohmann::json to_json(const StepMetrics& m) {
  return nlohmann::json{{"step", m.step},
                        {"l_cls", m.l_cls},
                        {"l_clm", m.l_clm},
                        {"l_tf", m.l_tf},
                        {"l_total", m.l_total}};
}

std::vector<TrainingExample> prepare_examples(std::span<const corpus::Instance> instances,
                                              const nn::ModelBundle& tg) {
  std::vector<TrainingExample> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) {
    const auto targets = tg::generate_targets(tg, inst.post);
    out.push_back({tg::format_input(tg::target_string(targets), inst.post),
                   corpus::to_int(inst.label), inst.references});
  }
  return out;
}

namespace {

nn::DecodingSettings decoding_for(const TrainConfig& c) {
  nn::DecodingSettings d;
  d.beam_size = c.beam_size;
  d.max_decode_length = c.max_decode_length;
  d.window = c.window;
  d.max_input_length = c.max_sequence_length;
  return d;
}

nn::AdamWOptions optimizer_for(const TrainConfig& c) {
  nn::AdamWOptions o;
  o.learning_rate = c.learning_rate;
  o.weight_decay = c.weight_decay;
  o.max_grad_norm = c.max_grad_norm;
  return o;
}

void check_examples(std::span<const TrainingExample> train) {
  require(!train.empty(), ErrorCode::kPrecondition, "training set is empty");
  for (const auto& ex : train) {
    require(ex.label == 0 || ex.label == 1, ErrorCode::kInvalidArgument, "labels must be 0 or 1");
  }
}

// Runs `steps` optimizer updates; `example_step` builds one example's graph,
// backpropagates its scaled loss and returns its metrics.
template <typename ExampleStep>
void run_loop(nn::ModelBundle& bundle, std::size_t n, const TrainConfig& config,
              std::uint64_t stream, ExampleStep example_step, const StepCallback& on_step) {
  nn::AdamW adamw(bundle.model().params(), optimizer_for(config));
  BatchSchedule schedule(n, config.batch_size, config.seed ^ stream);
  const long long steps =
      total_steps(config.iterations_or_epochs, config.schedule_unit, n, config.batch_size);
  for (long long step = 1; step <= steps; ++step) {
    auto batch = schedule.next();
    bundle.model().params().zero_grad();
    const double scale = 1.0 / static_cast<double>(batch.size());
    StepMetrics m;
    m.step = step;
    for (auto idx : batch) {
      StepMetrics e = example_step(idx, scale);
      m.l_cls += e.l_cls * scale;
      m.l_clm += e.l_clm * scale;
      m.l_tf += e.l_tf * scale;
      m.l_total += e.l_total * scale;
    }
    adamw.step();
    if (on_step) on_step(m);
  }
}

}  // namespace

std::vector<int> explanation_target(const nn::ModelBundle& student, const TrainingExample& ex) {
  std::vector<int> target;
  if (ex.label == 0) {
    target.push_back(nn::Vocabulary::kNone);
  } else {
    require(!ex.references.empty(), ErrorCode::kEmptyInput,
            "toxic training example has no explanation");
    target = student.encode_target(ex.references.front());
    require(!target.empty(), ErrorCode::kEmptyInput, "explanation is empty after tokenization");
  }
  target.push_back(nn::Vocabulary::kEos);
  return target;
}

nn::ModelBundle train_teacher(std::span<const TrainingExample> train, const TrainConfig& config,
                              const StepCallback& on_step) {
  config.validate();
  check_examples(train);
  std::vector<std::string> inputs;
  for (const auto& ex : train) inputs.push_back(ex.input);
  auto bundle = nn::ModelBundle::from_backbone(nn::BundleKind::kTeacher, config.backbone_id,
                                               inputs, {}, decoding_for(config), config.seed);
  bundle.set_train_config(config);
  std::vector<std::vector<int>> ids;
  for (const auto& ex : train) ids.push_back(bundle.encode_text(ex.input));

  auto example_step = [&](std::size_t idx, double scale) {
    nn::Graph g;
    std::vector<char> valid(ids[idx].size(), 1);
    const auto& model = bundle.model();
    auto enc = model.encode(g, ids[idx], valid);
    auto probs = g.softmax(model.classifier_logits(g, model.pooled(g, enc, valid)));
    auto loss = g.class_nll(probs, train[idx].label);
    g.backward(g.scale(loss, scale));
    StepMetrics m;
    m.l_cls = g.scalar(loss);
    m.l_total = m.l_cls;
    return m;
  };
  run_loop(bundle, train.size(), config, 0x7465ULL, example_step, on_step);
  return bundle;
}

nn::ModelBundle train_teacher(const corpus::CorpusSplit& train, const nn::ModelBundle& tg,
                              const TrainConfig& config, const StepCallback& on_step) {
  auto examples = prepare_examples(train.instances(), tg);
  return train_teacher(examples, config, on_step);
}

nn::ModelBundle train_toxcl(std::span<const TrainingExample> train, const nn::ModelBundle& teacher,
                            const TrainConfig& config, const StepCallback& on_step) {
  config.validate();
  check_examples(train);
  require(teacher.kind() == nn::BundleKind::kTeacher && teacher.model().arch().classifier,
          ErrorCode::kInvalidArgument, "distillation needs a teacher classifier bundle");
  const std::uint64_t teacher_checksum = teacher.checksum();

  std::vector<std::string> inputs, targets;
  for (const auto& ex : train) {
    inputs.push_back(ex.input);
    if (ex.label == 1 && !ex.references.empty()) targets.push_back(ex.references.front());
  }
  auto bundle = nn::ModelBundle::from_backbone(nn::BundleKind::kStudent, config.backbone_id,
                                               inputs, targets, decoding_for(config), config.seed);
  auto recorded = config;
  recorded.teacher_id = config.teacher_id.empty() ? teacher.id() : config.teacher_id;
  bundle.set_train_config(recorded);

  // The teacher is frozen, so its soft labels are fixed for the whole run.
  std::vector<std::vector<int>> ids, dec_targets;
  std::vector<nn::Matrix> teacher_soft;
  for (const auto& ex : train) {
    ids.push_back(bundle.encode_text(ex.input));
    dec_targets.push_back(explanation_target(bundle, ex));
    const auto t = classifier_forward(teacher, ex.input);
    const auto soft = softened(t.logits, config.kd_temperature);
    nn::Matrix row(1, 2);
    row << soft[0], soft[1];
    teacher_soft.push_back(row);
  }

  const auto& w = config.weights;
  auto example_step = [&](std::size_t idx, double scale) {
    nn::Graph g;
    std::vector<char> valid(ids[idx].size(), 1);
    const auto& model = bundle.model();
    auto enc = model.encode(g, ids[idx], valid);
    auto logits = model.classifier_logits(g, model.pooled(g, enc, valid));
    auto l_cls = g.class_nll(g.softmax(logits), train[idx].label);
    auto l_clm = decoder_nll(g, model, enc, valid, dec_targets[idx], config.window);
    auto student_soft = g.softmax(g.scale(logits, 1.0 / config.kd_temperature));
    auto l_tf = g.kl_to_constant(student_soft, teacher_soft[idx]);
    const std::pair<double, nn::Graph::Var> terms[] = {
        {w.lambda * w.alpha, l_cls}, {w.lambda * w.beta, l_clm}, {w.gamma, l_tf}};
    auto total = g.weighted_sum(terms);
    g.backward(g.scale(total, scale));
    StepMetrics m;
    m.l_cls = g.scalar(l_cls);
    m.l_clm = g.scalar(l_clm);
    m.l_tf = g.scalar(l_tf);
    m.l_total = final_loss(joint_loss(m.l_cls, m.l_clm, w), m.l_tf, w);
    return m;
  };
  run_loop(bundle, train.size(), config, 0x7374ULL, example_step, on_step);

  require(teacher.checksum() == teacher_checksum, ErrorCode::kTeacherMutated,
          "teacher weights changed during student training");
  return bundle;
}

nn::ModelBundle train_toxcl(const corpus::CorpusSplit& train, const nn::ModelBundle& tg,
                            const nn::ModelBundle& teacher, const TrainConfig& config,
                            const StepCallback& on_step) {
  auto examples = prepare_examples(train.instances(), tg);
  return train_toxcl(examples, teacher, config, on_step);
}

}  // namespace toxcl::core
