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

#include "tg/tg.hpp"

#include <algorithm>
#include <unordered_set>

#include "common/error.hpp"
#include "common/text.hpp"
#include "core/schedule.hpp"
#include "metrics/metrics.hpp"
#include "nn/beam_search.hpp"
#include "nn/params.hpp"
#include "nn/vocab.hpp"

namespace toxcl::tg {

TargetGroupSet::TargetGroupSet(std::span<const std::string> names) {
  for (const auto& n : names) {
    auto g = text::casefold(n);
    if (!g.empty()) groups_.push_back(std::move(g));
  }
  std::sort(groups_.begin(), groups_.end());
  groups_.erase(std::unique(groups_.begin(), groups_.end()), groups_.end());
}

TargetGroupSet parse_target_string(std::string_view raw) {
  std::vector<std::string> names;
  std::size_t start = 0;
  while (start <= raw.size()) {
    std::size_t comma = raw.find(',', start);
    if (comma == std::string_view::npos) comma = raw.size();
    auto name = text::casefold(raw.substr(start, comma - start));
    if (!name.empty() && name != kNoGroups) names.push_back(std::move(name));
    start = comma + 1;
  }
  return TargetGroupSet(names);
}

std::string build_target_label(const TargetGroupSet& groups) {
  if (groups.empty()) return std::string(kNoGroups);
  return text::join(groups.groups(), kGroupDelimiter);
}

std::string format_input(std::string_view target_string, std::string_view post) {
  require(!text::trim(post).empty(), ErrorCode::kEmptyInput, "post is empty");
  std::string out = "Target:";
  out += target_string;
  out += " Post:";
  out += post;
  return out;
}

DedupResult dedup_overlap(std::span<const corpus::Instance> tg_corpus,
                          std::span<const corpus::Instance> downstream) {
  std::unordered_set<std::string> seen;
  for (const auto& inst : downstream) seen.insert(text::casefold(inst.post));
  DedupResult out;
  for (const auto& inst : tg_corpus) {
    if (seen.contains(text::casefold(inst.post))) {
      ++out.removed;
    } else {
      out.cleaned.push_back(inst);
    }
  }
  return out;
}

void TgTrainConfig::validate() const {
  require(learning_rate > 0.0, ErrorCode::kInvalidArgument, "learning_rate must be > 0");
  require(beam_size >= 1, ErrorCode::kInvalidArgument, "beam_size must be >= 1");
  require(max_sequence_length >= 1, ErrorCode::kInvalidArgument,
          "max_sequence_length must be >= 1");
  require(iterations >= 1, ErrorCode::kInvalidArgument, "iterations must be >= 1");
  require(batch_size >= 1, ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  require(max_decode_length >= 1, ErrorCode::kInvalidArgument, "max_decode_length must be >= 1");
  require(optimizer == "adamw", ErrorCode::kInvalidArgument,
          "unsupported optimizer '" + optimizer + "'");
}

void to_json(nlohmann::json& j, const TgTrainConfig& c) {
  j = nlohmann::json{{"backbone_id", c.backbone_id},
                     {"learning_rate", c.learning_rate},
                     {"max_sequence_length", c.max_sequence_length},
                     {"iterations", c.iterations},
                     {"beam_size", c.beam_size},
                     {"optimizer", c.optimizer},
                     {"seed", c.seed},
                     {"batch_size", c.batch_size},
                     {"max_decode_length", c.max_decode_length},
                     {"weight_decay", c.weight_decay},
                     {"max_grad_norm", c.max_grad_norm}};
}

void from_json(const nlohmann::json& j, TgTrainConfig& c) {
  TgTrainConfig d;
  c.backbone_id = j.value("backbone_id", d.backbone_id);
  c.learning_rate = j.value("learning_rate", d.learning_rate);
  c.max_sequence_length = j.value("max_sequence_length", d.max_sequence_length);
  c.iterations = j.value("iterations", d.iterations);
  c.beam_size = j.value("beam_size", d.beam_size);
  c.optimizer = j.value("optimizer", d.optimizer);
  c.seed = j.value("seed", d.seed);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.max_decode_length = j.value("max_decode_length", d.max_decode_length);
  c.weight_decay = j.value("weight_decay", d.weight_decay);
  c.max_grad_norm = j.value("max_grad_norm", d.max_grad_norm);
}

std::vector<TgPair> supervision_pairs(std::span<const corpus::Instance> instances) {
  std::vector<TgPair> out;
  for (const auto& inst : instances) {
    if (!inst.annotated_groups) continue;
    out.push_back({inst.post, build_target_label(TargetGroupSet(*inst.annotated_groups))});
  }
  return out;
}

namespace {

struct Encoded {
  std::vector<int> input;
  std::vector<int> target;  // ends with [EOS]
};

Encoded encode_pair(const nn::ModelBundle& b, const TgPair& p) {
  Encoded e{b.encode_text(p.post), b.encode_target(p.target_label)};
  e.target.push_back(nn::Vocabulary::kEos);
  return e;
}

double pair_loss(const nn::ModelBundle& b, const Encoded& e, nn::Graph& g, bool backward,
                 double scale) {
  std::vector<char> valid(e.input.size(), 1);
  auto enc = b.model().encode(g, e.input, valid);
  auto nll = core::decoder_nll(g, b.model(), enc, valid, e.target, b.decoding().window);
  const double value = g.scalar(nll);
  if (backward) g.backward(g.scale(nll, scale));
  return value;
}

}  // namespace

nn::ModelBundle train_tg(std::span<const TgPair> train, const TgTrainConfig& config,
                         const std::function<void(const TgStep&)>& on_step) {
  config.validate();
  require(!train.empty(), ErrorCode::kPrecondition, "target-group training set is empty");
  std::vector<std::string> inputs, targets;
  for (const auto& p : train) {
    inputs.push_back(p.post);
    targets.push_back(p.target_label);
  }
  nn::DecodingSettings decoding;
  decoding.beam_size = config.beam_size;
  decoding.max_input_length = config.max_sequence_length;
  decoding.max_decode_length = config.max_decode_length;
  decoding.window = config.max_sequence_length;
  auto bundle = nn::ModelBundle::from_backbone(nn::BundleKind::kTargetGenerator,
                                               config.backbone_id, inputs, targets, decoding,
                                               config.seed);
  bundle.set_train_config(config);

  std::vector<Encoded> data;
  data.reserve(train.size());
  for (const auto& p : train) data.push_back(encode_pair(bundle, p));

  nn::AdamWOptions opt;
  opt.learning_rate = config.learning_rate;
  opt.weight_decay = config.weight_decay;
  opt.max_grad_norm = config.max_grad_norm;
  nn::AdamW adamw(bundle.model().params(), opt);
  core::BatchSchedule schedule(data.size(), config.batch_size, config.seed ^ 0x7467ULL);

  for (long long step = 1; step <= config.iterations; ++step) {
    auto batch = schedule.next();
    bundle.model().params().zero_grad();
    double total = 0.0;
    for (auto idx : batch) {
      nn::Graph g;
      total += pair_loss(bundle, data[idx], g, true, 1.0 / static_cast<double>(batch.size()));
    }
    adamw.step();
    if (on_step) on_step({step, total / static_cast<double>(batch.size())});
  }
  return bundle;
}

double tg_loss(const nn::ModelBundle& bundle, std::span<const TgPair> pairs) {
  require(!pairs.empty(), ErrorCode::kEmptyInput, "no pairs to score");
  double total = 0.0;
  for (const auto& p : pairs) {
    nn::Graph g(false);
    total += pair_loss(bundle, encode_pair(bundle, p), g, false, 1.0);
  }
  return total / static_cast<double>(pairs.size());
}

TargetGeneration generate_targets(const nn::ModelBundle& bundle, std::string_view post) {
  require(bundle.model().arch().decoder, ErrorCode::kInvalidArgument,
          "target generation needs a bundle with a decoder");
  nn::BeamOptions opts;
  opts.beam_size = bundle.decoding().beam_size;
  opts.max_length = bundle.decoding().max_decode_length;
  opts.window = bundle.decoding().window;
  auto hyps = nn::beam_search(bundle.model(), bundle.encode_text(post), opts);
  TargetGeneration out;
  if (!hyps.empty()) out.raw = bundle.vocab().decode(hyps.front().tokens);
  out.parsed = parse_target_string(out.raw);
  return out;
}

std::string target_string(const TargetGeneration& gen) { return build_target_label(gen.parsed); }

TgScores eval_tg(std::span<const TargetGroupSet> refs, std::span<const TargetGroupSet> hyps,
                 std::span<const std::string> raw_refs, std::span<const std::string> raw_hyps) {
  require(refs.size() == hyps.size() && raw_refs.size() == raw_hyps.size() &&
              refs.size() == raw_refs.size(),
          ErrorCode::kLengthMismatch, "target-group reference and hypothesis lists differ");
  require(!refs.empty(), ErrorCode::kEmptyInput, "no target groups to score");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const auto& r = refs[i].groups();
    const auto& h = hyps[i].groups();
    std::vector<std::string> common;
    std::set_intersection(r.begin(), r.end(), h.begin(), h.end(), std::back_inserter(common));
    tp += common.size();
    fp += h.size() - common.size();
    fn += r.size() - common.size();
  }
  TgScores s;
  // Nothing predicted and nothing expected anywhere: a perfect match.
  s.f1 = tp + fp + fn == 0 ? 100.0
                           : 100.0 * 2.0 * static_cast<double>(tp) /
                                 static_cast<double>(2 * tp + fp + fn);
  double rouge = 0.0;
  for (std::size_t i = 0; i < raw_refs.size(); ++i) {
    const bool ref_empty = text::metric_tokens(raw_refs[i]).empty();
    const bool hyp_empty = text::metric_tokens(raw_hyps[i]).empty();
    if (ref_empty && hyp_empty) {
      rouge += 100.0;
    } else {
      rouge += metrics::rouge_l(std::span<const std::string>(&raw_refs[i], 1), raw_hyps[i]);
    }
  }
  s.rouge_l = rouge / static_cast<double>(raw_refs.size());
  return s;
}

}  // namespace toxcl::tg
