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

#ifndef TOXCL_TG_TG_HPP_
#define TOXCL_TG_TG_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corpus/corpus.hpp"
#include "json.hpp"
#include "nn/bundle.hpp"

namespace toxcl::tg {

inline constexpr std::string_view kGroupDelimiter = ", ";
inline constexpr std::string_view kNoGroups = "none";

// Case-folded, sorted, deduplicated group names; empty names are dropped.
class TargetGroupSet {
 public:
  TargetGroupSet() = default;
  explicit TargetGroupSet(std::span<const std::string> names);
  TargetGroupSet(std::initializer_list<std::string> names)
      : TargetGroupSet(std::span<const std::string>(names.begin(), names.size())) {}

  const std::vector<std::string>& groups() const { return groups_; }
  bool empty() const { return groups_.empty(); }
  std::size_t size() const { return groups_.size(); }
  bool operator==(const TargetGroupSet&) const = default;

 private:
  std::vector<std::string> groups_;
};

// Splits on ',' and normalizes; the literal "none" is not a group.
TargetGroupSet parse_target_string(std::string_view raw);

// Groups joined by ", " in ascending order; the empty set yields "none".
std::string build_target_label(const TargetGroupSet& groups);

// "Target:{G} Post:{IP}". Throws kEmptyInput when the post is blank.
std::string format_input(std::string_view target_string, std::string_view post);

struct DedupResult {
  std::vector<corpus::Instance> cleaned;
  std::size_t removed = 0;
};

// Drops TG supervision rows whose normalized, case-folded post also occurs
// downstream.
DedupResult dedup_overlap(std::span<const corpus::Instance> tg_corpus,
                          std::span<const corpus::Instance> downstream);

struct TgTrainConfig {
  std::string backbone_id = "toxcl-small";
  double learning_rate = 1e-5;
  int max_sequence_length = 256;
  long long iterations = 20000;
  int beam_size = 4;
  std::string optimizer = "adamw";
  std::uint64_t seed = 42;
  int batch_size = 8;
  int max_decode_length = 16;
  double weight_decay = 0.01;
  double max_grad_norm = 1.0;

  void validate() const;
  bool operator==(const TgTrainConfig&) const = default;
};

void to_json(nlohmann::json& j, const TgTrainConfig& c);
void from_json(const nlohmann::json& j, TgTrainConfig& c);

struct TgPair {
  std::string post;
  std::string target_label;
};

// (post, build_target_label(annotated_groups)) for every instance that
// carries annotated groups.
std::vector<TgPair> supervision_pairs(std::span<const corpus::Instance> instances);

struct TgStep {
  long long step = 0;
  double loss = 0.0;
};

// Sequence cross-entropy on target_label given post. Throws kPrecondition on
// an empty training set.
nn::ModelBundle train_tg(std::span<const TgPair> train, const TgTrainConfig& config,
                         const std::function<void(const TgStep&)>& on_step = {});

// Mean per-token NLL of the pairs under the bundle, without updates.
double tg_loss(const nn::ModelBundle& bundle, std::span<const TgPair> pairs);

struct TargetGeneration {
  std::string raw;
  TargetGroupSet parsed;
};

// Beam search with the bundle's decoding settings. An empty decode gives
// raw "" and an empty set.
TargetGeneration generate_targets(const nn::ModelBundle& bundle, std::string_view post);

// The target string fed to format_input: "none" when nothing was generated.
std::string target_string(const TargetGeneration& gen);

struct TgScores {
  double f1 = 0.0;
  double rouge_l = 0.0;
};

// Micro-averaged set-overlap F1 and mean ROUGE-L over raw strings, both in
// percent.
TgScores eval_tg(std::span<const TargetGroupSet> refs, std::span<const TargetGroupSet> hyps,
                 std::span<const std::string> raw_refs, std::span<const std::string> raw_hyps);

}  // namespace toxcl::tg

#endif  // TOXCL_TG_TG_HPP_
