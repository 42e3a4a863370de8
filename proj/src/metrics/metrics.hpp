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

#ifndef TOXCL_METRICS_METRICS_HPP_
#define TOXCL_METRICS_METRICS_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace toxcl::metrics {

// counts[gold][pred]
struct Confusion {
  std::array<std::array<std::size_t, 2>, 2> counts{};
  std::size_t total() const;
  bool operator==(const Confusion&) const = default;
};

struct ClassificationMetrics {
  double accuracy = 0.0;  // percent
  double macro_f1 = 0.0;  // percent
  Confusion confusion;
};

// Macro F1 averages the per-class F1 of every class that occurs in the golds
// or the predictions; a class absent from both is skipped.
ClassificationMetrics classification_metrics(std::span<const int> golds, std::span<const int> preds);

// Sentence BLEU-4 (lowercase, whitespace tokens) as a percentage: clipped
// n-gram precisions for n = 1..4, geometric mean, brevity penalty. Orders for
// which the hypothesis has no n-grams are left out of the mean; a zero
// precision is replaced by 1e-9. Multiple references: the maximum score.
double bleu4(std::span<const std::string> references, std::string_view hypothesis);

// LCS F-measure (percentage), maximum over references.
double rouge_l(std::span<const std::string> references, std::string_view hypothesis,
               double beta = 1.0);

struct ScoringItem {
  std::vector<std::string> references;
  std::string hypothesis;
};

// Text similarity in [0, 100].
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::string name() const = 0;
  virtual double score(std::span<const std::string> references,
                       std::string_view hypothesis) const = 0;
  virtual std::vector<double> score_batch(std::span<const ScoringItem> items) const;
};

class Bleu4Scorer final : public Scorer {
 public:
  std::string name() const override { return "bleu4"; }
  double score(std::span<const std::string> refs, std::string_view hyp) const override {
    return bleu4(refs, hyp);
  }
};

class RougeLScorer final : public Scorer {
 public:
  explicit RougeLScorer(double beta = 1.0) : beta_(beta) {}
  std::string name() const override { return "rouge_l"; }
  double score(std::span<const std::string> refs, std::string_view hyp) const override {
    return rouge_l(refs, hyp, beta_);
  }

 private:
  double beta_;
};

// Delegates to an external program (METEOR, BERTScore, ...). The command
// reads JSONL {"references": [...], "hypothesis": "..."} on stdin and
// prints one score in [0, 100] per line.
class ExternalCommandScorer final : public Scorer {
 public:
  ExternalCommandScorer(std::string name, std::string command);
  std::string name() const override { return name_; }
  double score(std::span<const std::string> refs, std::string_view hyp) const override;
  std::vector<double> score_batch(std::span<const ScoringItem> items) const override;

 private:
  std::string name_;
  std::string command_;
};

// Resolves "bleu4", "rouge_l", or a name present in `external` (name -> command).
std::unique_ptr<Scorer> make_scorer(const std::string& name,
                                    const std::map<std::string, std::string>& external = {});

// Gold: reference list, empty for the NONE sentinel. Hypothesis: nullopt for
// NONE. Per item: both NONE adds 100, both text adds the scorer value, a
// mismatch adds 0; each accumulator is divided by N.
using GoldExplanation = std::vector<std::string>;
using HypExplanation = std::optional<std::string>;

std::map<std::string, double> explanation_eval(std::span<const GoldExplanation> golds,
                                               std::span<const HypExplanation> hyps,
                                               std::span<const Scorer* const> scorers);

enum class DistanceMetric { kNominal, kOrdinal, kInterval };
DistanceMetric distance_metric_from_string(std::string_view s);

// ratings[rater][item]; nullopt marks a missing rating.
double krippendorff_alpha(const std::vector<std::vector<std::optional<double>>>& ratings,
                          DistanceMetric metric);

struct EvalReport {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::map<std::string, double> per_scorer;
  std::size_t n = 0;
  Confusion confusion;
};

nlohmann::json to_json(const EvalReport& r);
EvalReport report_from_json(const nlohmann::json& j);
std::string tsv_header(const EvalReport& r);
std::string tsv_row(const EvalReport& r, std::string_view split);

// One line of the predictions file consumed by evaluation.
struct PredictionRecord {
  std::string id;
  int gold_label = 0;
  int pred_label = 0;
  GoldExplanation gold_explanations;
  HypExplanation pred_explanation;
};

nlohmann::json to_json(const PredictionRecord& r);
PredictionRecord prediction_record_from_json(const nlohmann::json& j, std::size_t row);
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);
void write_predictions(const std::filesystem::path& path, std::span<const PredictionRecord> records);

EvalReport evaluate(std::span<const PredictionRecord> records,
                    std::span<const Scorer* const> scorers);

}  // namespace toxcl::metrics

#endif  // TOXCL_METRICS_METRICS_HPP_
