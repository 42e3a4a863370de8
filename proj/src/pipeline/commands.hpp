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

#ifndef TOXCL_PIPELINE_COMMANDS_HPP_
#define TOXCL_PIPELINE_COMMANDS_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "corpus/corpus.hpp"
#include "inference/inference.hpp"
#include "metrics/metrics.hpp"
#include "nn/bundle.hpp"
#include "pipeline/config.hpp"

namespace toxcl::pipeline {

// Layout under output_dir:
//   data/{train,valid,test}.jsonl, data/stats.json
//   {tg,teacher,student}/bundle-<hash>/ plus a LATEST file naming the newest
//   reports/<split>-<hash>/{predictions.jsonl,report.json,report.tsv}
std::filesystem::path data_dir(const PipelineConfig& c);
std::filesystem::path split_path(const PipelineConfig& c, corpus::SplitName split);
std::filesystem::path stage_dir(const PipelineConfig& c, nn::BundleKind kind);
// Newest bundle of a stage; kMissingPrerequisite naming the stage if absent.
std::filesystem::path latest_bundle(const PipelineConfig& c, nn::BundleKind kind);

struct PreprocessSummary {
  std::size_t dropped = 0;
  std::map<std::string, corpus::Counts> splits;
  nlohmann::json stats;  // as written to data/stats.json
};

PreprocessSummary cmd_preprocess(const PipelineConfig& c);

struct TrainSummary {
  std::filesystem::path bundle_dir;
  std::string bundle_id;
  long long steps = 0;
  double first_loss = 0.0;
  double last_loss = 0.0;
  std::size_t removed_overlap = 0;  // TG only
};

TrainSummary cmd_train_tg(const PipelineConfig& c);
TrainSummary cmd_train_teacher(const PipelineConfig& c);
TrainSummary cmd_train(const PipelineConfig& c);

std::unique_ptr<inference::Pipeline> open_pipeline(const PipelineConfig& c);

std::vector<std::unique_ptr<metrics::Scorer>> make_scorers(const EvalConfig& e);

struct EvalRun {
  std::vector<metrics::PredictionRecord> records;
  metrics::EvalReport report;
};

// Predicts every instance with `components` and scores the result.
EvalRun evaluate_instances(const inference::Components& components,
                           std::span<const corpus::Instance> instances,
                           std::span<const metrics::Scorer* const> scorers,
                           const inference::PredictOptions& options);

struct EvalSummary {
  metrics::EvalReport report;
  std::filesystem::path report_dir;
};

EvalSummary cmd_evaluate(const PipelineConfig& c, const std::string& split);
// Scores an existing predictions file, writing report.json/report.tsv next
// to `out_dir` (created if needed).
EvalSummary cmd_evaluate_predictions(const PipelineConfig& c,
                                     const std::filesystem::path& predictions,
                                     const std::filesystem::path& out_dir);

}  // namespace toxcl::pipeline

#endif  // TOXCL_PIPELINE_COMMANDS_HPP_
