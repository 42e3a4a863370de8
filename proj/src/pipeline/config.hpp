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

#ifndef TOXCL_PIPELINE_CONFIG_HPP_
#define TOXCL_PIPELINE_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "core/training.hpp"
#include "json.hpp"
#include "tg/tg.hpp"

namespace toxcl::pipeline {

struct PathsConfig {
  // A single raw corpus that preprocessing splits into train/test...
  std::string corpus;
  std::string corpus_format = "canonical_jsonl";
  // ...or corpora that are already split, keyed by train/valid/test.
  std::map<std::string, std::string> corpus_splits;
  // canonical_jsonl with annotated_groups; empty means "use data/train.jsonl".
  std::string tg_supervision;
  std::string output_dir = "runs";

  bool operator==(const PathsConfig&) const = default;
};

struct PreprocessConfig {
  double test_fraction = 0.2;
  std::uint64_t seed = 42;
  bool operator==(const PreprocessConfig&) const = default;
};

struct EvalConfig {
  std::vector<std::string> scorers{"bleu4", "rouge_l"};
  // name -> shell command honoring the external scorer protocol
  std::map<std::string, std::string> external_scorers;
  std::string split = "test";
  bool operator==(const EvalConfig&) const = default;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  int max_batch = 32;
  bool operator==(const ServiceConfig&) const = default;
};

struct InferenceConfig {
  int beam_size = 4;
  bool conditional_decoding = true;
  bool operator==(const InferenceConfig&) const = default;
};

struct PipelineConfig {
  PathsConfig paths;
  PreprocessConfig preprocess;
  tg::TgTrainConfig tg;
  core::TrainConfig teacher = default_teacher();
  core::TrainConfig student;
  EvalConfig eval;
  ServiceConfig service;
  InferenceConfig inference;

  static core::TrainConfig default_teacher();
  // Throws kInvalidArgument on out-of-range values or unknown scorers.
  void validate() const;
  bool operator==(const PipelineConfig&) const = default;
};

nlohmann::json to_json(const PipelineConfig& c);
// Missing keys take their defaults; unknown keys are rejected.
PipelineConfig config_from_json(const nlohmann::json& j);

PipelineConfig load_config(const std::filesystem::path& path);
void save_config(const PipelineConfig& c, const std::filesystem::path& path);

// "a.b.c=value". The value is parsed as JSON when possible, otherwise taken
// as a string. Keys must exist, except inside free-form maps.
void apply_override(PipelineConfig& c, std::string_view assignment);

}  // namespace toxcl::pipeline

#endif  // TOXCL_PIPELINE_CONFIG_HPP_
