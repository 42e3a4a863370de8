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

#include "pipeline/config.hpp"

#include <fstream>

#include "common/error.hpp"
#include "common/text.hpp"
#include "metrics/metrics.hpp"

namespace toxcl::pipeline {
namespace {

nlohmann::json paths_json(const PathsConfig& p) {
  return {{"corpus", p.corpus},
          {"corpus_format", p.corpus_format},
          {"corpus_splits", p.corpus_splits},
          {"tg_supervision", p.tg_supervision},
          {"output_dir", p.output_dir}};
}

// Keys that hold user-defined names rather than fixed fields.
bool is_free_map(const std::string& dotted_parent) {
  return dotted_parent == "paths.corpus_splits" || dotted_parent == "eval.external_scorers";
}

void reject_unknown(const nlohmann::json& given, const nlohmann::json& known,
                    const std::string& prefix) {
  if (!given.is_object()) return;
  for (const auto& [k, v] : given.items()) {
    const std::string path = prefix.empty() ? k : prefix + "." + k;
    require(known.contains(k), ErrorCode::kInvalidArgument, "unknown config key '" + path + "'");
    if (!is_free_map(path)) reject_unknown(v, known.at(k), path);
  }
}

}  // namespace

core::TrainConfig PipelineConfig::default_teacher() {
  core::TrainConfig t;
  t.weights = core::LossWeights{1.0, 0.0, 1.0, 0.0};
  return t;
}

void PipelineConfig::validate() const {
  require(!paths.output_dir.empty(), ErrorCode::kInvalidArgument, "paths.output_dir is empty");
  corpus::format_from_string(paths.corpus_format);
  for (const auto& [name, path] : paths.corpus_splits) corpus::split_from_string(name);
  require(preprocess.test_fraction > 0.0 && preprocess.test_fraction < 1.0,
          ErrorCode::kInvalidArgument, "preprocess.test_fraction must be in (0, 1)");
  tg.validate();
  teacher.validate();
  student.validate();
  require(!eval.scorers.empty(), ErrorCode::kInvalidArgument, "eval.scorers is empty");
  for (const auto& s : eval.scorers) metrics::make_scorer(s, eval.external_scorers);
  require(service.port >= 0 && service.port <= 65535, ErrorCode::kInvalidArgument,
          "service.port out of range");
  require(service.max_batch >= 1, ErrorCode::kInvalidArgument, "service.max_batch must be >= 1");
  require(inference.beam_size >= 1, ErrorCode::kInvalidArgument,
          "inference.beam_size must be >= 1");
}

nlohmann::json to_json(const PipelineConfig& c) {
  return nlohmann::json{
      {"paths", paths_json(c.paths)},
      {"preprocess", {{"test_fraction", c.preprocess.test_fraction}, {"seed", c.preprocess.seed}}},
      {"tg", c.tg},
      {"teacher", c.teacher},
      {"student", c.student},
      {"eval",
       {{"scorers", c.eval.scorers},
        {"external_scorers", c.eval.external_scorers},
        {"split", c.eval.split}}},
      {"service",
       {{"host", c.service.host}, {"port", c.service.port}, {"max_batch", c.service.max_batch}}},
      {"inference",
       {{"beam_size", c.inference.beam_size},
        {"conditional_decoding", c.inference.conditional_decoding}}}};
}

PipelineConfig config_from_json(const nlohmann::json& j) {
  require(j.is_object(), ErrorCode::kParse, "config must be a JSON object");
  PipelineConfig d;
  reject_unknown(j, to_json(d), "");
  PipelineConfig c;
  try {
    const auto empty = nlohmann::json::object();
    const auto& p = j.contains("paths") ? j.at("paths") : empty;
    c.paths.corpus = p.value("corpus", d.paths.corpus);
    c.paths.corpus_format = p.value("corpus_format", d.paths.corpus_format);
    c.paths.corpus_splits = p.value("corpus_splits", d.paths.corpus_splits);
    c.paths.tg_supervision = p.value("tg_supervision", d.paths.tg_supervision);
    c.paths.output_dir = p.value("output_dir", d.paths.output_dir);
    const auto& pre = j.contains("preprocess") ? j.at("preprocess") : empty;
    c.preprocess.test_fraction = pre.value("test_fraction", d.preprocess.test_fraction);
    c.preprocess.seed = pre.value("seed", d.preprocess.seed);
    if (j.contains("tg")) c.tg = j.at("tg").get<tg::TgTrainConfig>();
    // Partial teacher/student sections overlay their own defaults.
    auto overlay = [](const core::TrainConfig& base, const nlohmann::json& part) {
      nlohmann::json merged = base;
      merged.merge_patch(part);
      return merged.get<core::TrainConfig>();
    };
    if (j.contains("teacher")) c.teacher = overlay(d.teacher, j.at("teacher"));
    if (j.contains("student")) c.student = overlay(d.student, j.at("student"));
    const auto& ev = j.contains("eval") ? j.at("eval") : empty;
    c.eval.scorers = ev.value("scorers", d.eval.scorers);
    c.eval.external_scorers = ev.value("external_scorers", d.eval.external_scorers);
    c.eval.split = ev.value("split", d.eval.split);
    const auto& sv = j.contains("service") ? j.at("service") : empty;
    c.service.host = sv.value("host", d.service.host);
    c.service.port = sv.value("port", d.service.port);
    c.service.max_batch = sv.value("max_batch", d.service.max_batch);
    const auto& inf = j.contains("inference") ? j.at("inference") : empty;
    c.inference.beam_size = inf.value("beam_size", d.inference.beam_size);
    c.inference.conditional_decoding =
        inf.value("conditional_decoding", d.inference.conditional_decoding);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kFileMissing, "config file not found: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const PipelineConfig& c, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << to_json(c).dump(2) << '\n';
}

void apply_override(PipelineConfig& c, std::string_view assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string_view::npos && eq > 0, ErrorCode::kInvalidArgument,
          "override must look like key.path=value");
  const std::string key = text::trim(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::parse_error&) {
    value = raw;
  }
  nlohmann::json j = to_json(c);
  nlohmann::json* node = &j;
  std::string parent;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    require(!part.empty() && node->is_object(), ErrorCode::kInvalidArgument,
            "bad config key '" + key + "'");
    if (!node->contains(part)) {
      require(dot == std::string::npos && is_free_map(parent), ErrorCode::kInvalidArgument,
              "unknown config key '" + key + "'");
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    parent = parent.empty() ? part : parent + "." + part;
    start = dot + 1;
  }
  // Keep numbers numeric where the field is numeric and strings as strings.
  if (node->is_string() && !value.is_string()) value = raw;
  *node = value;
  c = config_from_json(j);
}

}  // namespace toxcl::pipeline
