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

#include "pipeline/commands.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <fstream>

#include "common/error.hpp"
#include "common/text.hpp"
#include "core/training.hpp"
#include "tg/tg.hpp"

namespace toxcl::pipeline {
namespace fs = std::filesystem;
namespace {

constexpr const char* kLatest = "LATEST";

// Advisory lock on output_dir for the lifetime of one command.
class OutputLock {
 public:
  explicit OutputLock(const fs::path& dir) {
    fs::create_directories(dir);
    const auto path = dir / ".toxcl.lock";
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ < 0) fail(ErrorCode::kIo, "cannot open lock file " + path.string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      fail(ErrorCode::kLocked, "another command is writing to " + dir.string());
    }
  }
  ~OutputLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  int fd_ = -1;
};

void write_text(const fs::path& path, const std::string& content) {
  const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIo, "cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

// Moves a fully written staging directory to its final name.
void publish_dir(const fs::path& staging, const fs::path& final_dir) {
  fs::remove_all(final_dir);
  fs::rename(staging, final_dir);
  write_text(final_dir.parent_path() / kLatest, final_dir.filename().string() + "\n");
}

std::string jsonl(std::span<const nlohmann::json> rows) {
  std::string out;
  for (const auto& r : rows) out += r.dump() + "\n";
  return out;
}

fs::path staging_dir(const fs::path& parent) {
  fs::create_directories(parent);
  return parent / (".staging-" + std::to_string(::getpid()));
}

std::vector<corpus::Instance> load_split(const PipelineConfig& c, corpus::SplitName split) {
  const auto path = split_path(c, split);
  if (!fs::exists(path)) {
    fail(ErrorCode::kMissingPrerequisite, "data: " + path.string() + " not found (run preprocess)");
  }
  return corpus::load_corpus(path, corpus::CorpusFormat::kCanonicalJsonl);
}

TrainSummary save_stage(const PipelineConfig& c, nn::ModelBundle& bundle,
                        std::span<const nlohmann::json> step_log) {
  const auto parent = stage_dir(c, bundle.kind());
  const std::string hash = text::hex64(
      text::fnv1a(text::hex64(bundle.checksum()) + bundle.train_config().dump()));
  const auto staging = staging_dir(parent);
  fs::remove_all(staging);
  bundle.save(staging);
  write_text(staging / "metrics.jsonl", jsonl(step_log));
  const auto final_dir = parent / ("bundle-" + hash.substr(0, 12));
  publish_dir(staging, final_dir);
  TrainSummary s;
  s.bundle_dir = final_dir;
  s.bundle_id = bundle.id();
  s.steps = static_cast<long long>(step_log.size());
  if (!step_log.empty()) {
    const char* key = bundle.kind() == nn::BundleKind::kTargetGenerator ? "loss" : "l_total";
    s.first_loss = step_log.front().at(key).get<double>();
    s.last_loss = step_log.back().at(key).get<double>();
  }
  return s;
}

}  // namespace

fs::path data_dir(const PipelineConfig& c) { return fs::path(c.paths.output_dir) / "data"; }

fs::path split_path(const PipelineConfig& c, corpus::SplitName split) {
  return data_dir(c) / (std::string(corpus::to_string(split)) + ".jsonl");
}

fs::path stage_dir(const PipelineConfig& c, nn::BundleKind kind) {
  return fs::path(c.paths.output_dir) / std::string(nn::to_string(kind));
}

fs::path latest_bundle(const PipelineConfig& c, nn::BundleKind kind) {
  const auto stage = std::string(nn::to_string(kind));
  const auto pointer = stage_dir(c, kind) / kLatest;
  std::ifstream in(pointer);
  std::string name;
  if (in) std::getline(in, name);
  name = text::trim(name);
  const auto dir = stage_dir(c, kind) / name;
  if (name.empty() || !fs::exists(dir / "config.json")) {
    fail(ErrorCode::kMissingPrerequisite,
         stage + ": no trained " + stage + " bundle under " + stage_dir(c, kind).string());
  }
  return dir;
}

PreprocessSummary cmd_preprocess(const PipelineConfig& c) {
  c.validate();
  OutputLock lock(c.paths.output_dir);
  const auto format = corpus::format_from_string(c.paths.corpus_format);
  auto load = [&](const std::string& path) {
    require(!path.empty(), ErrorCode::kInvalidArgument, "no corpus path configured");
    if (!fs::exists(path)) fail(ErrorCode::kFileMissing, "corpus not found: " + path);
    return corpus::load_corpus(path, format);
  };

  PreprocessSummary summary;
  std::vector<corpus::CorpusSplit> splits;
  if (!c.paths.corpus_splits.empty()) {
    for (const auto& [name, path] : c.paths.corpus_splits) {
      auto pre = corpus::preprocess(load(path));
      summary.dropped += pre.dropped_count;
      splits.emplace_back(corpus::split_from_string(name), std::move(pre.kept));
    }
  } else {
    auto pre = corpus::preprocess(load(c.paths.corpus));
    summary.dropped = pre.dropped_count;
    auto split = corpus::make_ihc_test_split(pre.kept, c.preprocess.test_fraction,
                                             c.preprocess.seed);
    splits.push_back(std::move(split.train_valid));
    splits.push_back(std::move(split.test));
  }

  fs::create_directories(data_dir(c));
  nlohmann::json split_stats = nlohmann::json::object();
  for (const auto& s : splits) {
    const auto counts = corpus::corpus_stats(s);
    const std::string name(corpus::to_string(s.name()));
    summary.splits[name] = counts;
    split_stats[name] = {{"n_toxic", counts.n_toxic},
                         {"n_nontoxic", counts.n_nontoxic},
                         {"n_total", counts.n_total}};
    corpus::write_canonical_jsonl(split_path(c, s.name()), s.instances());
  }
  summary.stats = {{"dropped", summary.dropped}, {"splits", split_stats}};
  write_text(data_dir(c) / "stats.json", summary.stats.dump(2) + "\n");
  return summary;
}

TrainSummary cmd_train_tg(const PipelineConfig& c) {
  c.validate();
  OutputLock lock(c.paths.output_dir);
  std::vector<corpus::Instance> supervision;
  std::size_t removed = 0;
  if (!c.paths.tg_supervision.empty()) {
    if (!fs::exists(c.paths.tg_supervision)) {
      fail(ErrorCode::kFileMissing, "TG supervision not found: " + c.paths.tg_supervision);
    }
    supervision =
        corpus::load_corpus(c.paths.tg_supervision, corpus::CorpusFormat::kCanonicalJsonl);
    std::vector<corpus::Instance> downstream;
    for (auto split : {corpus::SplitName::kTrain, corpus::SplitName::kValid,
                       corpus::SplitName::kTest}) {
      if (!fs::exists(split_path(c, split))) continue;
      auto part = corpus::load_corpus(split_path(c, split), corpus::CorpusFormat::kCanonicalJsonl);
      downstream.insert(downstream.end(), part.begin(), part.end());
    }
    auto dedup = tg::dedup_overlap(supervision, downstream);
    supervision = std::move(dedup.cleaned);
    removed = dedup.removed;
  } else {
    supervision = load_split(c, corpus::SplitName::kTrain);
  }
  const auto pairs = tg::supervision_pairs(supervision);
  require(!pairs.empty(), ErrorCode::kPrecondition,
          "no instances with annotated_groups to train the target generator on");

  std::vector<nlohmann::json> log;
  auto bundle = tg::train_tg(pairs, c.tg, [&](const tg::TgStep& s) {
    log.push_back({{"step", s.step}, {"loss", s.loss}});
  });
  auto summary = save_stage(c, bundle, log);
  summary.removed_overlap = removed;
  return summary;
}

TrainSummary cmd_train_teacher(const PipelineConfig& c) {
  c.validate();
  OutputLock lock(c.paths.output_dir);
  const auto tg_bundle = nn::ModelBundle::load(latest_bundle(c, nn::BundleKind::kTargetGenerator));
  const auto train = load_split(c, corpus::SplitName::kTrain);
  const auto examples = core::prepare_examples(train, tg_bundle);
  std::vector<nlohmann::json> log;
  auto bundle = core::train_teacher(examples, c.teacher, [&](const core::StepMetrics& m) {
    log.push_back(core::to_json(m));
  });
  return save_stage(c, bundle, log);
}

TrainSummary cmd_train(const PipelineConfig& c) {
  c.validate();
  OutputLock lock(c.paths.output_dir);
  const auto teacher_dir = latest_bundle(c, nn::BundleKind::kTeacher);
  const auto tg_dir = latest_bundle(c, nn::BundleKind::kTargetGenerator);
  const auto teacher = nn::ModelBundle::load(teacher_dir);
  const auto tg_bundle = nn::ModelBundle::load(tg_dir);
  const auto train = load_split(c, corpus::SplitName::kTrain);
  const auto examples = core::prepare_examples(train, tg_bundle);
  auto config = c.student;
  config.teacher_id = teacher.id();
  std::vector<nlohmann::json> log;
  auto bundle = core::train_toxcl(examples, teacher, config, [&](const core::StepMetrics& m) {
    log.push_back(core::to_json(m));
  });
  return save_stage(c, bundle, log);
}

std::unique_ptr<inference::Pipeline> open_pipeline(const PipelineConfig& c) {
  auto student = nn::ModelBundle::load(latest_bundle(c, nn::BundleKind::kStudent));
  auto tg_bundle = nn::ModelBundle::load(latest_bundle(c, nn::BundleKind::kTargetGenerator));
  return std::make_unique<inference::Pipeline>(std::move(tg_bundle), std::move(student),
                                               c.inference.beam_size);
}

std::vector<std::unique_ptr<metrics::Scorer>> make_scorers(const EvalConfig& e) {
  std::vector<std::unique_ptr<metrics::Scorer>> out;
  for (const auto& name : e.scorers) out.push_back(metrics::make_scorer(name, e.external_scorers));
  return out;
}

EvalRun evaluate_instances(const inference::Components& components,
                           std::span<const corpus::Instance> instances,
                           std::span<const metrics::Scorer* const> scorers,
                           const inference::PredictOptions& options) {
  std::vector<std::string> posts;
  for (const auto& inst : instances) posts.push_back(inst.post);
  const auto preds = inference::predict_batch(components, posts, options);
  EvalRun run;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    metrics::PredictionRecord r;
    r.id = instances[i].id;
    r.gold_label = corpus::to_int(instances[i].label);
    r.pred_label = preds[i].label;
    r.gold_explanations = instances[i].references;
    r.pred_explanation = preds[i].explanation;
    run.records.push_back(std::move(r));
  }
  run.report = metrics::evaluate(run.records, scorers);
  return run;
}

namespace {

std::vector<const metrics::Scorer*> raw(const std::vector<std::unique_ptr<metrics::Scorer>>& v) {
  std::vector<const metrics::Scorer*> out;
  for (const auto& s : v) out.push_back(s.get());
  return out;
}

void write_report(const fs::path& dir, const metrics::EvalReport& report,
                  const std::string& split) {
  write_text(dir / "report.json", metrics::to_json(report).dump(2) + "\n");
  write_text(dir / "report.tsv",
             metrics::tsv_header(report) + "\n" + metrics::tsv_row(report, split) + "\n");
}

}  // namespace

EvalSummary cmd_evaluate(const PipelineConfig& c, const std::string& split) {
  c.validate();
  const auto split_name = corpus::split_from_string(split);
  auto pipe = open_pipeline(c);
  const auto instances = load_split(c, split_name);
  const auto scorers = make_scorers(c.eval);
  const auto scorer_ptrs = raw(scorers);
  inference::PredictOptions options;
  options.conditional_decoding = c.inference.conditional_decoding;
  auto run = evaluate_instances(pipe->components(), instances, scorer_ptrs, options);

  OutputLock lock(c.paths.output_dir);
  std::vector<nlohmann::json> rows;
  for (const auto& r : run.records) rows.push_back(metrics::to_json(r));
  const std::string preds = jsonl(rows);
  const auto parent = fs::path(c.paths.output_dir) / "reports";
  const auto staging = staging_dir(parent);
  fs::remove_all(staging);
  fs::create_directories(staging);
  write_text(staging / "predictions.jsonl", preds);
  const std::string name(corpus::to_string(split_name));
  write_report(staging, run.report, name);
  const auto final_dir =
      parent / (name + "-" + text::hex64(text::fnv1a(preds + metrics::to_json(run.report).dump()))
                                 .substr(0, 12));
  publish_dir(staging, final_dir);
  return {run.report, final_dir};
}

EvalSummary cmd_evaluate_predictions(const PipelineConfig& c, const fs::path& predictions,
                                     const fs::path& out_dir) {
  c.validate();
  const auto records = metrics::read_predictions(predictions);
  const auto scorers = make_scorers(c.eval);
  const auto report = metrics::evaluate(records, raw(scorers));
  fs::create_directories(out_dir);
  write_report(out_dir, report, predictions.stem().string());
  return {report, out_dir};
}

}  // namespace toxcl::pipeline
