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

#ifndef TOXCL_TESTS_SUPPORT_TOY_HPP_
#define TOXCL_TESTS_SUPPORT_TOY_HPP_

#include <atomic>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "corpus/corpus.hpp"
#include "inference/inference.hpp"
#include "pipeline/config.hpp"

namespace toxcl::testing {

// 16 toxic + 16 non-toxic posts over eight groups. Toxic explanations name
// the group, so the decoder has to read it off the input.
std::vector<corpus::Instance> toy_corpus();

// Tiny backbones and learning rates that overfit toy_corpus() in a few
// hundred steps. Reads/writes under output_dir.
pipeline::PipelineConfig toy_config(const std::filesystem::path& output_dir);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// Random printable post (ASCII words, some non-ASCII, odd spacing); never blank.
std::string fuzz_post(std::mt19937_64& rng);

class StubTargetGenerator final : public inference::TargetGenerator {
 public:
  explicit StubTargetGenerator(std::string raw = "women") : raw_(std::move(raw)) {}
  tg::TargetGeneration generate(std::string_view) const override {
    return {raw_, tg::parse_target_string(raw_)};
  }

 private:
  std::string raw_;
};

// Decides the label from the model input: a fixed label, or a function.
class StubClassifier final : public inference::ToxicityClassifier {
 public:
  explicit StubClassifier(int label) : fn_([label](std::string_view) { return label; }) {}
  explicit StubClassifier(std::function<int(std::string_view)> fn) : fn_(std::move(fn)) {}
  core::ClassifierOutput classify(std::string_view input) const override;

 private:
  std::function<int(std::string_view)> fn_;
};

// Returns fixed candidates and counts calls. With sentinel_first, the
// unconstrained decode yields only the sentinel.
class CountingDecoder final : public inference::ExplanationDecoder {
 public:
  explicit CountingDecoder(bool sentinel_first = false) : sentinel_first_(sentinel_first) {}
  std::vector<inference::DecodedExplanation> decode(std::string_view input,
                                                    bool forbid_sentinel) const override;
  std::size_t calls() const { return calls_.load(); }

 private:
  bool sentinel_first_;
  mutable std::atomic<std::size_t> calls_{0};
};

}  // namespace toxcl::testing

#endif  // TOXCL_TESTS_SUPPORT_TOY_HPP_
