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

#include "support/toy.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>

namespace toxcl::testing {

std::vector<corpus::Instance> toy_corpus() {
  const std::vector<std::string> groups = {"women", "jews",   "muslims", "immigrants",
                                           "asians", "blacks", "gays",    "mexicans"};
  const std::vector<std::string> places = {"park",  "garden", "river", "forest",
                                           "lake",  "field",  "beach", "harbor"};
  std::vector<corpus::Instance> out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    const auto n = std::to_string(i);
    out.push_back({"t" + n + "a", g + " are ruining everything for real people",
                   corpus::Label::kToxic, {g + " are harmful"}, std::vector<std::string>{g}});
    out.push_back({"t" + n + "b", "we all know what " + g + " really do at night",
                   corpus::Label::kToxic, {g + " are criminals"}, std::vector<std::string>{g}});
    out.push_back({"n" + n + "a", g + " organized a lovely charity picnic today",
                   corpus::Label::kNonToxic, {}, std::vector<std::string>{g}});
    out.push_back({"n" + n + "b", "the weather is nice near the " + places[i],
                   corpus::Label::kNonToxic, {}, std::vector<std::string>{}});
  }
  return out;
}

pipeline::PipelineConfig toy_config(const std::filesystem::path& output_dir) {
  pipeline::PipelineConfig c;
  c.paths.output_dir = output_dir.string();
  c.tg.backbone_id = "toxcl-tiny";
  c.tg.learning_rate = 3e-3;
  c.tg.iterations = 300;
  c.tg.max_sequence_length = 32;
  c.tg.max_decode_length = 8;
  for (auto* t : {&c.teacher, &c.student}) {
    t->backbone_id = "toxcl-tiny";
    t->learning_rate = 3e-3;
    t->schedule_unit = core::ScheduleUnit::kIterations;
    t->max_sequence_length = 32;
    t->max_decode_length = 12;
  }
  c.teacher.iterations_or_epochs = 150;
  c.student.iterations_or_epochs = 600;
  c.service.port = 0;
  c.service.max_batch = 8;
  return c;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("toxcl-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fuzz_post(std::mt19937_64& rng) {
  static const std::vector<std::string> words = {
      "they", "are", "people", "women", "jews", "never", "trust", "über", "naïve", "日本",
      "😀",    "Post:", "Target:", "none", ",", "!!", "[None]", "immigrants", "café", "x"};
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<int> space(0, 5);
  std::string out;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    if (i > 0) out += space(rng) == 0 ? "  " : " ";
    out += words[pick(rng)];
  }
  return out;
}

core::ClassifierOutput StubClassifier::classify(std::string_view input) const {
  core::ClassifierOutput out;
  const int label = fn_(input);
  out.probs = label == 1 ? core::Probs{0.2, 0.8} : core::Probs{0.8, 0.2};
  out.logits = {out.probs[0], out.probs[1]};
  return out;
}

std::vector<inference::DecodedExplanation> CountingDecoder::decode(std::string_view,
                                                                   bool forbid_sentinel) const {
  ++calls_;
  if (sentinel_first_ && !forbid_sentinel) {
    return {{"[None]", true, -0.1}, {"", true, -0.5}};
  }
  return {{"they are targeted", false, -0.2}, {"a second beam", false, -0.9}};
}

}  // namespace toxcl::testing
