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

#ifndef TOXCL_CORPUS_CORPUS_HPP_
#define TOXCL_CORPUS_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace toxcl::corpus {

// Serialized form of the "no explanation" value. In memory the sentinel is an
// empty reference list, never this string.
inline constexpr std::string_view kNoneSentinel = "[None]";

enum class Label : int { kNonToxic = 0, kToxic = 1 };

inline int to_int(Label l) { return static_cast<int>(l); }
Label label_from_int(long long v);  // throws kInvalidArgument outside {0,1}

struct Instance {
  std::string id;
  std::string post;
  Label label = Label::kNonToxic;
  // Reference explanations; empty means the NONE sentinel. The first entry
  // is the primary explanation.
  std::vector<std::string> references;
  std::optional<std::vector<std::string>> annotated_groups;

  bool has_explanation() const { return !references.empty(); }
  std::optional<std::string> explanation() const {
    if (references.empty()) return std::nullopt;
    return references.front();
  }
  bool operator==(const Instance&) const = default;
};

struct Counts {
  std::size_t n_toxic = 0;
  std::size_t n_nontoxic = 0;
  std::size_t n_total = 0;
  bool operator==(const Counts&) const = default;
};

enum class SplitName { kTrain, kValid, kTest };
std::string_view to_string(SplitName s);
SplitName split_from_string(std::string_view s);

// An ordered, id-unique collection of instances.
class CorpusSplit {
 public:
  CorpusSplit(SplitName name, std::vector<Instance> instances);

  SplitName name() const { return name_; }
  const std::vector<Instance>& instances() const { return instances_; }
  Counts counts() const { return counts_; }
  std::size_t size() const { return instances_.size(); }

 private:
  SplitName name_;
  std::vector<Instance> instances_;
  Counts counts_;
};

enum class CorpusFormat { kIhcTsv, kSbicCsv, kCanonicalJsonl };
CorpusFormat format_from_string(std::string_view s);  // "ihc_tsv" | "sbic_csv" | "canonical_jsonl"
std::string_view to_string(CorpusFormat f);

// Errors: kFileMissing, kUnknownFormat, kMalformedRow (row() is the 1-based
// data row: the line for JSONL, the record after the header for TSV/CSV).
std::vector<Instance> load_corpus(const std::filesystem::path& path, CorpusFormat format);

struct PreprocessResult {
  std::vector<Instance> kept;
  std::size_t dropped_count = 0;
};

// Drops toxic instances without an explanation and clears explanations of
// non-toxic ones. Order is preserved.
PreprocessResult preprocess(std::vector<Instance> instances);

struct SplitResult {
  CorpusSplit train_valid;
  CorpusSplit test;
};

// Per-class stratified split; the test side takes floor(fraction * n_class)
// instances of each class. Both sides keep input order.
SplitResult make_ihc_test_split(std::span<const Instance> instances, double fraction,
                                std::uint64_t seed);

Counts corpus_stats(const CorpusSplit& split);
Counts count_labels(std::span<const Instance> instances);

nlohmann::json to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j, std::size_t row);
void write_canonical_jsonl(const std::filesystem::path& path, std::span<const Instance> instances);

}  // namespace toxcl::corpus

#endif  // TOXCL_CORPUS_CORPUS_HPP_
