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

#include "corpus/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <unordered_set>

#include "common/error.hpp"
#include "common/text.hpp"
#include "corpus/delimited.hpp"

namespace toxcl::corpus {
namespace {

using nlohmann::json;

Error row_error(std::size_t row, const std::string& what) {
  return Error(ErrorCode::kMalformedRow, "row " + std::to_string(row) + ": " + what, row);
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    fail(ErrorCode::kFileMissing, "corpus file not found: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

void add_reference(std::vector<std::string>& refs, std::string_view raw) {
  std::string e = text::normalize(raw);
  if (e.empty()) return;
  if (std::find(refs.begin(), refs.end(), e) == refs.end()) refs.push_back(std::move(e));
}

// Accepts "a, b", ["a", "b"] and ['a', 'b'].
std::vector<std::string> parse_group_field(std::string_view raw) {
  std::string s = text::trim(raw);
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string t = text::trim(item);
    while (!t.empty() && (t.front() == '"' || t.front() == '\'')) t.erase(t.begin());
    while (!t.empty() && (t.back() == '"' || t.back() == '\'')) t.pop_back();
    t = text::normalize(t);
    if (!t.empty() && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

std::vector<Instance> load_jsonl(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  std::vector<Instance> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (text::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw row_error(row, std::string("invalid JSON: ") + e.what());
    }
    out.push_back(instance_from_json(j, row));
  }
  return out;
}

std::vector<Instance> load_ihc(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  DelimitedTable table = DelimitedTable::read(in, '\t');
  auto post_col = table.column("post");
  auto class_col = table.column("class");
  auto label_col = table.column("label");
  if (!post_col || (!class_col && !label_col)) {
    fail(ErrorCode::kParse, path.string() + ": IHC TSV needs columns 'post' and 'class' or 'label'");
  }
  auto expl_col = table.column_any({"implied_statement", "explanation"});
  auto target_col = table.column("target");
  auto id_col = table.column_any({"id", "ID"});

  std::vector<Instance> out;
  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    const auto& row = table.rows()[r];
    const std::size_t row_no = r + 1;
    auto cell = [&](std::optional<std::size_t> c) -> std::string {
      return (c && *c < row.size()) ? row[*c] : std::string();
    };
    Instance inst;
    if (class_col) {
      std::string cls = text::trim(cell(class_col));
      if (cls == "explicit_hate") continue;  // only implicit vs. non-hate is modelled
      if (cls == "implicit_hate") {
        inst.label = Label::kToxic;
      } else if (cls == "not_hate") {
        inst.label = Label::kNonToxic;
      } else {
        throw row_error(row_no, "unparseable class '" + cls + "'");
      }
    } else {
      std::string l = text::trim(cell(label_col));
      if (l == "0") inst.label = Label::kNonToxic;
      else if (l == "1") inst.label = Label::kToxic;
      else throw row_error(row_no, "unparseable label '" + l + "'");
    }
    inst.post = text::normalize(cell(post_col));
    if (inst.post.empty()) throw row_error(row_no, "empty post");
    std::string id = text::trim(cell(id_col));
    inst.id = id.empty() ? "ihc-" + std::to_string(row_no) : id;
    std::string expl = cell(expl_col);
    if (text::trim(expl) != kNoneSentinel) add_reference(inst.references, expl);
    if (target_col) inst.annotated_groups = parse_group_field(cell(target_col));
    out.push_back(std::move(inst));
  }
  return out;
}

// SBIC ships one row per annotation; rows are grouped by post text.
std::vector<Instance> load_sbic(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  DelimitedTable table = DelimitedTable::read(in, ',');
  auto post_col = table.column("post");
  auto off_col = table.column_any({"offensiveYN", "label"});
  if (!post_col || !off_col) {
    fail(ErrorCode::kParse, path.string() + ": SBIC CSV needs columns 'post' and 'offensiveYN'");
  }
  auto stereo_col = table.column_any({"targetStereotype", "explanation"});
  auto minority_col = table.column("targetMinority");

  struct Group {
    Instance inst;
    double sum = 0.0;
    int n = 0;
    std::size_t first_row = 0;
  };
  std::vector<Group> groups;
  std::map<std::string, std::size_t> by_post;
  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    const auto& row = table.rows()[r];
    const std::size_t row_no = r + 1;
    auto cell = [&](std::optional<std::size_t> c) -> std::string {
      return (c && *c < row.size()) ? row[*c] : std::string();
    };
    std::string post = text::normalize(cell(post_col));
    if (post.empty()) throw row_error(row_no, "empty post");
    auto [it, inserted] = by_post.emplace(post, groups.size());
    if (inserted) {
      Group g;
      g.inst.post = post;
      g.inst.id = "sbic-" + std::to_string(row_no);
      g.first_row = row_no;
      groups.push_back(std::move(g));
    }
    Group& g = groups[it->second];
    std::string off = text::trim(cell(off_col));
    if (!off.empty()) {
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(off, &used);
        if (used != off.size()) throw std::invalid_argument(off);
      } catch (const std::exception&) {
        throw row_error(row_no, "unparseable offensiveYN '" + off + "'");
      }
      if (v < 0.0 || v > 1.0) throw row_error(row_no, "offensiveYN outside [0,1]");
      g.sum += v;
      ++g.n;
    }
    add_reference(g.inst.references, cell(stereo_col));
    if (minority_col) {
      if (!g.inst.annotated_groups) g.inst.annotated_groups.emplace();
      for (auto& name : parse_group_field(cell(minority_col))) {
        auto& gs = *g.inst.annotated_groups;
        if (std::find(gs.begin(), gs.end(), name) == gs.end()) gs.push_back(name);
      }
    }
  }
  std::vector<Instance> out;
  out.reserve(groups.size());
  for (auto& g : groups) {
    if (g.n == 0) throw row_error(g.first_row, "no offensiveYN rating for post");
    g.inst.label = (g.sum / g.n >= 0.5) ? Label::kToxic : Label::kNonToxic;
    out.push_back(std::move(g.inst));
  }
  return out;
}

}  // namespace

Label label_from_int(long long v) {
  if (v == 0) return Label::kNonToxic;
  if (v == 1) return Label::kToxic;
  fail(ErrorCode::kInvalidArgument, "label must be 0 or 1, got " + std::to_string(v));
}

std::string_view to_string(SplitName s) {
  switch (s) {
    case SplitName::kTrain: return "train";
    case SplitName::kValid: return "valid";
    case SplitName::kTest: return "test";
  }
  return "train";
}

SplitName split_from_string(std::string_view s) {
  if (s == "train") return SplitName::kTrain;
  if (s == "valid" || s == "dev") return SplitName::kValid;
  if (s == "test") return SplitName::kTest;
  fail(ErrorCode::kInvalidArgument, "unknown split '" + std::string(s) + "'");
}

CorpusFormat format_from_string(std::string_view s) {
  if (s == "ihc_tsv") return CorpusFormat::kIhcTsv;
  if (s == "sbic_csv") return CorpusFormat::kSbicCsv;
  if (s == "canonical_jsonl") return CorpusFormat::kCanonicalJsonl;
  fail(ErrorCode::kUnknownFormat, "unknown corpus format '" + std::string(s) + "'");
}

std::string_view to_string(CorpusFormat f) {
  switch (f) {
    case CorpusFormat::kIhcTsv: return "ihc_tsv";
    case CorpusFormat::kSbicCsv: return "sbic_csv";
    case CorpusFormat::kCanonicalJsonl: return "canonical_jsonl";
  }
  return "canonical_jsonl";
}

CorpusSplit::CorpusSplit(SplitName name, std::vector<Instance> instances)
    : name_(name), instances_(std::move(instances)) {
  std::unordered_set<std::string> ids;
  for (const auto& inst : instances_) {
    if (!ids.insert(inst.id).second) {
      fail(ErrorCode::kInvalidArgument,
           "duplicate id '" + inst.id + "' in split " + std::string(to_string(name_)));
    }
  }
  counts_ = count_labels(instances_);
}

std::vector<Instance> load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  switch (format) {
    case CorpusFormat::kCanonicalJsonl: return load_jsonl(path);
    case CorpusFormat::kIhcTsv: return load_ihc(path);
    case CorpusFormat::kSbicCsv: return load_sbic(path);
  }
  fail(ErrorCode::kUnknownFormat, "unknown corpus format");
}

PreprocessResult preprocess(std::vector<Instance> instances) {
  PreprocessResult result;
  result.kept.reserve(instances.size());
  for (auto& inst : instances) {
    if (inst.label == Label::kToxic && !inst.has_explanation()) {
      ++result.dropped_count;
      continue;
    }
    if (inst.label == Label::kNonToxic) inst.references.clear();
    result.kept.push_back(std::move(inst));
  }
  return result;
}

SplitResult make_ihc_test_split(std::span<const Instance> instances, double fraction,
                                std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    fail(ErrorCode::kPrecondition, "split fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < instances.size(); ++i) {
    by_class[to_int(instances[i].label)].push_back(i);
  }
  if (by_class[0].empty() || by_class[1].empty()) {
    fail(ErrorCode::kEmptyClass, "stratified split needs both label classes");
  }
  std::mt19937_64 rng(seed);
  std::vector<char> in_test(instances.size(), 0);
  for (auto& idx : by_class) {
    std::shuffle(idx.begin(), idx.end(), rng);
    // Guard against products such as 0.29 * 100 = 28.999999999999996.
    auto take = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(idx.size()) + 1e-9));
    for (std::size_t k = 0; k < take; ++k) in_test[idx[k]] = 1;
  }
  std::vector<Instance> train, test;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    (in_test[i] ? test : train).push_back(instances[i]);
  }
  return SplitResult{CorpusSplit(SplitName::kTrain, std::move(train)),
                     CorpusSplit(SplitName::kTest, std::move(test))};
}

Counts count_labels(std::span<const Instance> instances) {
  Counts c;
  for (const auto& inst : instances) {
    if (inst.label == Label::kToxic) ++c.n_toxic;
    else ++c.n_nontoxic;
  }
  c.n_total = instances.size();
  return c;
}

Counts corpus_stats(const CorpusSplit& split) { return count_labels(split.instances()); }

nlohmann::json to_json(const Instance& inst) {
  json j;
  j["id"] = inst.id;
  j["post"] = inst.post;
  j["label"] = to_int(inst.label);
  j["explanation"] = inst.has_explanation() ? inst.references.front() : std::string(kNoneSentinel);
  j["explanations"] = inst.references;
  if (inst.annotated_groups) j["annotated_groups"] = *inst.annotated_groups;
  else j["annotated_groups"] = nullptr;
  return j;
}

Instance instance_from_json(const nlohmann::json& j, std::size_t row) {
  if (!j.is_object()) throw row_error(row, "expected a JSON object");
  Instance inst;
  auto post = j.find("post");
  if (post == j.end() || !post->is_string()) throw row_error(row, "missing string field 'post'");
  inst.post = text::normalize(post->get<std::string>());
  if (inst.post.empty()) throw row_error(row, "empty post");

  auto label = j.find("label");
  if (label == j.end()) throw row_error(row, "missing field 'label'");
  if (!label->is_number_integer()) throw row_error(row, "label must be the integer 0 or 1");
  auto v = label->get<long long>();
  if (v != 0 && v != 1) throw row_error(row, "label must be 0 or 1, got " + std::to_string(v));
  inst.label = static_cast<Label>(v);

  auto id = j.find("id");
  if (id != j.end() && id->is_string()) inst.id = id->get<std::string>();
  else if (id != j.end() && id->is_number_integer()) inst.id = std::to_string(id->get<long long>());
  else inst.id = "row-" + std::to_string(row);

  if (auto e = j.find("explanation"); e != j.end() && !e->is_null()) {
    if (!e->is_string()) throw row_error(row, "explanation must be a string");
    if (e->get<std::string>() != kNoneSentinel) add_reference(inst.references, e->get<std::string>());
  }
  if (auto es = j.find("explanations"); es != j.end() && !es->is_null()) {
    if (!es->is_array()) throw row_error(row, "explanations must be an array");
    for (const auto& e : *es) {
      if (!e.is_string()) throw row_error(row, "explanations must hold strings");
      if (e.get<std::string>() != kNoneSentinel) add_reference(inst.references, e.get<std::string>());
    }
  }
  if (auto g = j.find("annotated_groups"); g != j.end() && !g->is_null()) {
    if (!g->is_array()) throw row_error(row, "annotated_groups must be an array");
    std::vector<std::string> groups;
    for (const auto& name : *g) {
      if (!name.is_string()) throw row_error(row, "annotated_groups must hold strings");
      groups.push_back(text::normalize(name.get<std::string>()));
    }
    inst.annotated_groups = std::move(groups);
  }
  return inst;
}

void write_canonical_jsonl(const std::filesystem::path& path, std::span<const Instance> instances) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& inst : instances) out << to_json(inst).dump() << '\n';
  if (!out) fail(ErrorCode::kIo, "write failed: " + path.string());
}

}  // namespace toxcl::corpus
