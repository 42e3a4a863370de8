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

#include "metrics/metrics.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "common/error.hpp"
#include "common/text.hpp"
#include "corpus/corpus.hpp"

namespace toxcl::metrics {
namespace {

constexpr double kBleuEpsilon = 1e-9;
constexpr int kBleuOrder = 4;

using Ngram = std::vector<std::string>;

std::map<Ngram, int> ngram_counts(const std::vector<std::string>& toks, int n) {
  std::map<Ngram, int> out;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= toks.size(); ++i) {
    ++out[Ngram(toks.begin() + static_cast<long>(i), toks.begin() + static_cast<long>(i) + n)];
  }
  return out;
}

double bleu_single(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  double log_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= kBleuOrder; ++n) {
    auto hyp_counts = ngram_counts(hyp, n);
    if (hyp_counts.empty()) continue;
    auto ref_counts = ngram_counts(ref, n);
    int total = 0, matched = 0;
    for (const auto& [gram, c] : hyp_counts) {
      total += c;
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matched += std::min(c, it->second);
    }
    double p = static_cast<double>(matched) / total;
    if (matched == 0) p = kBleuEpsilon;
    log_sum += std::log(p);
    ++orders;
  }
  const double c = static_cast<double>(hyp.size());
  const double r = static_cast<double>(ref.size());
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return 100.0 * bp * std::exp(log_sum / orders);
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  if (tp == 0) return 0.0;
  double p = static_cast<double>(tp) / static_cast<double>(tp + fp);
  double r = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return 2.0 * p * r / (p + r);
}

}  // namespace

std::size_t Confusion::total() const {
  return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

ClassificationMetrics classification_metrics(std::span<const int> golds,
                                             std::span<const int> preds) {
  require(golds.size() == preds.size(), ErrorCode::kLengthMismatch,
          "golds and preds differ in length");
  require(!golds.empty(), ErrorCode::kEmptyInput, "no items to score");
  ClassificationMetrics m;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    require((golds[i] == 0 || golds[i] == 1) && (preds[i] == 0 || preds[i] == 1),
            ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    ++m.confusion.counts[golds[i]][preds[i]];
  }
  const auto& c = m.confusion.counts;
  m.accuracy = 100.0 * static_cast<double>(c[0][0] + c[1][1]) / static_cast<double>(golds.size());
  double sum = 0.0;
  int classes = 0;
  for (int k = 0; k < 2; ++k) {
    const std::size_t tp = c[k][k];
    const std::size_t fn = c[k][1 - k];
    const std::size_t fp = c[1 - k][k];
    if (tp + fn == 0 && fp == 0) continue;  // class absent from golds and preds
    sum += f1(tp, fp, fn);
    ++classes;
  }
  m.macro_f1 = 100.0 * sum / classes;
  return m;
}

double bleu4(std::span<const std::string> references, std::string_view hypothesis) {
  const auto hyp = text::metric_tokens(hypothesis);
  if (hyp.empty() || references.empty()) return 0.0;
  double best = 0.0;
  for (const auto& ref : references) best = std::max(best, bleu_single(text::metric_tokens(ref), hyp));
  return best;
}

double rouge_l(std::span<const std::string> references, std::string_view hypothesis, double beta) {
  const auto hyp = text::metric_tokens(hypothesis);
  if (hyp.empty()) return 0.0;
  double best = 0.0;
  for (const auto& r : references) {
    const auto ref = text::metric_tokens(r);
    if (ref.empty()) continue;
    const auto lcs = static_cast<double>(lcs_length(ref, hyp));
    if (lcs == 0.0) continue;
    const double p = lcs / static_cast<double>(hyp.size());
    const double rc = lcs / static_cast<double>(ref.size());
    const double b2 = beta * beta;
    best = std::max(best, 100.0 * (1.0 + b2) * p * rc / (rc + b2 * p));
  }
  return best;
}

std::vector<double> Scorer::score_batch(std::span<const ScoringItem> items) const {
  std::vector<double> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(score(it.references, it.hypothesis));
  return out;
}

ExternalCommandScorer::ExternalCommandScorer(std::string name, std::string command)
    : name_(std::move(name)), command_(std::move(command)) {
  require(!command_.empty(), ErrorCode::kInvalidArgument, "external scorer needs a command");
}

double ExternalCommandScorer::score(std::span<const std::string> refs,
                                    std::string_view hyp) const {
  ScoringItem item{std::vector<std::string>(refs.begin(), refs.end()), std::string(hyp)};
  return score_batch(std::span<const ScoringItem>(&item, 1)).at(0);
}

std::vector<double> ExternalCommandScorer::score_batch(std::span<const ScoringItem> items) const {
  if (items.empty()) return {};
  auto dir = std::filesystem::temp_directory_path();
  const std::string stem = "toxcl-scorer-" + std::to_string(::getpid()) + "-" +
                           text::hex64(text::fnv1a(name_ + std::to_string(items.size()) +
                                                   std::to_string(reinterpret_cast<std::uintptr_t>(this))));
  const auto in_path = dir / (stem + ".in.jsonl");
  const auto out_path = dir / (stem + ".out.txt");
  {
    std::ofstream in(in_path, std::ios::trunc);
    for (const auto& it : items) {
      in << nlohmann::json{{"references", it.references}, {"hypothesis", it.hypothesis}}.dump()
         << '\n';
    }
  }
  const std::string cmd = "(" + command_ + ") < '" + in_path.string() + "' > '" +
                          out_path.string() + "'";
  const int rc = std::system(cmd.c_str());
  std::vector<double> scores;
  std::ifstream out(out_path);
  std::string line;
  while (std::getline(out, line)) {
    if (text::trim(line).empty()) continue;
    try {
      scores.push_back(std::stod(line));
    } catch (const std::exception&) {
      scores.clear();
      break;
    }
  }
  std::filesystem::remove(in_path);
  std::filesystem::remove(out_path);
  require(rc == 0, ErrorCode::kIo, "scorer '" + name_ + "' command failed");
  require(scores.size() == items.size(), ErrorCode::kParse,
          "scorer '" + name_ + "' returned " + std::to_string(scores.size()) + " scores for " +
              std::to_string(items.size()) + " items");
  for (double s : scores) {
    require(s >= 0.0 && s <= 100.0, ErrorCode::kParse,
            "scorer '" + name_ + "' returned a score outside [0, 100]");
  }
  return scores;
}

std::unique_ptr<Scorer> make_scorer(const std::string& name,
                                    const std::map<std::string, std::string>& external) {
  if (name == "bleu4") return std::make_unique<Bleu4Scorer>();
  if (name == "rouge_l") return std::make_unique<RougeLScorer>();
  if (auto it = external.find(name); it != external.end()) {
    return std::make_unique<ExternalCommandScorer>(name, it->second);
  }
  fail(ErrorCode::kInvalidArgument, "unknown scorer '" + name + "'");
}

std::map<std::string, double> explanation_eval(std::span<const GoldExplanation> golds,
                                               std::span<const HypExplanation> hyps,
                                               std::span<const Scorer* const> scorers) {
  require(golds.size() == hyps.size(), ErrorCode::kLengthMismatch,
          "gold and hypothesis explanation lists differ in length");
  require(!scorers.empty(), ErrorCode::kInvalidArgument, "no scorers given");
  require(!golds.empty(), ErrorCode::kEmptyInput, "no explanations to score");
  const double n = static_cast<double>(golds.size());
  std::vector<ScoringItem> text_pairs;
  double both_none = 0.0;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    const bool gold_none = golds[i].empty();
    const bool hyp_none = !hyps[i].has_value();
    if (gold_none && hyp_none) {
      both_none += 100.0;
    } else if (!gold_none && !hyp_none) {
      text_pairs.push_back(ScoringItem{golds[i], *hyps[i]});
    }
  }
  std::map<std::string, double> out;
  for (const Scorer* s : scorers) {
    double acc = both_none;
    for (double v : s->score_batch(text_pairs)) acc += v;
    out[s->name()] = acc / n;
  }
  return out;
}

DistanceMetric distance_metric_from_string(std::string_view s) {
  if (s == "nominal") return DistanceMetric::kNominal;
  if (s == "ordinal") return DistanceMetric::kOrdinal;
  if (s == "interval") return DistanceMetric::kInterval;
  fail(ErrorCode::kInvalidArgument, "unknown distance metric '" + std::string(s) + "'");
}

double krippendorff_alpha(const std::vector<std::vector<std::optional<double>>>& ratings,
                          DistanceMetric metric) {
  require(ratings.size() >= 2, ErrorCode::kInsufficientData, "alpha needs at least 2 raters");
  const std::size_t items = ratings[0].size();
  for (const auto& r : ratings) {
    require(r.size() == items, ErrorCode::kLengthMismatch, "raters rated different item counts");
  }
  std::vector<double> values;
  for (const auto& r : ratings) {
    for (const auto& v : r) {
      if (v) values.push_back(*v);
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const std::size_t k = values.size();
  auto index_of = [&](double v) {
    return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), v) -
                                    values.begin());
  };

  // Coincidence matrix over pairable units.
  std::vector<std::vector<double>> o(k, std::vector<double>(k, 0.0));
  std::size_t pairable_items = 0;
  for (std::size_t u = 0; u < items; ++u) {
    std::vector<std::size_t> vals;
    for (const auto& r : ratings) {
      if (r[u]) vals.push_back(index_of(*r[u]));
    }
    if (vals.size() < 2) continue;
    ++pairable_items;
    const double w = 1.0 / static_cast<double>(vals.size() - 1);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      for (std::size_t j = 0; j < vals.size(); ++j) {
        if (i != j) o[vals[i]][vals[j]] += w;
      }
    }
  }
  require(pairable_items >= 2, ErrorCode::kInsufficientData,
          "alpha needs at least 2 items with 2 or more ratings");

  std::vector<double> marg(k, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) marg[c] += o[c][d];
    n += marg[c];
  }
  auto delta2 = [&](std::size_t c, std::size_t d) -> double {
    if (c == d) return 0.0;
    switch (metric) {
      case DistanceMetric::kNominal: return 1.0;
      case DistanceMetric::kInterval: return (values[c] - values[d]) * (values[c] - values[d]);
      case DistanceMetric::kOrdinal: {
        const std::size_t lo = std::min(c, d), hi = std::max(c, d);
        double s = 0.0;
        for (std::size_t g = lo; g <= hi; ++g) s += marg[g];
        s -= (marg[lo] + marg[hi]) / 2.0;
        return s * s;
      }
    }
    return 1.0;
  };
  double d_o = 0.0, d_e = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) {
      const double dd = delta2(c, d);
      d_o += o[c][d] * dd;
      d_e += marg[c] * marg[d] * dd;
    }
  }
  d_o /= n;
  d_e /= n * (n - 1.0);
  if (d_e == 0.0) return 1.0;  // a single observed value: no disagreement possible
  return 1.0 - d_o / d_e;
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json scorers = nlohmann::json::object();
  for (const auto& [k, v] : r.per_scorer) scorers[k] = v;
  const auto& c = r.confusion.counts;
  return nlohmann::json{{"accuracy", r.accuracy},
                        {"macro_f1", r.macro_f1},
                        {"per_scorer", scorers},
                        {"n", r.n},
                        {"confusion", {{c[0][0], c[0][1]}, {c[1][0], c[1][1]}}}};
}

EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport r;
  r.accuracy = j.at("accuracy").get<double>();
  r.macro_f1 = j.at("macro_f1").get<double>();
  for (const auto& [k, v] : j.at("per_scorer").items()) r.per_scorer[k] = v.get<double>();
  r.n = j.at("n").get<std::size_t>();
  for (int g = 0; g < 2; ++g) {
    for (int p = 0; p < 2; ++p) r.confusion.counts[g][p] = j.at("confusion").at(g).at(p).get<std::size_t>();
  }
  return r;
}

std::string tsv_header(const EvalReport& r) {
  std::string h = "split\tn\taccuracy\tmacro_f1";
  for (const auto& [k, v] : r.per_scorer) h += "\t" + k;
  return h;
}

std::string tsv_row(const EvalReport& r, std::string_view split) {
  std::ostringstream os;
  os.precision(10);
  os << split << '\t' << r.n << '\t' << r.accuracy << '\t' << r.macro_f1;
  for (const auto& [k, v] : r.per_scorer) os << '\t' << v;
  return os.str();
}

nlohmann::json to_json(const PredictionRecord& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["gold_label"] = r.gold_label;
  j["pred_label"] = r.pred_label;
  j["gold_explanation"] = r.gold_explanations.empty() ? std::string(corpus::kNoneSentinel)
                                                      : r.gold_explanations.front();
  j["gold_explanations"] = r.gold_explanations;
  j["pred_explanation"] = r.pred_explanation ? *r.pred_explanation
                                             : std::string(corpus::kNoneSentinel);
  return j;
}

PredictionRecord prediction_record_from_json(const nlohmann::json& j, std::size_t row) {
  auto bad = [row](const std::string& what) {
    return Error(ErrorCode::kMalformedRow, "row " + std::to_string(row) + ": " + what, row);
  };
  if (!j.is_object()) throw bad("expected a JSON object");
  PredictionRecord r;
  if (auto it = j.find("id"); it != j.end()) r.id = it->is_string() ? it->get<std::string>() : it->dump();
  auto label = [&](const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number_integer()) throw bad(std::string("missing integer ") + key);
    auto v = it->get<long long>();
    if (v != 0 && v != 1) throw bad(std::string(key) + " must be 0 or 1");
    return static_cast<int>(v);
  };
  r.gold_label = label("gold_label");
  r.pred_label = label("pred_label");
  auto add_gold = [&](const nlohmann::json& v) {
    if (!v.is_string()) throw bad("gold explanations must be strings");
    const auto s = v.get<std::string>();
    if (s == corpus::kNoneSentinel) return;
    if (std::find(r.gold_explanations.begin(), r.gold_explanations.end(), s) ==
        r.gold_explanations.end()) {
      r.gold_explanations.push_back(s);
    }
  };
  if (auto it = j.find("gold_explanation"); it != j.end() && !it->is_null()) add_gold(*it);
  if (auto it = j.find("gold_explanations"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw bad("gold_explanations must be an array");
    for (const auto& v : *it) add_gold(v);
  }
  if (auto it = j.find("pred_explanation"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw bad("pred_explanation must be a string");
    if (it->get<std::string>() != corpus::kNoneSentinel) r.pred_explanation = it->get<std::string>();
  }
  return r;
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kFileMissing, "predictions file not found: " + path.string());
  std::vector<PredictionRecord> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (text::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kMalformedRow, "row " + std::to_string(row) + ": " + e.what(), row);
    }
    out.push_back(prediction_record_from_json(j, row));
  }
  return out;
}

void write_predictions(const std::filesystem::path& path,
                       std::span<const PredictionRecord> records) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

EvalReport evaluate(std::span<const PredictionRecord> records,
                    std::span<const Scorer* const> scorers) {
  std::vector<int> golds, preds;
  std::vector<GoldExplanation> gold_expl;
  std::vector<HypExplanation> hyp_expl;
  for (const auto& r : records) {
    golds.push_back(r.gold_label);
    preds.push_back(r.pred_label);
    gold_expl.push_back(r.gold_explanations);
    hyp_expl.push_back(r.pred_explanation);
  }
  auto cls = classification_metrics(golds, preds);
  EvalReport report;
  report.accuracy = cls.accuracy;
  report.macro_f1 = cls.macro_f1;
  report.confusion = cls.confusion;
  report.n = records.size();
  report.per_scorer = explanation_eval(gold_expl, hyp_expl, scorers);
  return report;
}

}  // namespace toxcl::metrics
