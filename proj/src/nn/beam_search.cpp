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

#include "nn/beam_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common/error.hpp"
#include "nn/vocab.hpp"

namespace toxcl::nn {
namespace {

struct Candidate {
  std::vector<int> prefix;  // starts with [BOS]
  double log_prob;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
  return a.prefix < b.prefix;
}

double length_score(double log_prob, std::size_t length, double penalty) {
  return log_prob / std::pow(static_cast<double>(std::max<std::size_t>(length, 1)), penalty);
}

}  // namespace

std::vector<Hypothesis> beam_search(const Transformer& model, std::span<const int> input_ids,
                                    const BeamOptions& options) {
  require(options.beam_size >= 1, ErrorCode::kInvalidArgument, "beam_size must be >= 1");
  require(!input_ids.empty(), ErrorCode::kEmptyInput, "beam search over empty input");
  const int max_length = std::min(options.max_length, model.arch().max_positions - 1);
  std::vector<char> valid(input_ids.size(), 1);

  Matrix encoded;
  {
    Graph g(false);
    encoded = g.value(model.encode(g, input_ids, valid));
  }

  std::vector<Candidate> beams{{{Vocabulary::kBos}, 0.0}};
  std::vector<Hypothesis> finished;
  const auto width = static_cast<std::size_t>(options.beam_size);

  for (int step = 0; step < max_length && !beams.empty(); ++step) {
    std::vector<Candidate> candidates;
    for (const auto& beam : beams) {
      Graph g(false);
      auto enc = g.constant(encoded);
      auto logits = g.value(model.decoder_logits(g, enc, valid, beam.prefix, options.window));
      Eigen::RowVectorXd row = logits.row(logits.rows() - 1);
      row(Vocabulary::kPad) = -std::numeric_limits<double>::infinity();
      row(Vocabulary::kBos) = -std::numeric_limits<double>::infinity();
      row(Vocabulary::kUnk) = -std::numeric_limits<double>::infinity();
      if (options.forbid_sentinel) {
        row(Vocabulary::kNone) = -std::numeric_limits<double>::infinity();
        if (step == 0) row(Vocabulary::kEos) = -std::numeric_limits<double>::infinity();
      }
      const double mx = row.maxCoeff();
      const double lse = mx + std::log((row.array() - mx).exp().sum());
      std::vector<int> order(static_cast<std::size_t>(row.size()));
      for (int i = 0; i < row.size(); ++i) order[i] = i;
      const std::size_t keep = std::min(width, order.size());
      std::partial_sort(order.begin(), order.begin() + static_cast<long>(keep), order.end(),
                        [&](int a, int b) { return row(a) != row(b) ? row(a) > row(b) : a < b; });
      for (std::size_t r = 0; r < keep; ++r) {
        const int tok = order[r];
        if (!std::isfinite(row(tok))) continue;
        Candidate c{beam.prefix, beam.log_prob + row(tok) - lse};
        c.prefix.push_back(tok);
        candidates.push_back(std::move(c));
      }
    }
    std::sort(candidates.begin(), candidates.end(), better);
    beams.clear();
    for (auto& c : candidates) {
      if (c.prefix.back() == Vocabulary::kEos) {
        Hypothesis h;
        h.tokens.assign(c.prefix.begin() + 1, c.prefix.end() - 1);
        h.log_prob = c.log_prob;
        h.score = length_score(c.log_prob, c.prefix.size() - 1, options.length_penalty);
        h.finished = true;
        finished.push_back(std::move(h));
      } else {
        beams.push_back(std::move(c));
      }
      if (beams.size() == width) break;
    }
    if (finished.size() >= width) break;
  }
  for (auto& c : beams) {
    Hypothesis h;
    h.tokens.assign(c.prefix.begin() + 1, c.prefix.end());
    h.log_prob = c.log_prob;
    h.score = length_score(c.log_prob, c.prefix.size() - 1, options.length_penalty);
    finished.push_back(std::move(h));
  }
  std::stable_sort(finished.begin(), finished.end(), [](const Hypothesis& a, const Hypothesis& b) {
    if (a.finished != b.finished) return a.finished;
    return a.score > b.score;
  });
  return finished;
}

}  // namespace toxcl::nn
