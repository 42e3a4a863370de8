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

#ifndef TOXCL_NN_BEAM_SEARCH_HPP_
#define TOXCL_NN_BEAM_SEARCH_HPP_

#include <span>
#include <vector>

#include "nn/transformer.hpp"

namespace toxcl::nn {

struct BeamOptions {
  int beam_size = 4;
  int max_length = 32;
  int window = 256;
  // Never emit the [None] token, and never stop before one real token.
  bool forbid_sentinel = false;
  // score = log_prob / length^length_penalty
  double length_penalty = 1.0;
};

struct Hypothesis {
  std::vector<int> tokens;  // excludes [BOS] and [EOS]
  double log_prob = 0.0;
  double score = 0.0;
  bool finished = false;
};

// Deterministic beam search. Returns every finished hypothesis (plus the
// live beams when max_length is hit), best score first.
std::vector<Hypothesis> beam_search(const Transformer& model, std::span<const int> input_ids,
                                    const BeamOptions& options);

}  // namespace toxcl::nn

#endif  // TOXCL_NN_BEAM_SEARCH_HPP_
