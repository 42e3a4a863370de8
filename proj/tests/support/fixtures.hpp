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

// Expected metric values produced by tests/oracles/metric_oracles.py
// (independent BLEU cross-checked with sacrebleu, rouge_score, scikit-learn,
// krippendorff). Frozen; regenerate only if that script changes.

#ifndef TOXCL_TESTS_SUPPORT_FIXTURES_HPP_
#define TOXCL_TESTS_SUPPORT_FIXTURES_HPP_

#include <string>
#include <vector>

namespace toxcl::testing {

struct TextMetricCase {
  std::vector<std::string> refs;
  std::string hyp;
  double bleu4;
  double rouge_l;
};

inline const std::vector<TextMetricCase>& text_metric_cases() {
  static const std::vector<TextMetricCase> cases = {
      {{"the cat sat on the mat"}, "the cat sat on the mat", 100.0000000000, 100.0000000000},
      {{"black people are worthless people"}, "black people are worthless", 77.8800783071, 88.8888888889},
      {{"the cat sat"}, "the cat", 60.6530659713, 80.0000000000},
      {{"a b c d"}, "e f g h", 0.0000001000, 0.0000000000},
      {{"muslims are result of inbreeding"}, "muslims are inbred .", 0.0015735791, 44.4444444444},
      {{"jewish people have hate toward other groups"}, "jews don't like white poeple", 0.0000000670, 0.0000000000},
      {{"blacks rape whites ."}, "white men are rapists .", 0.0000118921, 22.2222222222},
      {{"liberals are stupid ."}, "liberals are low iq people .", 0.0017782794, 60.0000000000},
      {{"chinese women are sex workers .", "chinese women don't understand english ."}, "asian women only care about sex", 0.0000135120, 33.3333333333},
      {{"black people are useless", "black people need to be killed"}, "black people aren't as good as whites", 0.0014772200, 36.3636363636},
      {{"degrades women by calling them names", "women are called hoes", "women are hoes"}, "women are hoes", 100.0000000000, 100.0000000000},
      {{"The Cat  sat on THE mat "}, "  the cat sat on the mat", 100.0000000000, 100.0000000000},
      {{"the cat is on the mat"}, "the the the the the the the", 0.0000130012, 30.7692307692},
      {{"a b c d e f g h"}, "a b c d x f g h", 50.0000000000, 87.5000000000},
      {{"a b c d"}, "a b c d e f g h", 34.5720784642, 66.6666666667},
      {{"hello"}, "hello", 100.0000000000, 100.0000000000},
      {{"hello world"}, "world hello", 0.0031622777, 50.0000000000},
      {{"jews are greedy and control the banks"}, "jews control the money", 0.0010562437, 54.5454545455},
      {{"immigrants ruin society"}, "immigrants are ruining our society", 0.0000141421, 50.0000000000},
      {{"women are inferior to men"}, "women are not as smart as men", 0.0016348127, 50.0000000000},
  };
  return cases;
}

struct ClassificationCase {
  std::vector<int> golds;
  std::vector<int> preds;
  double accuracy;
  double macro_f1;
};

inline const std::vector<ClassificationCase>& classification_cases() {
  static const std::vector<ClassificationCase> cases = {
      {{0, 0, 1, 1}, {1, 1, 1, 1}, 50.0000000000, 33.3333333333},
      {{0, 1, 0, 1}, {0, 1, 0, 1}, 100.0000000000, 100.0000000000},
      {{1, 1, 1, 1}, {1, 1, 1, 1}, 100.0000000000, 100.0000000000},
      {{0, 0, 0}, {1, 1, 1}, 0.0000000000, 0.0000000000},
      {{1, 0, 1, 0, 1}, {1, 1, 0, 0, 1}, 60.0000000000, 58.3333333333},
      {{0, 0, 0, 0, 1}, {0, 0, 0, 0, 0}, 80.0000000000, 44.4444444444},
      {{1, 1, 0, 0, 0, 1, 0, 1}, {1, 0, 0, 1, 0, 1, 1, 1}, 62.5000000000, 61.9047619048},
      {{0, 1}, {1, 0}, 0.0000000000, 0.0000000000},
      {{0, 0, 1, 1, 1, 1, 1, 0, 0, 1}, {0, 1, 1, 1, 0, 1, 1, 0, 0, 0}, 70.0000000000, 69.6969696970},
      {{1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}, {1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}, 83.3333333333, 70.0000000000},
  };
  return cases;
}

inline constexpr double kAlphaNominal2x4 = 0.125000000000;
inline constexpr double kAlphaNominal4x10 = 0.728937728938;
inline constexpr double kAlphaOrdinal4x10 = 0.798376216038;
inline constexpr double kAlphaInterval4x10 = 0.835386721424;
inline constexpr double kAlphaNominal3x6 = 0.495049504950;
inline constexpr double kAlphaOrdinal3x6 = 0.613636363636;

}  // namespace toxcl::testing

#endif  // TOXCL_TESTS_SUPPORT_FIXTURES_HPP_
