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

#ifndef TOXCL_NN_VOCAB_HPP_
#define TOXCL_NN_VOCAB_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace toxcl::nn {

// Word-level vocabulary over case-folded, whitespace-split text.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;
  static constexpr int kNone = 4;  // the explanation sentinel
  static constexpr int kNumSpecial = 5;

  Vocabulary();

  // Tokens ordered by first appearance: encoder inputs first, then targets.
  static Vocabulary build(std::span<const std::string> inputs,
                          std::span<const std::string> targets = {});
  static Vocabulary load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  int size() const { return static_cast<int>(tokens_.size()); }
  int id(std::string_view token) const;
  const std::string& token(int id) const { return tokens_.at(id); }

  // Decoder side: whitespace tokens, so decode(encode(x)) reproduces x up to
  // case folding and spacing.
  std::vector<int> encode(std::string_view text) const;
  // Encoder side: punctuation is split off into separate tokens.
  std::vector<int> encode_input(std::string_view text) const;
  // Joins non-special tokens with single spaces.
  std::string decode(std::span<const int> ids) const;

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  void add(const std::string& token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

std::vector<std::string> model_tokens(std::string_view text);
std::vector<std::string> input_tokens(std::string_view text);

}  // namespace toxcl::nn

#endif  // TOXCL_NN_VOCAB_HPP_
