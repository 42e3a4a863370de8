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

#include "nn/vocab.hpp"

#include <fstream>

#include "common/error.hpp"
#include "common/text.hpp"

namespace toxcl::nn {

std::vector<std::string> model_tokens(std::string_view text) {
  return text::split_whitespace(text::casefold(text));
}

std::vector<std::string> input_tokens(std::string_view text) {
  static constexpr std::string_view kSplit = ":,.!?;\"()[]{}";
  std::vector<std::string> out;
  for (const auto& word : model_tokens(text)) {
    std::string cur;
    for (char c : word) {
      if (kSplit.find(c) == std::string_view::npos) {
        cur.push_back(c);
        continue;
      }
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
      out.emplace_back(1, c);
    }
    if (!cur.empty()) out.push_back(std::move(cur));
  }
  return out;
}

Vocabulary::Vocabulary() {
  for (const char* s : {"[PAD]", "[UNK]", "[BOS]", "[EOS]", "[None]"}) add(s);
}

void Vocabulary::add(const std::string& token) {
  if (index_.contains(token)) return;
  index_.emplace(token, static_cast<int>(tokens_.size()));
  tokens_.push_back(token);
}

Vocabulary Vocabulary::build(std::span<const std::string> inputs,
                             std::span<const std::string> targets) {
  Vocabulary v;
  for (const auto& t : inputs) {
    for (auto& tok : input_tokens(t)) v.add(tok);
  }
  for (const auto& t : targets) {
    for (auto& tok : model_tokens(t)) v.add(tok);
  }
  return v;
}

int Vocabulary::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

std::vector<int> Vocabulary::encode(std::string_view text) const {
  std::vector<int> ids;
  for (auto& tok : model_tokens(text)) ids.push_back(id(tok));
  return ids;
}

std::vector<int> Vocabulary::encode_input(std::string_view text) const {
  std::vector<int> ids;
  for (auto& tok : input_tokens(text)) ids.push_back(id(tok));
  return ids;
}

std::string Vocabulary::decode(std::span<const int> ids) const {
  std::string out;
  for (int i : ids) {
    if (i < kNumSpecial) continue;
    if (!out.empty()) out.push_back(' ');
    out += tokens_.at(i);
  }
  return out;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& t : tokens_) out << t << '\n';
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kCheckpointNotFound, "missing vocabulary " + path.string());
  Vocabulary v;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    if (n++ < kNumSpecial) {
      require(line == v.tokens_[n - 1], ErrorCode::kParse, "vocabulary special tokens corrupted");
      continue;
    }
    v.add(line);
  }
  return v;
}

}  // namespace toxcl::nn
