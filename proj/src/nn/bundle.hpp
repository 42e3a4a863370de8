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

#ifndef TOXCL_NN_BUNDLE_HPP_
#define TOXCL_NN_BUNDLE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nn/transformer.hpp"
#include "nn/vocab.hpp"

namespace toxcl::nn {

enum class BundleKind { kTargetGenerator, kTeacher, kStudent };
std::string_view to_string(BundleKind k);
BundleKind bundle_kind_from_string(std::string_view s);

struct DecodingSettings {
  int beam_size = 4;
  int max_decode_length = 32;
  int window = 256;  // decoder-history window k of the CLM objective
  int max_input_length = 256;

  bool operator==(const DecodingSettings&) const = default;
};

void to_json(nlohmann::json& j, const DecodingSettings& d);
void from_json(const nlohmann::json& j, DecodingSettings& d);

// Weights + tokenizer + decoding settings for one trained component. On disk:
// <dir>/config.json, <dir>/vocab.txt, <dir>/weights.bin.
class ModelBundle {
 public:
  ModelBundle(BundleKind kind, std::string backbone_id, const ArchConfig& arch, Vocabulary vocab,
              DecodingSettings decoding, std::uint64_t seed);

  // backbone_id is a preset name (fresh weights, vocabulary built from the
  // training inputs and targets) or the directory of a saved bundle (warm
  // start, its vocabulary is kept). Unknown ids raise kCheckpointNotFound.
  static ModelBundle from_backbone(BundleKind kind, const std::string& backbone_id,
                                   std::span<const std::string> inputs,
                                   std::span<const std::string> targets,
                                   DecodingSettings decoding, std::uint64_t seed);
  static ModelBundle load(const std::filesystem::path& dir);
  void save(const std::filesystem::path& dir) const;

  BundleKind kind() const { return kind_; }
  const std::string& backbone_id() const { return backbone_id_; }
  const Vocabulary& vocab() const { return vocab_; }
  Transformer& model() { return model_; }
  const Transformer& model() const { return model_; }
  const DecodingSettings& decoding() const { return decoding_; }
  void set_decoding(const DecodingSettings& d) { decoding_ = d; }
  const nlohmann::json& train_config() const { return train_config_; }
  void set_train_config(nlohmann::json j) { train_config_ = std::move(j); }

  std::uint64_t checksum() const { return model_.params().checksum(); }
  // "<kind>-<first 12 hex digits of the weight checksum>"
  std::string id() const;

  // Tokenizes and truncates to max_input_length. Throws kEmptyInput when
  // nothing is left.
  std::vector<int> encode_text(std::string_view text) const;
  // Decoder target ids truncated to max_decode_length; no [EOS] appended.
  std::vector<int> encode_target(std::string_view text) const;

 private:
  BundleKind kind_;
  std::string backbone_id_;
  Vocabulary vocab_;
  DecodingSettings decoding_;
  Transformer model_;
  nlohmann::json train_config_ = nlohmann::json::object();
};

}  // namespace toxcl::nn

#endif  // TOXCL_NN_BUNDLE_HPP_
