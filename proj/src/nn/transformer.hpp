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

#ifndef TOXCL_NN_TRANSFORMER_HPP_
#define TOXCL_NN_TRANSFORMER_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nn/graph.hpp"
#include "nn/params.hpp"

namespace toxcl::nn {

struct ArchConfig {
  int d_model = 64;
  int n_heads = 4;
  int d_ff = 128;
  int encoder_layers = 2;
  int decoder_layers = 2;
  int max_positions = 256;
  bool decoder = true;
  bool classifier = true;

  bool operator==(const ArchConfig&) const = default;
};

void to_json(nlohmann::json& j, const ArchConfig& a);
void from_json(const nlohmann::json& j, ArchConfig& a);

// Built-in backbones: "toxcl-tiny", "toxcl-small", "toxcl-base".
bool is_arch_preset(std::string_view backbone_id);
ArchConfig arch_preset(std::string_view backbone_id);

// Pre-LayerNorm transformer: encoder, optional decoder with a tied vocabulary,
// optional binary classification head over the mean-pooled encoder output.
class Transformer {
 public:
  Transformer(const ArchConfig& arch, int vocab_size, std::uint64_t seed);

  const ArchConfig& arch() const { return arch_; }
  int vocab_size() const { return vocab_size_; }
  ParameterStore& params() { return params_; }
  const ParameterStore& params() const { return params_; }

  // Rows with valid[t] == 0 are padding: never attended to, never pooled.
  Graph::Var encode(Graph& g, std::span<const int> ids, std::span<const char> valid) const;
  Graph::Var pooled(Graph& g, Graph::Var encoded, std::span<const char> valid) const;
  Graph::Var classifier_logits(Graph& g, Graph::Var pooled) const;
  // Next-token logits for every decoder position; position p sees at most
  // `window` decoder inputs ending at p.
  Graph::Var decoder_logits(Graph& g, Graph::Var encoded, std::span<const char> enc_valid,
                            std::span<const int> decoder_inputs, int window) const;

 private:
  struct Attention {
    Parameter *q, *k, *v, *o;
  };
  struct Norm {
    Parameter *gain, *bias;
  };
  struct FeedForward {
    Parameter *w1, *b1, *w2, *b2;
  };
  struct EncoderLayer {
    Norm ln1, ln2;
    Attention self;
    FeedForward ff;
  };
  struct DecoderLayer {
    Norm ln1, ln2, ln3;
    Attention self, cross;
    FeedForward ff;
  };

  Attention make_attention(const std::string& prefix, std::mt19937_64& rng);
  Norm make_norm(const std::string& prefix);
  FeedForward make_ff(const std::string& prefix, std::mt19937_64& rng);

  Graph::Var attend(Graph& g, const Attention& a, Graph::Var query_in, Graph::Var kv_in,
                    const Mask& allowed) const;
  Graph::Var norm(Graph& g, const Norm& n, Graph::Var x) const;
  Graph::Var feed_forward(Graph& g, const FeedForward& f, Graph::Var x) const;

  ArchConfig arch_;
  int vocab_size_;
  ParameterStore params_;
  Parameter* token_embedding_ = nullptr;
  Parameter* enc_positions_ = nullptr;
  Parameter* dec_positions_ = nullptr;
  std::vector<EncoderLayer> encoder_;
  std::vector<DecoderLayer> decoder_;
  Norm enc_final_{}, dec_final_{};
  Parameter* lm_head_ = nullptr;
  Parameter* cls_weight_ = nullptr;
  Parameter* cls_bias_ = nullptr;
};

}  // namespace toxcl::nn

#endif  // TOXCL_NN_TRANSFORMER_HPP_
