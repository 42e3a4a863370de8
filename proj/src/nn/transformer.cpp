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

#include "nn/transformer.hpp"

#include <cmath>

#include "common/error.hpp"

namespace toxcl::nn {

void to_json(nlohmann::json& j, const ArchConfig& a) {
  j = nlohmann::json{{"d_model", a.d_model},
                     {"n_heads", a.n_heads},
                     {"d_ff", a.d_ff},
                     {"encoder_layers", a.encoder_layers},
                     {"decoder_layers", a.decoder_layers},
                     {"max_positions", a.max_positions},
                     {"decoder", a.decoder},
                     {"classifier", a.classifier}};
}

void from_json(const nlohmann::json& j, ArchConfig& a) {
  j.at("d_model").get_to(a.d_model);
  j.at("n_heads").get_to(a.n_heads);
  j.at("d_ff").get_to(a.d_ff);
  j.at("encoder_layers").get_to(a.encoder_layers);
  j.at("decoder_layers").get_to(a.decoder_layers);
  j.at("max_positions").get_to(a.max_positions);
  j.at("decoder").get_to(a.decoder);
  j.at("classifier").get_to(a.classifier);
}

bool is_arch_preset(std::string_view id) {
  return id == "toxcl-tiny" || id == "toxcl-small" || id == "toxcl-base";
}

ArchConfig arch_preset(std::string_view id) {
  ArchConfig a;
  if (id == "toxcl-tiny") {
    a.d_model = 32;
    a.n_heads = 2;
    a.d_ff = 64;
    a.encoder_layers = 1;
    a.decoder_layers = 1;
  } else if (id == "toxcl-small") {
    a.d_model = 64;
    a.n_heads = 4;
    a.d_ff = 128;
    a.encoder_layers = 2;
    a.decoder_layers = 2;
  } else if (id == "toxcl-base") {
    a.d_model = 128;
    a.n_heads = 4;
    a.d_ff = 512;
    a.encoder_layers = 4;
    a.decoder_layers = 4;
  } else {
    fail(ErrorCode::kCheckpointNotFound, "unknown backbone '" + std::string(id) + "'");
  }
  return a;
}

Transformer::Transformer(const ArchConfig& arch, int vocab_size, std::uint64_t seed)
    : arch_(arch), vocab_size_(vocab_size) {
  require(arch.d_model > 0 && arch.n_heads > 0 && arch.d_model % arch.n_heads == 0,
          ErrorCode::kInvalidArgument, "d_model must be a positive multiple of n_heads");
  require(arch.max_positions >= 1 && vocab_size > 0, ErrorCode::kInvalidArgument,
          "bad model dimensions");
  std::mt19937_64 rng(seed);
  const int d = arch.d_model;
  token_embedding_ = &params_.add_normal("embed.token", vocab_size, d, 0.3, rng);
  enc_positions_ = &params_.add_normal("enc.pos", arch.max_positions, d, 0.1, rng);
  for (int l = 0; l < arch.encoder_layers; ++l) {
    const std::string p = "enc." + std::to_string(l) + ".";
    EncoderLayer layer;
    layer.ln1 = make_norm(p + "ln1");
    layer.self = make_attention(p + "self", rng);
    layer.ln2 = make_norm(p + "ln2");
    layer.ff = make_ff(p + "ff", rng);
    encoder_.push_back(layer);
  }
  enc_final_ = make_norm("enc.ln_f");
  if (arch.decoder) {
    dec_positions_ = &params_.add_normal("dec.pos", arch.max_positions, d, 0.1, rng);
    for (int l = 0; l < arch.decoder_layers; ++l) {
      const std::string p = "dec." + std::to_string(l) + ".";
      DecoderLayer layer;
      layer.ln1 = make_norm(p + "ln1");
      layer.self = make_attention(p + "self", rng);
      layer.ln2 = make_norm(p + "ln2");
      layer.cross = make_attention(p + "cross", rng);
      layer.ln3 = make_norm(p + "ln3");
      layer.ff = make_ff(p + "ff", rng);
      decoder_.push_back(layer);
    }
    dec_final_ = make_norm("dec.ln_f");
    lm_head_ = &params_.add_normal("lm_head", d, vocab_size, 1.0 / std::sqrt(d), rng);
  }
  if (arch.classifier) {
    cls_weight_ = &params_.add_normal("cls.weight", d, 2, 1.0 / std::sqrt(d), rng);
    cls_bias_ = &params_.add_constant("cls.bias", 1, 2, 0.0);
  }
}

Transformer::Attention Transformer::make_attention(const std::string& prefix,
                                                   std::mt19937_64& rng) {
  const int d = arch_.d_model;
  const double s = 1.0 / std::sqrt(d);
  return Attention{&params_.add_normal(prefix + ".q", d, d, s, rng),
                   &params_.add_normal(prefix + ".k", d, d, s, rng),
                   &params_.add_normal(prefix + ".v", d, d, s, rng),
                   &params_.add_normal(prefix + ".o", d, d, s, rng)};
}

Transformer::Norm Transformer::make_norm(const std::string& prefix) {
  const int d = arch_.d_model;
  return Norm{&params_.add_constant(prefix + ".gain", 1, d, 1.0),
              &params_.add_constant(prefix + ".bias", 1, d, 0.0)};
}

Transformer::FeedForward Transformer::make_ff(const std::string& prefix, std::mt19937_64& rng) {
  const int d = arch_.d_model, f = arch_.d_ff;
  return FeedForward{&params_.add_normal(prefix + ".w1", d, f, 1.0 / std::sqrt(d), rng),
                     &params_.add_constant(prefix + ".b1", 1, f, 0.0),
                     &params_.add_normal(prefix + ".w2", f, d, 1.0 / std::sqrt(f), rng),
                     &params_.add_constant(prefix + ".b2", 1, d, 0.0)};
}

Graph::Var Transformer::norm(Graph& g, const Norm& n, Graph::Var x) const {
  return g.layer_norm(x, g.parameter(*n.gain), g.parameter(*n.bias));
}

Graph::Var Transformer::feed_forward(Graph& g, const FeedForward& f, Graph::Var x) const {
  auto h = g.gelu(g.add_row(g.matmul(x, g.parameter(*f.w1)), g.parameter(*f.b1)));
  return g.add_row(g.matmul(h, g.parameter(*f.w2)), g.parameter(*f.b2));
}

Graph::Var Transformer::attend(Graph& g, const Attention& a, Graph::Var query_in,
                               Graph::Var kv_in, const Mask& allowed) const {
  auto q = g.matmul(query_in, g.parameter(*a.q));
  auto k = g.matmul(kv_in, g.parameter(*a.k));
  auto v = g.matmul(kv_in, g.parameter(*a.v));
  const int dh = arch_.d_model / arch_.n_heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
  std::vector<Graph::Var> heads;
  heads.reserve(arch_.n_heads);
  for (int h = 0; h < arch_.n_heads; ++h) {
    auto qh = g.slice_cols(q, h * dh, dh);
    auto kh = g.slice_cols(k, h * dh, dh);
    auto vh = g.slice_cols(v, h * dh, dh);
    auto weights = g.masked_softmax(g.scale(g.matmul_bt(qh, kh), inv_sqrt), allowed);
    heads.push_back(g.matmul(weights, vh));
  }
  auto merged = arch_.n_heads == 1 ? heads[0] : g.concat_cols(heads);
  return g.matmul(merged, g.parameter(*a.o));
}

Graph::Var Transformer::encode(Graph& g, std::span<const int> ids,
                               std::span<const char> valid) const {
  const auto t = static_cast<Eigen::Index>(ids.size());
  require(t > 0 && ids.size() == valid.size(), ErrorCode::kEmptyInput,
          "encoder input is empty or mask length differs");
  require(t <= arch_.max_positions, ErrorCode::kInvalidArgument,
          "input longer than max_positions");
  for (int id : ids) {
    require(id >= 0 && id < vocab_size_, ErrorCode::kInvalidArgument, "token id out of range");
  }
  std::vector<int> positions(static_cast<std::size_t>(t));
  for (Eigen::Index i = 0; i < t; ++i) positions[i] = static_cast<int>(i);
  auto x = g.add(g.embedding(*token_embedding_, ids), g.embedding(*enc_positions_, positions));
  Mask allowed(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = 0; j < t; ++j) allowed(i, j) = valid[j] != 0;
  }
  for (const auto& layer : encoder_) {
    auto h = norm(g, layer.ln1, x);
    x = g.add(x, attend(g, layer.self, h, h, allowed));
    x = g.add(x, feed_forward(g, layer.ff, norm(g, layer.ln2, x)));
  }
  return norm(g, enc_final_, x);
}

Graph::Var Transformer::pooled(Graph& g, Graph::Var encoded, std::span<const char> valid) const {
  return g.masked_mean_rows(encoded, valid);
}

Graph::Var Transformer::classifier_logits(Graph& g, Graph::Var pooled) const {
  require(cls_weight_ != nullptr, ErrorCode::kInternal, "model has no classifier head");
  return g.add_row(g.matmul(pooled, g.parameter(*cls_weight_)), g.parameter(*cls_bias_));
}

Graph::Var Transformer::decoder_logits(Graph& g, Graph::Var encoded,
                                       std::span<const char> enc_valid,
                                       std::span<const int> decoder_inputs, int window) const {
  require(lm_head_ != nullptr, ErrorCode::kInternal, "model has no decoder");
  const auto t = static_cast<Eigen::Index>(decoder_inputs.size());
  require(t > 0, ErrorCode::kEmptyInput, "decoder input is empty");
  require(t <= arch_.max_positions, ErrorCode::kInvalidArgument,
          "decoder sequence longer than max_positions");
  require(window >= 1, ErrorCode::kInvalidArgument, "window must be >= 1");
  std::vector<int> positions(static_cast<std::size_t>(t));
  for (Eigen::Index i = 0; i < t; ++i) positions[i] = static_cast<int>(i);
  auto y = g.add(g.embedding(*token_embedding_, decoder_inputs),
                 g.embedding(*dec_positions_, positions));
  const Eigen::Index s = static_cast<Eigen::Index>(enc_valid.size());
  Mask causal(t, t), cross(t, s);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = 0; j < t; ++j) causal(i, j) = j <= i && j > i - window;
    for (Eigen::Index j = 0; j < s; ++j) cross(i, j) = enc_valid[j] != 0;
  }
  for (const auto& layer : decoder_) {
    auto h = norm(g, layer.ln1, y);
    y = g.add(y, attend(g, layer.self, h, h, causal));
    y = g.add(y, attend(g, layer.cross, norm(g, layer.ln2, y), encoded, cross));
    y = g.add(y, feed_forward(g, layer.ff, norm(g, layer.ln3, y)));
  }
  return g.matmul(norm(g, dec_final_, y), g.parameter(*lm_head_));
}

}  // namespace toxcl::nn
