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

#include "nn/bundle.hpp"

#include <algorithm>
#include <fstream>

#include "common/error.hpp"
#include "common/text.hpp"

namespace toxcl::nn {

std::string_view to_string(BundleKind k) {
  switch (k) {
    case BundleKind::kTargetGenerator: return "tg";
    case BundleKind::kTeacher: return "teacher";
    case BundleKind::kStudent: return "student";
  }
  return "student";
}

BundleKind bundle_kind_from_string(std::string_view s) {
  if (s == "tg") return BundleKind::kTargetGenerator;
  if (s == "teacher") return BundleKind::kTeacher;
  if (s == "student") return BundleKind::kStudent;
  fail(ErrorCode::kParse, "unknown bundle kind '" + std::string(s) + "'");
}

void to_json(nlohmann::json& j, const DecodingSettings& d) {
  j = nlohmann::json{{"beam_size", d.beam_size},
                     {"max_decode_length", d.max_decode_length},
                     {"window", d.window},
                     {"max_input_length", d.max_input_length}};
}

void from_json(const nlohmann::json& j, DecodingSettings& d) {
  j.at("beam_size").get_to(d.beam_size);
  j.at("max_decode_length").get_to(d.max_decode_length);
  j.at("window").get_to(d.window);
  j.at("max_input_length").get_to(d.max_input_length);
}

ModelBundle::ModelBundle(BundleKind kind, std::string backbone_id, const ArchConfig& arch,
                         Vocabulary vocab, DecodingSettings decoding, std::uint64_t seed)
    : kind_(kind),
      backbone_id_(std::move(backbone_id)),
      vocab_(std::move(vocab)),
      decoding_(decoding),
      model_(arch, vocab_.size(), seed) {
  require(decoding_.beam_size >= 1, ErrorCode::kInvalidArgument, "beam_size must be >= 1");
  require(decoding_.max_input_length >= 1, ErrorCode::kInvalidArgument,
          "max_sequence_length must be >= 1");
  require(decoding_.window >= 1, ErrorCode::kInvalidArgument, "window must be >= 1");
}

ModelBundle ModelBundle::from_backbone(BundleKind kind, const std::string& backbone_id,
                                       std::span<const std::string> inputs,
                                       std::span<const std::string> targets,
                                       DecodingSettings decoding, std::uint64_t seed) {
  const bool wants_decoder = kind != BundleKind::kTeacher;
  if (is_arch_preset(backbone_id)) {
    ArchConfig arch = arch_preset(backbone_id);
    arch.decoder = wants_decoder;
    arch.classifier = true;
    arch.max_positions = std::max(decoding.max_input_length, decoding.max_decode_length + 1);
    return ModelBundle(kind, backbone_id, arch, Vocabulary::build(inputs, targets), decoding, seed);
  }
  const std::filesystem::path dir(backbone_id);
  if (!std::filesystem::exists(dir / "config.json")) {
    fail(ErrorCode::kCheckpointNotFound,
         "backbone '" + backbone_id + "' is neither a preset nor a saved bundle");
  }
  ModelBundle base = load(dir);
  require(base.model().arch().decoder == wants_decoder, ErrorCode::kInvalidArgument,
          "backbone '" + backbone_id + "' has an incompatible architecture");
  ModelBundle out(kind, backbone_id, base.model().arch(), base.vocab(), decoding, seed);
  for (std::size_t i = 0; i < out.model().params().all().size(); ++i) {
    out.model().params().all()[i]->value = base.model().params().all()[i]->value;
  }
  return out;
}

void ModelBundle::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  nlohmann::json cfg;
  cfg["kind"] = to_string(kind_);
  cfg["backbone_id"] = backbone_id_;
  cfg["arch"] = model_.arch();
  cfg["vocab_size"] = vocab_.size();
  cfg["decoding"] = decoding_;
  cfg["train_config"] = train_config_;
  cfg["checksum"] = text::hex64(checksum());
  std::ofstream out(dir / "config.json", std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + (dir / "config.json").string());
  out << cfg.dump(2) << '\n';
  out.close();
  vocab_.save(dir / "vocab.txt");
  model_.params().save(dir / "weights.bin");
}

ModelBundle ModelBundle::load(const std::filesystem::path& dir) {
  std::ifstream in(dir / "config.json");
  if (!in) fail(ErrorCode::kCheckpointNotFound, "no bundle at " + dir.string());
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, dir.string() + "/config.json: " + e.what());
  }
  try {
    Vocabulary vocab = Vocabulary::load(dir / "vocab.txt");
    require(vocab.size() == cfg.at("vocab_size").get<int>(), ErrorCode::kParse,
            "vocabulary size does not match config");
    ModelBundle b(bundle_kind_from_string(cfg.at("kind").get<std::string>()),
                  cfg.at("backbone_id").get<std::string>(), cfg.at("arch").get<ArchConfig>(),
                  std::move(vocab), cfg.at("decoding").get<DecodingSettings>(), 0);
    b.model_.params().load(dir / "weights.bin");
    b.train_config_ = cfg.value("train_config", nlohmann::json::object());
    return b;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, dir.string() + "/config.json: " + e.what());
  }
}

std::string ModelBundle::id() const {
  return std::string(to_string(kind_)) + "-" + text::hex64(checksum()).substr(0, 12);
}

std::vector<int> ModelBundle::encode_text(std::string_view text) const {
  std::vector<int> ids = vocab_.encode_input(text);
  const auto limit = static_cast<std::size_t>(
      std::min(decoding_.max_input_length, model_.arch().max_positions));
  if (ids.size() > limit) ids.resize(limit);
  require(!ids.empty(), ErrorCode::kEmptyInput, "input is empty after tokenization");
  return ids;
}

std::vector<int> ModelBundle::encode_target(std::string_view text) const {
  std::vector<int> ids = vocab_.encode(text);
  const auto limit = static_cast<std::size_t>(
      std::min(decoding_.max_decode_length, model_.arch().max_positions - 1));
  if (ids.size() > limit) ids.resize(limit);
  return ids;
}

}  // namespace toxcl::nn
