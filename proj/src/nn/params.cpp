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

#include "nn/params.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "common/error.hpp"
#include "common/text.hpp"

namespace toxcl::nn {
namespace {

constexpr char kMagic[8] = {'T', 'X', 'C', 'L', 'W', '0', '0', '1'};

template <typename T>
void write_pod(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) fail(ErrorCode::kParse, "truncated weights file");
  return v;
}

}  // namespace

Parameter& ParameterStore::add_normal(const std::string& name, int rows, int cols, double stddev,
                                      std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = Matrix(rows, cols);
  for (Eigen::Index i = 0; i < p->value.size(); ++i) p->value.data()[i] = dist(rng);
  p->grad = Matrix::Zero(rows, cols);
  params_.push_back(std::move(p));
  return *params_.back();
}

Parameter& ParameterStore::add_constant(const std::string& name, int rows, int cols, double value) {
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = Matrix::Constant(rows, cols, value);
  p->grad = Matrix::Zero(rows, cols);
  params_.push_back(std::move(p));
  return *params_.back();
}

Parameter* ParameterStore::find(const std::string& name) const {
  for (const auto& p : params_) {
    if (p->name == name) return p.get();
  }
  return nullptr;
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) p->grad.setZero();
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p->value.size());
  return n;
}

std::uint64_t ParameterStore::checksum() const {
  std::uint64_t h = text::fnv1a("");
  for (const auto& p : params_) {
    h = text::fnv1a(p->name, h);
    const Eigen::Index shape[2] = {p->value.rows(), p->value.cols()};
    h = text::fnv1a(std::string_view(reinterpret_cast<const char*>(shape), sizeof shape), h);
    h = text::fnv1a(std::string_view(reinterpret_cast<const char*>(p->value.data()),
                                     sizeof(double) * static_cast<std::size_t>(p->value.size())),
                    h);
  }
  return h;
}

void ParameterStore::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out.write(kMagic, sizeof kMagic);
  write_pod<std::uint64_t>(out, params_.size());
  for (const auto& p : params_) {
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(p->name.size()));
    out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    write_pod<std::int64_t>(out, p->value.rows());
    write_pod<std::int64_t>(out, p->value.cols());
    out.write(reinterpret_cast<const char*>(p->value.data()),
              static_cast<std::streamsize>(sizeof(double) * p->value.size()));
  }
  if (!out) fail(ErrorCode::kIo, "write failed: " + path.string());
}

void ParameterStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kCheckpointNotFound, "missing weights " + path.string());
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    fail(ErrorCode::kParse, path.string() + " is not a weights file");
  }
  auto count = read_pod<std::uint64_t>(in);
  require(count == params_.size(), ErrorCode::kParse, "weights file parameter count mismatch");
  for (auto& p : params_) {
    auto len = read_pod<std::uint32_t>(in);
    std::string name(len, '\0');
    in.read(name.data(), len);
    auto rows = read_pod<std::int64_t>(in);
    auto cols = read_pod<std::int64_t>(in);
    require(name == p->name && rows == p->value.rows() && cols == p->value.cols(),
            ErrorCode::kParse, "weights file does not match architecture at " + p->name);
    in.read(reinterpret_cast<char*>(p->value.data()),
            static_cast<std::streamsize>(sizeof(double) * p->value.size()));
    if (!in) fail(ErrorCode::kParse, "truncated weights file");
  }
}

AdamW::AdamW(const ParameterStore& store, AdamWOptions options)
    : store_(store), options_(options) {
  for (const auto& p : store_.all()) {
    m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
  }
}

void AdamW::step() {
  ++t_;
  double clip = 1.0;
  if (options_.max_grad_norm > 0.0) {
    double sq = 0.0;
    for (const auto& p : store_.all()) sq += p->grad.squaredNorm();
    double norm = std::sqrt(sq);
    if (norm > options_.max_grad_norm) clip = options_.max_grad_norm / norm;
  }
  const double bc1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
  const double lr = options_.learning_rate;
  for (std::size_t i = 0; i < store_.all().size(); ++i) {
    Parameter& p = *store_.all()[i];
    Matrix g = p.grad * clip;
    m_[i] = options_.beta1 * m_[i] + (1.0 - options_.beta1) * g;
    v_[i] = options_.beta2 * v_[i] + (1.0 - options_.beta2) * g.cwiseProduct(g);
    p.value *= (1.0 - lr * options_.weight_decay);
    p.value.array() -= lr * (m_[i].array() / bc1) /
                       ((v_[i].array() / bc2).sqrt() + options_.epsilon);
  }
}

}  // namespace toxcl::nn
