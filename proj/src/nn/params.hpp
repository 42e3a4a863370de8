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

#ifndef TOXCL_NN_PARAMS_HPP_
#define TOXCL_NN_PARAMS_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "nn/graph.hpp"

namespace toxcl::nn {

// Owns model parameters with stable addresses.
class ParameterStore {
 public:
  Parameter& add_normal(const std::string& name, int rows, int cols, double stddev,
                        std::mt19937_64& rng);
  Parameter& add_constant(const std::string& name, int rows, int cols, double value);

  Parameter* find(const std::string& name) const;
  const std::vector<std::unique_ptr<Parameter>>& all() const { return params_; }

  void zero_grad();
  std::size_t scalar_count() const;
  // Hash of every parameter's name, shape and bytes.
  std::uint64_t checksum() const;

  // Binary layout: "TXCLW001", u64 count, then per parameter u32 name length,
  // name bytes, i64 rows, i64 cols, rows*cols little-endian doubles.
  void save(const std::filesystem::path& path) const;
  // Shapes and names must match the already-constructed store.
  void load(const std::filesystem::path& path);

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
};

struct AdamWOptions {
  double learning_rate = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;
  double max_grad_norm = 1.0;  // <= 0 disables clipping
};

class AdamW {
 public:
  AdamW(const ParameterStore& store, AdamWOptions options);
  void step();
  long long steps() const { return t_; }

 private:
  const ParameterStore& store_;
  AdamWOptions options_;
  std::vector<Matrix> m_, v_;
  long long t_ = 0;
};

}  // namespace toxcl::nn

#endif  // TOXCL_NN_PARAMS_HPP_
