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

#ifndef TOXCL_NN_GRAPH_HPP_
#define TOXCL_NN_GRAPH_HPP_

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace toxcl::nn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Probability floor/ceiling used by every log computation.
inline constexpr double kProbEpsilon = 1e-7;

struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
};

// Reverse-mode tape over dense row-major matrices. A graph is built per
// example, then backward() pushes d(loss) into Parameter::grad. With
// recording disabled the graph is a plain forward evaluator.
class Graph {
 public:
  struct Var {
    int id = -1;
  };

  explicit Graph(bool record = true) : record_(record) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  const Matrix& value(Var v) const;
  double scalar(Var v) const { return value(v)(0, 0); }
  // Gradient of the last backward() target w.r.t. v (empty if untouched).
  const Matrix& grad(Var v) const { return nodes_[v.id].grad; }
  bool recording() const { return record_; }

  Var constant(Matrix m);
  Var parameter(Parameter& p);
  // Rows of `table` selected by ids; gradients scatter back into table.grad.
  Var embedding(Parameter& table, std::span<const int> ids);

  Var matmul(Var a, Var b);
  Var matmul_bt(Var a, Var b);  // a * b^T
  Var add(Var a, Var b);
  Var add_row(Var a, Var row);  // broadcast a 1xd row over every row of a
  Var scale(Var a, double s);
  Var gelu(Var a);
  Var layer_norm(Var x, Var gain, Var bias);
  // Row softmax restricted to allowed entries; disallowed entries are exactly 0.
  Var masked_softmax(Var scores, const Mask& allowed);
  Var softmax(Var logits);
  Var slice_cols(Var a, int start, int count);
  Var concat_cols(std::span<const Var> parts);
  // 1xd mean over rows with keep[r] != 0.
  Var masked_mean_rows(Var x, std::span<const char> keep);

  // Mean over rows of -log(clamp(softmax(logits)[r, targets[r]])).
  Var token_nll(Var logits, std::span<const int> targets);
  // -log(clamp(probs[0, label])) for a 1xC probability row.
  Var class_nll(Var probs, int label);
  // sum_j s_j * log(clamp(s_j) / clamp(t_j)) for a 1xC row s and a constant t.
  Var kl_to_constant(Var probs, const Matrix& target);
  // sum_k w_k * v_k over 1x1 values.
  Var weighted_sum(std::span<const std::pair<double, Var>> terms);

  void backward(Var loss);

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    Parameter* param = nullptr;
    std::function<void(Graph&, const Matrix&)> backward;
  };

  Var push(Matrix value, std::function<void(Graph&, const Matrix&)> backward = {});
  template <typename Expr>
  void accumulate(Var v, const Expr& g);

  bool record_;
  std::vector<Node> nodes_;
};

}  // namespace toxcl::nn

#endif  // TOXCL_NN_GRAPH_HPP_
