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

#include "nn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common/error.hpp"

namespace toxcl::nn {
namespace {

constexpr double kLayerNormEps = 1e-5;
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluA = 0.044715;

double clamp_prob(double p) { return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon); }
bool inside(double p) { return p > kProbEpsilon && p < 1.0 - kProbEpsilon; }

}  // namespace

const Matrix& Graph::value(Var v) const {
  const Node& n = nodes_[v.id];
  return n.param ? n.param->value : n.value;
}

Graph::Var Graph::push(Matrix value, std::function<void(Graph&, const Matrix&)> backward) {
  Node n;
  n.value = std::move(value);
  if (record_) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

template <typename Expr>
void Graph::accumulate(Var v, const Expr& g) {
  Node& n = nodes_[v.id];
  if (n.grad.size() == 0) {
    n.grad = g;
  } else {
    n.grad += g;
  }
}

Graph::Var Graph::constant(Matrix m) { return push(std::move(m)); }

Graph::Var Graph::parameter(Parameter& p) {
  Node n;
  n.param = &p;
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Graph::Var Graph::embedding(Parameter& table, std::span<const int> ids) {
  Matrix out(static_cast<Eigen::Index>(ids.size()), table.value.cols());
  for (std::size_t t = 0; t < ids.size(); ++t) out.row(t) = table.value.row(ids[t]);
  std::vector<int> idx(ids.begin(), ids.end());
  Parameter* tp = &table;
  return push(std::move(out), [tp, idx](Graph&, const Matrix& g) {
    for (std::size_t t = 0; t < idx.size(); ++t) tp->grad.row(idx[t]) += g.row(t);
  });
}

Graph::Var Graph::matmul(Var a, Var b) {
  Matrix out = value(a) * value(b);
  return push(std::move(out), [a, b](Graph& gr, const Matrix& g) {
    gr.accumulate(a, g * gr.value(b).transpose());
    gr.accumulate(b, gr.value(a).transpose() * g);
  });
}

Graph::Var Graph::matmul_bt(Var a, Var b) {
  Matrix out = value(a) * value(b).transpose();
  return push(std::move(out), [a, b](Graph& gr, const Matrix& g) {
    gr.accumulate(a, g * gr.value(b));
    gr.accumulate(b, g.transpose() * gr.value(a));
  });
}

Graph::Var Graph::add(Var a, Var b) {
  Matrix out = value(a) + value(b);
  return push(std::move(out), [a, b](Graph& gr, const Matrix& g) {
    gr.accumulate(a, g);
    gr.accumulate(b, g);
  });
}

Graph::Var Graph::add_row(Var a, Var row) {
  Matrix out = value(a).rowwise() + value(row).row(0);
  return push(std::move(out), [a, row](Graph& gr, const Matrix& g) {
    gr.accumulate(a, g);
    gr.accumulate(row, g.colwise().sum());
  });
}

Graph::Var Graph::scale(Var a, double s) {
  Matrix out = value(a) * s;
  return push(std::move(out), [a, s](Graph& gr, const Matrix& g) { gr.accumulate(a, g * s); });
}

Graph::Var Graph::gelu(Var a) {
  const Matrix& x = value(a);
  Matrix out = x.unaryExpr([](double v) {
    return 0.5 * v * (1.0 + std::tanh(kGeluC * (v + kGeluA * v * v * v)));
  });
  return push(std::move(out), [a](Graph& gr, const Matrix& g) {
    Matrix d = gr.value(a).unaryExpr([](double v) {
      double t = std::tanh(kGeluC * (v + kGeluA * v * v * v));
      return 0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * kGeluC * (1.0 + 3.0 * kGeluA * v * v);
    });
    gr.accumulate(a, g.cwiseProduct(d));
  });
}

Graph::Var Graph::layer_norm(Var x, Var gain, Var bias) {
  const Matrix& xv = value(x);
  const Eigen::Index rows = xv.rows(), d = xv.cols();
  Matrix xhat(rows, d);
  Eigen::VectorXd inv_std(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    double mu = xv.row(r).mean();
    double var = (xv.row(r).array() - mu).square().mean();
    inv_std(r) = 1.0 / std::sqrt(var + kLayerNormEps);
    xhat.row(r) = (xv.row(r).array() - mu) * inv_std(r);
  }
  Matrix out = (xhat.array().rowwise() * value(gain).row(0).array()).matrix();
  out.rowwise() += value(bias).row(0);
  return push(std::move(out), [x, gain, bias, xhat, inv_std](Graph& gr, const Matrix& g) {
    const Eigen::Index rows = g.rows(), d = g.cols();
    gr.accumulate(bias, g.colwise().sum());
    gr.accumulate(gain, g.cwiseProduct(xhat).colwise().sum());
    Matrix dxhat = (g.array().rowwise() * gr.value(gain).row(0).array()).matrix();
    Matrix dx(rows, d);
    for (Eigen::Index r = 0; r < rows; ++r) {
      double m1 = dxhat.row(r).mean();
      double m2 = dxhat.row(r).dot(xhat.row(r)) / static_cast<double>(d);
      dx.row(r) = inv_std(r) * (dxhat.row(r).array() - m1 - xhat.row(r).array() * m2).matrix();
    }
    gr.accumulate(x, dx);
  });
}

Graph::Var Graph::masked_softmax(Var scores, const Mask& allowed) {
  const Matrix& s = value(scores);
  Matrix out = Matrix::Zero(s.rows(), s.cols());
  for (Eigen::Index r = 0; r < s.rows(); ++r) {
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < s.cols(); ++c) {
      if (allowed(r, c)) mx = std::max(mx, s(r, c));
    }
    if (!std::isfinite(mx)) continue;
    double z = 0.0;
    for (Eigen::Index c = 0; c < s.cols(); ++c) {
      if (allowed(r, c)) {
        out(r, c) = std::exp(s(r, c) - mx);
        z += out(r, c);
      }
    }
    out.row(r) /= z;
  }
  Matrix y = out;
  return push(std::move(out), [scores, y](Graph& gr, const Matrix& g) {
    Eigen::VectorXd dot = g.cwiseProduct(y).rowwise().sum();
    Matrix dx = y.cwiseProduct(g - dot.replicate(1, g.cols()));
    gr.accumulate(scores, dx);
  });
}

Graph::Var Graph::softmax(Var logits) {
  const Matrix& s = value(logits);
  return masked_softmax(logits, Mask::Constant(s.rows(), s.cols(), true));
}

Graph::Var Graph::slice_cols(Var a, int start, int count) {
  Matrix out = value(a).middleCols(start, count);
  return push(std::move(out), [a, start, count](Graph& gr, const Matrix& g) {
    Matrix full = Matrix::Zero(gr.value(a).rows(), gr.value(a).cols());
    full.middleCols(start, count) = g;
    gr.accumulate(a, full);
  });
}

Graph::Var Graph::concat_cols(std::span<const Var> parts) {
  Eigen::Index rows = value(parts[0]).rows(), cols = 0;
  for (Var p : parts) cols += value(p).cols();
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  for (Var p : parts) {
    out.middleCols(at, value(p).cols()) = value(p);
    at += value(p).cols();
  }
  std::vector<Var> ps(parts.begin(), parts.end());
  return push(std::move(out), [ps](Graph& gr, const Matrix& g) {
    Eigen::Index at = 0;
    for (Var p : ps) {
      Eigen::Index c = gr.value(p).cols();
      gr.accumulate(p, g.middleCols(at, c));
      at += c;
    }
  });
}

Graph::Var Graph::masked_mean_rows(Var x, std::span<const char> keep) {
  const Matrix& xv = value(x);
  Matrix out = Matrix::Zero(1, xv.cols());
  int n = 0;
  for (Eigen::Index r = 0; r < xv.rows(); ++r) {
    if (keep[r]) {
      out += xv.row(r);
      ++n;
    }
  }
  require(n > 0, ErrorCode::kEmptyInput, "mean pooling over zero tokens");
  out /= static_cast<double>(n);
  std::vector<char> k(keep.begin(), keep.end());
  return push(std::move(out), [x, k, n](Graph& gr, const Matrix& g) {
    Matrix dx = Matrix::Zero(gr.value(x).rows(), gr.value(x).cols());
    for (Eigen::Index r = 0; r < dx.rows(); ++r) {
      if (k[r]) dx.row(r) = g.row(0) / static_cast<double>(n);
    }
    gr.accumulate(x, dx);
  });
}

Graph::Var Graph::token_nll(Var logits, std::span<const int> targets) {
  const Matrix& z = value(logits);
  require(static_cast<std::size_t>(z.rows()) == targets.size() && !targets.empty(),
          ErrorCode::kLengthMismatch, "token_nll: logits rows must match non-empty targets");
  Matrix probs(z.rows(), z.cols());
  double total = 0.0;
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    double mx = z.row(r).maxCoeff();
    probs.row(r) = (z.row(r).array() - mx).exp();
    probs.row(r) /= probs.row(r).sum();
    total -= std::log(clamp_prob(probs(r, targets[r])));
  }
  Matrix out(1, 1);
  out(0, 0) = total / static_cast<double>(targets.size());
  std::vector<int> t(targets.begin(), targets.end());
  return push(std::move(out), [logits, probs, t](Graph& gr, const Matrix& g) {
    Matrix dz = probs;
    for (std::size_t r = 0; r < t.size(); ++r) {
      if (inside(probs(r, t[r]))) {
        dz(r, t[r]) -= 1.0;
      } else {
        dz.row(r).setZero();  // clamped: flat region
      }
    }
    gr.accumulate(logits, dz * (g(0, 0) / static_cast<double>(t.size())));
  });
}

Graph::Var Graph::class_nll(Var probs, int label) {
  const Matrix& p = value(probs);
  Matrix out(1, 1);
  out(0, 0) = -std::log(clamp_prob(p(0, label)));
  return push(std::move(out), [probs, label](Graph& gr, const Matrix& g) {
    const Matrix& pv = gr.value(probs);
    Matrix d = Matrix::Zero(1, pv.cols());
    if (inside(pv(0, label))) d(0, label) = -g(0, 0) / pv(0, label);
    gr.accumulate(probs, d);
  });
}

Graph::Var Graph::kl_to_constant(Var probs, const Matrix& target) {
  const Matrix& s = value(probs);
  Matrix out(1, 1);
  double kl = 0.0;
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    kl += s(0, j) * std::log(clamp_prob(s(0, j)) / clamp_prob(target(0, j)));
  }
  out(0, 0) = kl;
  return push(std::move(out), [probs, target](Graph& gr, const Matrix& g) {
    const Matrix& sv = gr.value(probs);
    Matrix d(1, sv.cols());
    for (Eigen::Index j = 0; j < sv.cols(); ++j) {
      double term = std::log(clamp_prob(sv(0, j)) / clamp_prob(target(0, j)));
      d(0, j) = g(0, 0) * (term + (inside(sv(0, j)) ? 1.0 : 0.0));
    }
    gr.accumulate(probs, d);
  });
}

Graph::Var Graph::weighted_sum(std::span<const std::pair<double, Var>> terms) {
  Matrix out = Matrix::Zero(1, 1);
  for (const auto& [w, v] : terms) out(0, 0) += w * scalar(v);
  std::vector<std::pair<double, Var>> ts(terms.begin(), terms.end());
  return push(std::move(out), [ts](Graph& gr, const Matrix& g) {
    for (const auto& [w, v] : ts) gr.accumulate(v, g * w);
  });
}

void Graph::backward(Var loss) {
  require(record_, ErrorCode::kInternal, "backward() on a non-recording graph");
  require(value(loss).size() == 1, ErrorCode::kInternal, "backward() needs a scalar");
  nodes_[loss.id].grad = Matrix::Ones(1, 1);
  for (int i = loss.id; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.grad.size() == 0) continue;
    if (n.param) {
      n.param->grad += n.grad;
    } else if (n.backward) {
      n.backward(*this, n.grad);
    }
  }
}

}  // namespace toxcl::nn
