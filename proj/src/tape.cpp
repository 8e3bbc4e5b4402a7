// Copyright 2026 The GCN-JEM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gcnjem/tape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gcnjem/error.hpp"

namespace gcnjem {
namespace {

void AddInto(std::optional<DenseMatrix>& acc, DenseMatrix delta) {
  if (!acc) {
    acc = std::move(delta);
    return;
  }
  auto dst = acc->data();
  const auto src = delta.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

double CombineSum(const std::vector<CombineTerm>& terms,
                  const std::vector<const DenseMatrix*>& values) {
  double total = 0.0;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto& term = terms[t];
    const auto data = values[t]->data();
    double partial = 0.0;
    auto visit = [&](std::size_t e) {
      partial += term.square ? data[e] * data[e] : data[e];
    };
    if (term.entries.empty()) {
      for (std::size_t e = 0; e < data.size(); ++e) visit(e);
    } else {
      for (std::size_t e : term.entries) visit(e);
    }
    total += term.weight * partial;
  }
  return total;
}

}  // namespace

Slot Tape::Record(Node node) {
  for (Slot in : node.inputs) {
    Check(in);
    node.needs_grad = node.needs_grad || nodes_[in].needs_grad;
  }
  if (node.op != Op::kLeaf) node.value = Evaluate(node);
  nodes_.push_back(std::move(node));
  return nodes_.size() - 1;
}

void Tape::Check(Slot slot) const {
  if (slot >= nodes_.size()) {
    throw Error(ErrorCode::kUnrecordedSlot, "slot " + std::to_string(slot));
  }
}

Slot Tape::Leaf(DenseMatrix value, bool requires_grad,
                std::optional<std::vector<std::size_t>> grad_rows) {
  if (!value.AllFinite()) throw Error(ErrorCode::kNonFiniteValue, "leaf value");
  if (grad_rows) {
    for (std::size_t r : *grad_rows) {
      if (r >= value.rows()) throw Error(ErrorCode::kIndexOutOfRange, "grad row");
    }
  }
  Node node;
  node.op = Op::kLeaf;
  node.value = std::move(value);
  node.requires_grad = requires_grad;
  node.needs_grad = requires_grad;
  node.grad_rows = std::move(grad_rows);
  return Record(std::move(node));
}

Slot Tape::Spmm(const SparseAdjacency& adjacency, Slot x) {
  Node node;
  node.op = Op::kSpmm;
  node.inputs = {x};
  node.adjacency = &adjacency;
  return Record(std::move(node));
}

Slot Tape::Matmul(Slot a, Slot b) {
  Node node;
  node.op = Op::kMatmul;
  node.inputs = {a, b};
  return Record(std::move(node));
}

Slot Tape::Relu(Slot x) {
  Node node;
  node.op = Op::kRelu;
  node.inputs = {x};
  return Record(std::move(node));
}

Slot Tape::RowLogSumExp(Slot logits) {
  Node node;
  node.op = Op::kRowLogSumExp;
  node.inputs = {logits};
  return Record(std::move(node));
}

Slot Tape::MaskedCrossEntropy(Slot logits, std::vector<int> labels,
                              std::vector<std::size_t> mask) {
  Node node;
  node.op = Op::kMaskedCrossEntropy;
  node.inputs = {logits};
  node.labels = std::move(labels);
  node.mask = std::move(mask);
  return Record(std::move(node));
}

Slot Tape::OrthogonalityPenalty(Slot w) {
  Node node;
  node.op = Op::kOrthogonality;
  node.inputs = {w};
  return Record(std::move(node));
}

Slot Tape::Combine(std::vector<CombineTerm> terms, CombinePost post) {
  Node node;
  node.op = Op::kCombine;
  for (const auto& term : terms) {
    Check(term.input);
    for (std::size_t e : term.entries) {
      if (e >= nodes_[term.input].value.size()) {
        throw Error(ErrorCode::kIndexOutOfRange, "combine entry " + std::to_string(e));
      }
    }
    node.inputs.push_back(term.input);
  }
  node.terms = std::move(terms);
  node.post = post;
  return Record(std::move(node));
}

const DenseMatrix& Tape::value(Slot slot) const {
  Check(slot);
  return nodes_[slot].value;
}

double Tape::scalar(Slot slot) const {
  const DenseMatrix& v = value(slot);
  if (v.size() != 1) {
    throw Error(ErrorCode::kDimensionMismatch, "slot " + std::to_string(slot) + " is not scalar");
  }
  return v(0, 0);
}

void Tape::SetLeafValue(Slot leaf, DenseMatrix value) {
  Check(leaf);
  Node& node = nodes_[leaf];
  if (node.op != Op::kLeaf) {
    throw Error(ErrorCode::kUnrecordedSlot, "slot " + std::to_string(leaf) + " is not a leaf");
  }
  if (!node.value.SameShape(value)) {
    throw Error(ErrorCode::kDimensionMismatch, "leaf value shape changed");
  }
  node.value = std::move(value);
}

void Tape::Recompute() {
  for (Node& node : nodes_) {
    if (node.op != Op::kLeaf) node.value = Evaluate(node);
  }
}

DenseMatrix Tape::Evaluate(const Node& node) const {
  auto in = [&](std::size_t k) -> const DenseMatrix& { return nodes_[node.inputs[k]].value; };
  switch (node.op) {
    case Op::kLeaf:
      return node.value;
    case Op::kSpmm:
      return gcnjem::Spmm(*node.adjacency, in(0));
    case Op::kMatmul:
      return gcnjem::Matmul(in(0), in(1));
    case Op::kRelu:
      return gcnjem::Relu(in(0));
    case Op::kRowLogSumExp:
      return gcnjem::RowLogSumExp(in(0));
    case Op::kMaskedCrossEntropy:
      return DenseMatrix(1, 1, gcnjem::MaskedCrossEntropy(in(0), node.labels, node.mask));
    case Op::kOrthogonality: {
      DenseMatrix gram = MatmulTransA(in(0), in(0));
      for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
      return DenseMatrix(1, 1, FrobeniusNorm(gram));
    }
    case Op::kCombine: {
      std::vector<const DenseMatrix*> values;
      for (Slot s : node.inputs) values.push_back(&nodes_[s].value);
      const double sum = CombineSum(node.terms, values);
      return DenseMatrix(1, 1, node.post == CombinePost::kAbs ? std::abs(sum) : sum);
    }
  }
  return {};
}

std::optional<std::span<const std::size_t>> Tape::RowsWanted(Slot input) const {
  const Node& node = nodes_[input];
  if (node.op == Op::kLeaf && node.grad_rows) {
    return std::span<const std::size_t>(*node.grad_rows);
  }
  return std::nullopt;
}

GradientSet Tape::Backward(Slot loss) const {
  Check(loss);
  if (nodes_[loss].value.size() != 1) {
    throw Error(ErrorCode::kDimensionMismatch, "backward needs a scalar loss");
  }
  std::vector<std::optional<DenseMatrix>> grads(nodes_.size());
  grads[loss] = DenseMatrix(1, 1, 1.0);

  for (Slot s = loss + 1; s-- > 0;) {
    const Node& node = nodes_[s];
    if (!grads[s] || !node.needs_grad || node.op == Op::kLeaf) continue;
    const DenseMatrix& g = *grads[s];
    auto input = [&](std::size_t k) -> const Node& { return nodes_[node.inputs[k]]; };
    auto wants = [&](std::size_t k) { return input(k).needs_grad; };

    switch (node.op) {
      case Op::kLeaf:
        break;
      case Op::kSpmm: {
        if (!wants(0)) break;
        const SparseAdjacency& adj = *node.adjacency;
        const auto rows = RowsWanted(node.inputs[0]);
        if (rows && adj.is_symmetric()) {
          DenseMatrix dx(g.rows(), g.cols());
          for (std::size_t r : *rows) {
            auto dst = dx.row(r);
            std::fill(dst.begin(), dst.end(), 0.0);
            const auto cols = adj.RowColumns(r);
            const auto vals = adj.RowValues(r);
            for (std::size_t p = 0; p < cols.size(); ++p) {
              const auto src = g.row(cols[p]);
              for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += vals[p] * src[c];
            }
          }
          AddInto(grads[node.inputs[0]], std::move(dx));
        } else {
          AddInto(grads[node.inputs[0]], SpmmTransposed(adj, g));
        }
        break;
      }
      case Op::kMatmul: {
        const DenseMatrix& a = input(0).value;
        const DenseMatrix& b = input(1).value;
        if (wants(0)) {
          const auto rows = RowsWanted(node.inputs[0]);
          if (rows) {
            DenseMatrix da(a.rows(), a.cols());
            for (std::size_t r : *rows) {
              auto dst = da.row(r);
              const auto gr = g.row(r);
              for (std::size_t k = 0; k < b.rows(); ++k) {
                const auto br = b.row(k);
                double acc = 0.0;
                for (std::size_t j = 0; j < br.size(); ++j) acc += gr[j] * br[j];
                dst[k] = acc;
              }
            }
            AddInto(grads[node.inputs[0]], std::move(da));
          } else {
            AddInto(grads[node.inputs[0]], MatmulTransB(g, b));
          }
        }
        if (wants(1)) AddInto(grads[node.inputs[1]], MatmulTransA(a, g));
        break;
      }
      case Op::kRelu: {
        if (!wants(0)) break;
        const DenseMatrix& x = input(0).value;
        DenseMatrix dx = g;
        auto d = dx.data();
        const auto xv = x.data();
        for (std::size_t i = 0; i < d.size(); ++i) {
          if (!(xv[i] > 0.0)) d[i] = 0.0;
        }
        AddInto(grads[node.inputs[0]], std::move(dx));
        break;
      }
      case Op::kRowLogSumExp: {
        if (!wants(0)) break;
        DenseMatrix dx = RowSoftmax(input(0).value);
        for (std::size_t i = 0; i < dx.rows(); ++i) {
          for (double& v : dx.row(i)) v *= g(i, 0);
        }
        AddInto(grads[node.inputs[0]], std::move(dx));
        break;
      }
      case Op::kMaskedCrossEntropy: {
        if (!wants(0)) break;
        const DenseMatrix& logits = input(0).value;
        DenseMatrix dx(logits.rows(), logits.cols());
        const double scale = g(0, 0) / static_cast<double>(node.mask.size());
        for (std::size_t i : node.mask) {
          const double lse = LogSumExp(logits.row(i));
          for (std::size_t j = 0; j < logits.cols(); ++j) {
            dx(i, j) += scale * std::exp(logits(i, j) - lse);
          }
          dx(i, static_cast<std::size_t>(node.labels[i])) -= scale;
        }
        AddInto(grads[node.inputs[0]], std::move(dx));
        break;
      }
      case Op::kOrthogonality: {
        if (!wants(0)) break;
        const DenseMatrix& w = input(0).value;
        const double norm = node.value(0, 0);
        DenseMatrix dw(w.rows(), w.cols());
        // d‖WᵀW − I‖_F / dW = 2 W (WᵀW − I) / ‖WᵀW − I‖_F; 0 at the minimum.
        if (norm > 0.0) {
          DenseMatrix residual = MatmulTransA(w, w);
          for (std::size_t i = 0; i < residual.rows(); ++i) residual(i, i) -= 1.0;
          dw = gcnjem::Matmul(w, residual);
          const double scale = 2.0 * g(0, 0) / norm;
          for (double& v : dw.data()) v *= scale;
        }
        AddInto(grads[node.inputs[0]], std::move(dw));
        break;
      }
      case Op::kCombine: {
        double upstream = g(0, 0);
        if (node.post == CombinePost::kAbs) {
          std::vector<const DenseMatrix*> values;
          for (Slot in : node.inputs) values.push_back(&nodes_[in].value);
          const double sum = CombineSum(node.terms, values);
          upstream *= sum > 0.0 ? 1.0 : (sum < 0.0 ? -1.0 : 0.0);
        }
        for (std::size_t t = 0; t < node.terms.size(); ++t) {
          const CombineTerm& term = node.terms[t];
          if (!wants(t)) continue;
          const DenseMatrix& x = input(t).value;
          DenseMatrix dx(x.rows(), x.cols());
          auto d = dx.data();
          const auto xv = x.data();
          auto visit = [&](std::size_t e) {
            d[e] += upstream * term.weight * (term.square ? 2.0 * xv[e] : 1.0);
          };
          if (term.entries.empty()) {
            for (std::size_t e = 0; e < d.size(); ++e) visit(e);
          } else {
            for (std::size_t e : term.entries) visit(e);
          }
          AddInto(grads[term.input], std::move(dx));
        }
        break;
      }
    }
  }

  GradientSet out;
  for (Slot s = 0; s < nodes_.size(); ++s) {
    const Node& node = nodes_[s];
    if (node.op != Op::kLeaf || !node.requires_grad) continue;
    out.emplace(s, grads[s] ? std::move(*grads[s])
                            : DenseMatrix(node.value.rows(), node.value.cols()));
  }
  return out;
}

double FiniteDifferenceCheck(Tape& tape, Slot loss, Slot wrt, double step) {
  const GradientSet grads = tape.Backward(loss);
  const auto it = grads.find(wrt);
  if (it == grads.end()) {
    throw Error(ErrorCode::kUnrecordedSlot,
                "slot " + std::to_string(wrt) + " is not a trainable leaf");
  }
  const DenseMatrix& analytic = it->second;
  const DenseMatrix original = tape.value(wrt);
  double worst = 0.0;
  for (std::size_t e = 0; e < original.size(); ++e) {
    DenseMatrix plus = original;
    plus.data()[e] += step;
    tape.SetLeafValue(wrt, std::move(plus));
    tape.Recompute();
    const double f_plus = tape.scalar(loss);

    DenseMatrix minus = original;
    minus.data()[e] -= step;
    tape.SetLeafValue(wrt, std::move(minus));
    tape.Recompute();
    const double f_minus = tape.scalar(loss);

    const double numeric = (f_plus - f_minus) / (2.0 * step);
    const double err = std::abs(analytic.data()[e] - numeric) / (std::abs(numeric) + 1e-12);
    worst = std::max(worst, err);
  }
  tape.SetLeafValue(wrt, original);
  tape.Recompute();
  return worst;
}

}  // namespace gcnjem
