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

#ifndef GCNJEM_TAPE_HPP_
#define GCNJEM_TAPE_HPP_

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gcnjem/dense_matrix.hpp"
#include "gcnjem/sparse_adjacency.hpp"

namespace gcnjem {

using Slot = std::size_t;

// Gradients keyed by leaf slot; each matrix has its leaf's shape.
using GradientSet = std::map<Slot, DenseMatrix>;

// One weighted contribution to Tape::Combine.
struct CombineTerm {
  Slot input = 0;
  double weight = 1.0;
  // Flat (row-major) entry indices; empty selects every entry.
  std::vector<std::size_t> entries;
  // Square each selected entry before weighting.
  bool square = false;
};

enum class CombinePost { kIdentity, kAbs };

// Reverse-mode recorder for the primitives the two-layer GCN needs: leaf,
// sparse-dense product, matmul, ReLU, row log-sum-exp, masked cross-entropy,
// orthogonality penalty and a weighted scalar combine. Every slot is written
// once, in order. A Tape is single-threaded; adjacencies passed to Spmm must
// outlive it.
class Tape {
 public:
  // `grad_rows` restricts the computed input gradient to those rows (the rest
  // of the returned gradient is zero). Used by the sampler, which only moves
  // a handful of feature rows.
  Slot Leaf(DenseMatrix value, bool requires_grad,
            std::optional<std::vector<std::size_t>> grad_rows = std::nullopt);
  Slot Spmm(const SparseAdjacency& adjacency, Slot x);
  Slot Matmul(Slot a, Slot b);
  Slot Relu(Slot x);
  Slot RowLogSumExp(Slot logits);
  Slot MaskedCrossEntropy(Slot logits, std::vector<int> labels, std::vector<std::size_t> mask);
  // Scalar ‖WᵀW − I‖_F.
  Slot OrthogonalityPenalty(Slot w);
  // Scalar post(Σ_terms weight · Σ_entries g(x)).
  Slot Combine(std::vector<CombineTerm> terms, CombinePost post = CombinePost::kIdentity);

  std::size_t size() const noexcept { return nodes_.size(); }
  const DenseMatrix& value(Slot slot) const;
  double scalar(Slot slot) const;

  // Replaces a leaf's value; call Recompute() before reading dependents.
  void SetLeafValue(Slot leaf, DenseMatrix value);
  // Re-evaluates every non-leaf slot in recording order.
  void Recompute();

  // Gradients of a scalar slot with respect to every leaf that requires
  // grad. Fan-out is summed. Throws UnrecordedSlot for an unknown slot.
  GradientSet Backward(Slot loss) const;

 private:
  enum class Op {
    kLeaf,
    kSpmm,
    kMatmul,
    kRelu,
    kRowLogSumExp,
    kMaskedCrossEntropy,
    kOrthogonality,
    kCombine,
  };

  struct Node {
    Op op = Op::kLeaf;
    std::vector<Slot> inputs;
    DenseMatrix value;
    bool requires_grad = false;  // leaves only
    bool needs_grad = false;     // some trainable leaf feeds this slot
    std::optional<std::vector<std::size_t>> grad_rows;
    const SparseAdjacency* adjacency = nullptr;
    std::vector<int> labels;
    std::vector<std::size_t> mask;
    std::vector<CombineTerm> terms;
    CombinePost post = CombinePost::kIdentity;
  };

  Slot Record(Node node);
  void Check(Slot slot) const;
  DenseMatrix Evaluate(const Node& node) const;
  std::optional<std::span<const std::size_t>> RowsWanted(Slot input) const;

  std::deque<Node> nodes_;  // stable references across Record()
};

// Max over entries of leaf `wrt` of |analytic − central difference| /
// (|central difference| + 1e-12). The tape is restored before returning.
double FiniteDifferenceCheck(Tape& tape, Slot loss, Slot wrt, double step);

}  // namespace gcnjem

#endif  // GCNJEM_TAPE_HPP_
