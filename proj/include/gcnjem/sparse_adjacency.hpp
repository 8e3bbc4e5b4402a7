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

#ifndef GCNJEM_SPARSE_ADJACENCY_HPP_
#define GCNJEM_SPARSE_ADJACENCY_HPP_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "gcnjem/dense_matrix.hpp"

namespace gcnjem {

using Edge = std::pair<std::size_t, std::size_t>;

// CSR adjacency. Column indices are strictly increasing within each row and
// there are no duplicate entries. When is_symmetric() is true, (i,j) is
// stored iff (j,i) is stored with the same value.
class SparseAdjacency {
 public:
  SparseAdjacency() = default;
  // Validates every CSR invariant; symmetry is checked, not assumed.
  SparseAdjacency(std::size_t n, std::vector<std::size_t> row_ptr,
                  std::vector<std::size_t> col_idx, std::vector<double> values);

  // Unit-weight undirected graph. Duplicates and reversed duplicates are
  // merged; self-loops in `edges` are rejected.
  static SparseAdjacency FromEdges(std::size_t n, std::span<const Edge> edges);
  static SparseAdjacency Identity(std::size_t n);
  // Stores every nonzero of a square dense matrix.
  static SparseAdjacency FromDense(const DenseMatrix& dense);

  std::size_t n() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return col_idx_.size(); }
  bool is_symmetric() const noexcept { return is_symmetric_; }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const std::size_t> RowColumns(std::size_t i) const {
    return {col_idx_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const double> RowValues(std::size_t i) const {
    return {values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  bool Contains(std::size_t i, std::size_t j) const;
  // Stored value at (i,j), 0 when absent.
  double At(std::size_t i, std::size_t j) const;
  bool HasSelfLoop() const;
  // Undirected off-diagonal edges as (i,j) with i < j, sorted.
  std::vector<Edge> UpperEdges() const;
  std::size_t UndirectedEdgeCount() const { return UpperEdges().size(); }
  bool SamePattern(const SparseAdjacency& other) const noexcept {
    return n_ == other.n_ && row_ptr_ == other.row_ptr_ && col_idx_ == other.col_idx_;
  }
  DenseMatrix ToDense() const;

  friend bool operator==(const SparseAdjacency& a, const SparseAdjacency& b) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
  bool is_symmetric_ = true;
};

// Â = A + I. Throws ExistingSelfLoop if any (i,i) is already stored.
SparseAdjacency AddSelfLoops(const SparseAdjacency& a);

// Row sums Σ_j a_ij.
std::vector<double> Degrees(const SparseAdjacency& a);

// D^{-1/2} Â D^{-1/2}. Throws NotSymmetric or ZeroDegree.
SparseAdjacency SymmetricNormalize(const SparseAdjacency& a_hat);

// Inserts the unit edge {i,j} in both directions; no-op when present.
SparseAdjacency AddEdge(const SparseAdjacency& a, std::size_t i, std::size_t j);

// Batch form of AddEdge. Returns the number of undirected edges that were
// not already present.
std::size_t AddEdges(SparseAdjacency& a, std::span<const Edge> edges);

// result[i] = Σ_j a[i,j] h[j], accumulated left to right over row i.
DenseMatrix Spmm(const SparseAdjacency& a, const DenseMatrix& h);
// aᵀ · h.
DenseMatrix SpmmTransposed(const SparseAdjacency& a, const DenseMatrix& h);

}  // namespace gcnjem

#endif  // GCNJEM_SPARSE_ADJACENCY_HPP_
