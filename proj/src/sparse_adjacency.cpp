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

#include "gcnjem/sparse_adjacency.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gcnjem/error.hpp"

namespace gcnjem {
namespace {

std::string Pair(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

// Builds CSR from per-row sorted (col, value) lists.
SparseAdjacency FromRows(std::size_t n,
                         const std::vector<std::vector<std::pair<std::size_t, double>>>& rows) {
  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [c, v] : rows[i]) {
      col_idx.push_back(c);
      values.push_back(v);
    }
    row_ptr[i + 1] = col_idx.size();
  }
  return SparseAdjacency(n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

}  // namespace

SparseAdjacency::SparseAdjacency(std::size_t n, std::vector<std::size_t> row_ptr,
                                 std::vector<std::size_t> col_idx,
                                 std::vector<double> values)
    : n_(n),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != n_ + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != col_idx_.size() || values_.size() != col_idx_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "inconsistent CSR arrays");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1]) {
      throw Error(ErrorCode::kDimensionMismatch, "row_ptr not monotone");
    }
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (col_idx_[p] >= n_) {
        throw Error(ErrorCode::kIndexOutOfRange, "column " + std::to_string(col_idx_[p]));
      }
      if (p > row_ptr_[i] && col_idx_[p] <= col_idx_[p - 1]) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "columns of row " + std::to_string(i) + " not strictly increasing");
      }
      if (!std::isfinite(values_[p])) {
        throw Error(ErrorCode::kNonFiniteValue, "edge value at " + Pair(i, col_idx_[p]));
      }
    }
  }
  is_symmetric_ = true;
  for (std::size_t i = 0; i < n_ && is_symmetric_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const std::size_t j = col_idx_[p];
      if (!Contains(j, i) || At(j, i) != values_[p]) {
        is_symmetric_ = false;
        break;
      }
    }
  }
}

SparseAdjacency SparseAdjacency::FromEdges(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [i, j] : edges) {
    if (i >= n || j >= n) throw Error(ErrorCode::kIndexOutOfRange, "edge " + Pair(i, j));
    if (i == j) throw Error(ErrorCode::kSelfEdgeRejected, "edge " + Pair(i, j));
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adj[i].begin(), adj[i].end());
    adj[i].erase(std::unique(adj[i].begin(), adj[i].end()), adj[i].end());
    for (std::size_t j : adj[i]) rows[i].emplace_back(j, 1.0);
  }
  return FromRows(n, rows);
}

SparseAdjacency SparseAdjacency::Identity(std::size_t n) {
  std::vector<std::size_t> row_ptr(n + 1);
  std::vector<std::size_t> col_idx(n);
  for (std::size_t i = 0; i <= n; ++i) row_ptr[i] = i;
  for (std::size_t i = 0; i < n; ++i) col_idx[i] = i;
  return SparseAdjacency(n, std::move(row_ptr), std::move(col_idx),
                         std::vector<double>(n, 1.0));
}

SparseAdjacency SparseAdjacency::FromDense(const DenseMatrix& dense) {
  if (dense.rows() != dense.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "adjacency must be square");
  }
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(dense.rows());
  for (std::size_t i = 0; i < dense.rows(); ++i) {
    for (std::size_t j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) rows[i].emplace_back(j, dense(i, j));
    }
  }
  return FromRows(dense.rows(), rows);
}

bool SparseAdjacency::Contains(std::size_t i, std::size_t j) const {
  if (i >= n_) return false;
  const auto cols = RowColumns(i);
  return std::binary_search(cols.begin(), cols.end(), j);
}

double SparseAdjacency::At(std::size_t i, std::size_t j) const {
  if (i >= n_) return 0.0;
  const auto cols = RowColumns(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return values_[row_ptr_[i] + static_cast<std::size_t>(it - cols.begin())];
}

bool SparseAdjacency::HasSelfLoop() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (Contains(i, i)) return true;
  }
  return false;
}

std::vector<Edge> SparseAdjacency::UpperEdges() const {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j : RowColumns(i)) {
      if (j > i) edges.emplace_back(i, j);
    }
  }
  return edges;
}

DenseMatrix SparseAdjacency::ToDense() const {
  DenseMatrix dense(n_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      dense(i, col_idx_[p]) = values_[p];
    }
  }
  return dense;
}

SparseAdjacency AddSelfLoops(const SparseAdjacency& a) {
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) {
    const auto cols = a.RowColumns(i);
    const auto vals = a.RowValues(i);
    bool placed = false;
    for (std::size_t p = 0; p < cols.size(); ++p) {
      if (cols[p] == i) {
        throw Error(ErrorCode::kExistingSelfLoop, "node " + std::to_string(i));
      }
      if (!placed && cols[p] > i) {
        rows[i].emplace_back(i, 1.0);
        placed = true;
      }
      rows[i].emplace_back(cols[p], vals[p]);
    }
    if (!placed) rows[i].emplace_back(i, 1.0);
  }
  return FromRows(a.n(), rows);
}

std::vector<double> Degrees(const SparseAdjacency& a) {
  std::vector<double> deg(a.n(), 0.0);
  for (std::size_t i = 0; i < a.n(); ++i) {
    for (double v : a.RowValues(i)) deg[i] += v;
  }
  return deg;
}

SparseAdjacency SymmetricNormalize(const SparseAdjacency& a_hat) {
  if (!a_hat.is_symmetric()) {
    throw Error(ErrorCode::kNotSymmetric, "symmetric normalization needs a symmetric matrix");
  }
  const std::vector<double> deg = Degrees(a_hat);
  std::vector<double> inv_sqrt(deg.size());
  for (std::size_t i = 0; i < deg.size(); ++i) {
    if (!(deg[i] > 0.0)) {
      throw Error(ErrorCode::kZeroDegree, "node " + std::to_string(i));
    }
    inv_sqrt[i] = 1.0 / std::sqrt(deg[i]);
  }
  std::vector<double> values(a_hat.values().begin(), a_hat.values().end());
  for (std::size_t i = 0; i < a_hat.n(); ++i) {
    const auto cols = a_hat.RowColumns(i);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      // Same expression for (i,j) and (j,i) keeps the result exactly symmetric.
      const std::size_t j = cols[p];
      const double scale = i < j ? inv_sqrt[i] * inv_sqrt[j] : inv_sqrt[j] * inv_sqrt[i];
      values[a_hat.row_ptr()[i] + p] *= scale;
    }
  }
  return SparseAdjacency(
      a_hat.n(), std::vector<std::size_t>(a_hat.row_ptr().begin(), a_hat.row_ptr().end()),
      std::vector<std::size_t>(a_hat.col_idx().begin(), a_hat.col_idx().end()),
      std::move(values));
}

SparseAdjacency AddEdge(const SparseAdjacency& a, std::size_t i, std::size_t j) {
  SparseAdjacency out = a;
  const Edge e{i, j};
  AddEdges(out, std::span<const Edge>(&e, 1));
  return out;
}

std::size_t AddEdges(SparseAdjacency& a, std::span<const Edge> edges) {
  std::vector<std::vector<std::pair<std::size_t, double>>> extra(a.n());
  for (const auto& [i, j] : edges) {
    if (i >= a.n() || j >= a.n()) {
      throw Error(ErrorCode::kIndexOutOfRange, "edge " + Pair(i, j));
    }
    if (i == j) throw Error(ErrorCode::kSelfEdgeRejected, "edge " + Pair(i, j));
  }
  std::size_t added = 0;
  for (const auto& [i, j] : edges) {
    if (a.Contains(i, j)) continue;
    auto& row = extra[i];
    if (std::any_of(row.begin(), row.end(), [&](const auto& e) { return e.first == j; })) {
      continue;
    }
    extra[i].emplace_back(j, 1.0);
    extra[j].emplace_back(i, 1.0);
    ++added;
  }
  if (added == 0) return 0;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) {
    const auto cols = a.RowColumns(i);
    const auto vals = a.RowValues(i);
    for (std::size_t p = 0; p < cols.size(); ++p) rows[i].emplace_back(cols[p], vals[p]);
    rows[i].insert(rows[i].end(), extra[i].begin(), extra[i].end());
    std::sort(rows[i].begin(), rows[i].end());
  }
  a = FromRows(a.n(), rows);
  return added;
}

DenseMatrix Spmm(const SparseAdjacency& a, const DenseMatrix& h) {
  if (a.n() != h.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "adjacency has " + std::to_string(a.n()) + " nodes, matrix has " +
                    std::to_string(h.rows()) + " rows");
  }
  DenseMatrix out(h.rows(), h.cols());
  for (std::size_t i = 0; i < a.n(); ++i) {
    auto dst = out.row(i);
    const auto cols = a.RowColumns(i);
    const auto vals = a.RowValues(i);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      const auto src = h.row(cols[p]);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += vals[p] * src[c];
    }
  }
  return out;
}

DenseMatrix SpmmTransposed(const SparseAdjacency& a, const DenseMatrix& h) {
  if (a.is_symmetric()) return Spmm(a, h);
  if (a.n() != h.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "adjacency/matrix row counts differ");
  }
  DenseMatrix out(h.rows(), h.cols());
  for (std::size_t i = 0; i < a.n(); ++i) {
    const auto src = h.row(i);
    const auto cols = a.RowColumns(i);
    const auto vals = a.RowValues(i);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      auto dst = out.row(cols[p]);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += vals[p] * src[c];
    }
  }
  return out;
}

}  // namespace gcnjem
