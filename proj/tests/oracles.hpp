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

// Independent reference computations for the test suites. Nothing here calls
// into the library's numeric kernels.

#ifndef GCNJEM_TESTS_ORACLES_HPP_
#define GCNJEM_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <set>
#include <vector>

#include "gcnjem/dense_matrix.hpp"
#include "gcnjem/sparse_adjacency.hpp"

namespace gcnjem::testing {

using Grid = std::vector<std::vector<double>>;

inline DenseMatrix RandomMatrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = dist(rng);
  return m;
}

// Erdős–Rényi G(n, p) edge list, i < j.
inline std::vector<Edge> RandomEdges(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(rng)) edges.emplace_back(i, j);
    }
  }
  return edges;
}

inline Grid ToGrid(const DenseMatrix& m) {
  Grid g(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) g[i][j] = m(i, j);
  }
  return g;
}

inline Grid NaiveMatmul(const Grid& a, const Grid& b) {
  const std::size_t n = a.size();
  const std::size_t k = b.size();
  const std::size_t m = b.empty() ? 0 : b[0].size();
  Grid c(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += a[i][p] * b[p][j];
      c[i][j] = acc;
    }
  }
  return c;
}

inline Grid NaiveRelu(Grid g) {
  for (auto& row : g) {
    for (double& v : row) v = v > 0.0 ? v : 0.0;
  }
  return g;
}

// Dense D^{-1/2}(A + I)D^{-1/2} built from an edge list.
inline Grid DenseNormalizedAdjacency(std::size_t n, const std::vector<Edge>& edges) {
  Grid a(n, std::vector<double>(n, 0.0));
  for (const auto& [i, j] : edges) {
    a[i][j] = 1.0;
    a[j][i] = 1.0;
  }
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
  std::vector<double> deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) deg[i] += a[i][j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] /= std::sqrt(deg[i]) * std::sqrt(deg[j]);
  }
  return a;
}

// Â relu(Â X W0) W1 by dense composition.
inline Grid DenseGcnForward(const Grid& a_norm, const Grid& x, const Grid& w0, const Grid& w1) {
  const Grid hidden = NaiveRelu(NaiveMatmul(a_norm, NaiveMatmul(x, w0)));
  return NaiveMatmul(a_norm, NaiveMatmul(hidden, w1));
}

inline double DirectLogSumExp(const std::vector<double>& row) {
  double sum = 0.0;
  for (double v : row) sum += std::exp(v);
  return std::log(sum);
}

// -log(exp(z_y) / Σ exp(z)) by the textbook formula (no stabilization).
inline double DirectCrossEntropy(const std::vector<double>& row, int label) {
  double denom = 0.0;
  for (double v : row) denom += std::exp(v);
  return -std::log(std::exp(row[static_cast<std::size_t>(label)]) / denom);
}

// Triangles by brute-force triple enumeration.
inline std::size_t BruteTriangles(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& [i, j] : edges) adj[i][j] = adj[j][i] = true;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!adj[i][j]) continue;
      for (std::size_t k = j + 1; k < n; ++k) {
        if (adj[i][k] && adj[j][k]) ++count;
      }
    }
  }
  return count;
}

// Closed walks of a given length by explicit enumeration over node sequences.
inline std::size_t BruteClosedWalks(std::size_t n, const std::vector<Edge>& edges,
                                    unsigned length) {
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& [i, j] : edges) adj[i][j] = adj[j][i] = true;
  std::size_t count = 0;
  std::vector<std::size_t> walk(length);
  auto extend = [&](auto&& self, unsigned depth) -> void {
    if (depth == length) {
      if (adj[walk[length - 1]][walk[0]]) ++count;
      return;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (depth == 0 || adj[walk[depth - 1]][v]) {
        walk[depth] = v;
        self(self, depth + 1);
      }
    }
  };
  extend(extend, 0);
  return count;
}

// ‖A v_j − λ_j v_j‖₂ / ‖v_j‖₂ for column j of `vectors`.
inline double EigenResidual(const DenseMatrix& a, const DenseMatrix& vectors, double lambda,
                            std::size_t j) {
  double res = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double av = 0.0;
    for (std::size_t k = 0; k < a.cols(); ++k) av += a(i, k) * vectors(k, j);
    const double r = av - lambda * vectors(i, j);
    res += r * r;
    norm += vectors(i, j) * vectors(i, j);
  }
  return std::sqrt(res) / std::sqrt(norm);
}

// Every unordered pair of distinct sampled nodes whose values differ by at
// most tau, as sorted (min, max) pairs.
inline std::vector<Edge> PairScanEdges(const std::vector<double>& values,
                                       const std::vector<std::size_t>& nodes, double tau) {
  std::set<Edge> found;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      if (nodes[a] != nodes[b] && std::abs(values[a] - values[b]) <= tau) {
        found.insert({std::min(nodes[a], nodes[b]), std::max(nodes[a], nodes[b])});
      }
    }
  }
  return {found.begin(), found.end()};
}

}  // namespace gcnjem::testing

#endif  // GCNJEM_TESTS_ORACLES_HPP_
