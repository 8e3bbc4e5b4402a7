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

#ifndef GCNJEM_SPECTRUM_HPP_
#define GCNJEM_SPECTRUM_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gcnjem/dense_matrix.hpp"
#include "gcnjem/sparse_adjacency.hpp"

namespace gcnjem {

inline constexpr std::size_t kDefaultSpectrumBins = 100;

struct EigenDecomposition {
  std::vector<double> values;          // ascending
  std::optional<DenseMatrix> vectors;  // column j pairs with values[j]
};

// Dense symmetric eigensolver: Householder tridiagonalization followed by
// implicit-shift QL. Only the lower triangle of `a` is trusted to be
// consistent with the upper; callers check symmetry. Throws
// ConvergenceFailure after 30n QL iterations.
EigenDecomposition SymmetricEigen(const DenseMatrix& a, bool want_vectors = false);

struct SpectrumReport {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> bin_edges;    // bins + 1 entries
  std::vector<std::size_t> bin_counts;
};

// Equal-width histogram over [min, max] of `values`; the last bin is closed.
// A degenerate range is widened to [v - 0.5, v + 0.5].
void FillHistogram(const std::vector<double>& values, std::size_t bins,
                   std::vector<double>& edges, std::vector<std::size_t>& counts);

SpectrumReport SpectrumOfSymmetric(const DenseMatrix& a, std::size_t bins = kDefaultSpectrumBins);
// Densifies; throws NotSymmetric for asymmetric input.
SpectrumReport Spectrum(const SparseAdjacency& a, std::size_t bins = kDefaultSpectrumBins);

// Σ_i λ_i^length, the number of closed walks of that length.
double ClosedPathCount(const SpectrumReport& spectrum, unsigned length);

// Header `eigenvalue_bin_left,eigenvalue_bin_right,count`.
void WriteSpectrumCsv(std::ostream& out, const SpectrumReport& report);
void SaveSpectrumCsv(const std::string& path, const SpectrumReport& report);

}  // namespace gcnjem

#endif  // GCNJEM_SPECTRUM_HPP_
