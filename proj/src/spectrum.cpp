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

#include "gcnjem/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>

#include "gcnjem/error.hpp"

namespace gcnjem {
namespace {

// Householder reduction to tridiagonal form. On return d holds the diagonal,
// e the subdiagonal (e[0] = 0), and v the orthogonal transform when
// accumulate is set.
void Tridiagonalize(DenseMatrix& v, std::vector<double>& d, std::vector<double>& e,
                    bool accumulate) {
  const std::size_t n = v.rows();
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  if (accumulate) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      v(n - 1, i) = v(i, i);
      v(i, i) = 1.0;
      const double h = d[i + 1];
      if (h != 0.0) {
        for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
        for (std::size_t j = 0; j <= i; ++j) {
          double g = 0.0;
          for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
          for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
        }
      }
      for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
      d[j] = v(n - 1, j);
      v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
  } else {
    // Without accumulation the diagonal still sits in row n-1 / on the
    // diagonal of v; recover it the same way the accumulation pass does.
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = v(i, i);
    d[n - 1] = v(n - 1, n - 1);
  }
  e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e).
void TridiagonalQl(std::vector<double>& d, std::vector<double>& e, DenseMatrix* v) {
  const std::size_t n = d.size();
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  const std::size_t max_iterations = 30 * n;
  std::size_t iterations = 0;
  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      do {
        if (++iterations > max_iterations) {
          throw Error(ErrorCode::kConvergenceFailure,
                      "QL exceeded " + std::to_string(max_iterations) + " iterations");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t i = m; i-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (v != nullptr) {
            for (std::size_t k = 0; k < n; ++k) {
              h = (*v)(k, i + 1);
              (*v)(k, i + 1) = s * (*v)(k, i) + c * h;
              (*v)(k, i) = c * (*v)(k, i) - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

EigenDecomposition SymmetricEigen(const DenseMatrix& a, bool want_vectors) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "eigensolver needs a square matrix");
  }
  const std::size_t n = a.rows();
  EigenDecomposition result;
  if (n == 0) return result;

  DenseMatrix v = a;
  std::vector<double> d(n);
  std::vector<double> e(n);
  Tridiagonalize(v, d, e, want_vectors);
  TridiagonalQl(d, e, want_vectors ? &v : nullptr);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  result.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) result.values[j] = d[order[j]];
  if (want_vectors) {
    DenseMatrix sorted(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) sorted(k, j) = v(k, order[j]);
    }
    result.vectors = std::move(sorted);
  }
  return result;
}

void FillHistogram(const std::vector<double>& values, std::size_t bins,
                   std::vector<double>& edges, std::vector<std::size_t>& counts) {
  if (bins == 0) throw Error(ErrorCode::kInvalidConfig, "histogram needs at least one bin");
  edges.assign(bins + 1, 0.0);
  counts.assign(bins, 0);
  if (values.empty()) {
    for (std::size_t b = 0; b <= bins; ++b) edges[b] = static_cast<double>(b) / bins;
    return;
  }
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) edges[b] = lo + width * static_cast<double>(b);
  edges[bins] = hi;
  for (double x : values) {
    auto b = static_cast<std::size_t>((x - lo) / width);
    counts[std::min(b, bins - 1)]++;
  }
}

SpectrumReport SpectrumOfSymmetric(const DenseMatrix& a, std::size_t bins) {
  SpectrumReport report;
  report.eigenvalues = SymmetricEigen(a).values;
  FillHistogram(report.eigenvalues, bins, report.bin_edges, report.bin_counts);
  return report;
}

SpectrumReport Spectrum(const SparseAdjacency& a, std::size_t bins) {
  if (!a.is_symmetric()) {
    throw Error(ErrorCode::kNotSymmetric, "spectrum needs a symmetric adjacency");
  }
  return SpectrumOfSymmetric(a.ToDense(), bins);
}

double ClosedPathCount(const SpectrumReport& spectrum, unsigned length) {
  double total = 0.0;
  for (double lambda : spectrum.eigenvalues) {
    double power = 1.0;
    for (unsigned k = 0; k < length; ++k) power *= lambda;
    total += power;
  }
  return total;
}

void WriteSpectrumCsv(std::ostream& out, const SpectrumReport& report) {
  out << "eigenvalue_bin_left,eigenvalue_bin_right,count\n";
  for (std::size_t b = 0; b < report.bin_counts.size(); ++b) {
    out << FormatDouble(report.bin_edges[b]) << ',' << FormatDouble(report.bin_edges[b + 1])
        << ',' << report.bin_counts[b] << '\n';
  }
}

void SaveSpectrumCsv(const std::string& path, const SpectrumReport& report) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  WriteSpectrumCsv(out, report);
}

}  // namespace gcnjem
