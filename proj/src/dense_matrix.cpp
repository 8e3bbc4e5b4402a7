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

#include "gcnjem/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "binary_io.hpp"
#include "gcnjem/error.hpp"

namespace gcnjem {
namespace {

constexpr std::string_view kMatrixMagic = "GJM1";

void RequireFinite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteValue, "matrix entry is NaN or Inf");
    }
  }
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (!std::isfinite(fill)) {
    throw Error(ErrorCode::kNonFiniteValue, "fill value is NaN or Inf");
  }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::kDimensionMismatch,
                "data length " + std::to_string(data_.size()) + " != " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
  RequireFinite(data_);
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorCode::kDimensionMismatch, "ragged initializer list");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
  RequireFinite(data_);
}

DenseMatrix DenseMatrix::Identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::AllFinite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

DenseMatrix Matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "matmul inner dimensions differ");
  }
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    const auto lhs = a.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double s = lhs[k];
      // Sparse bag-of-words features are mostly exact zeros.
      if (s == 0.0) continue;
      const auto rhs = b.row(k);
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += s * rhs[j];
    }
  }
  return c;
}

DenseMatrix MatmulTransA(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "matmul(aT, b) row counts differ");
  }
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto lhs = a.row(r);
    const auto rhs = b.row(r);
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      const double s = lhs[i];
      if (s == 0.0) continue;
      auto out = c.row(i);
      for (std::size_t j = 0; j < rhs.size(); ++j) out[j] += s * rhs[j];
    }
  }
  return c;
}

DenseMatrix MatmulTransB(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "matmul(a, bT) column counts differ");
  }
  DenseMatrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto lhs = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const auto rhs = b.row(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < lhs.size(); ++k) acc += lhs[k] * rhs[k];
      c(i, j) = acc;
    }
  }
  return c;
}

DenseMatrix Transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

DenseMatrix Relu(const DenseMatrix& a) {
  DenseMatrix out = a;
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  return out;
}

double LogSumExp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(values.begin(), values.end());
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - m);
  return m + std::log(acc);
}

DenseMatrix RowLogSumExp(const DenseMatrix& logits) {
  if (logits.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "log-sum-exp of an empty matrix");
  }
  DenseMatrix out(logits.rows(), 1);
  for (std::size_t i = 0; i < logits.rows(); ++i) out(i, 0) = LogSumExp(logits.row(i));
  return out;
}

DenseMatrix RowSoftmax(const DenseMatrix& logits) {
  DenseMatrix out(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const double lse = LogSumExp(logits.row(i));
    for (std::size_t j = 0; j < logits.cols(); ++j) {
      out(i, j) = std::exp(logits(i, j) - lse);
    }
  }
  return out;
}

double MaskedCrossEntropy(const DenseMatrix& logits, std::span<const int> labels,
                          std::span<const std::size_t> mask) {
  if (mask.empty()) throw Error(ErrorCode::kEmptyMask, "cross-entropy over empty mask");
  if (labels.size() != logits.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "label count != logits rows");
  }
  double total = 0.0;
  for (std::size_t i : mask) {
    if (i >= logits.rows()) {
      throw Error(ErrorCode::kIndexOutOfRange, "mask index " + std::to_string(i));
    }
    const int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= logits.cols()) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  "node " + std::to_string(i) + " has label " + std::to_string(y));
    }
    total += LogSumExp(logits.row(i)) - logits(i, static_cast<std::size_t>(y));
  }
  return total / static_cast<double>(mask.size());
}

double FrobeniusNorm(const DenseMatrix& a) {
  double acc = 0.0;
  for (double v : a.data()) acc += v * v;
  return std::sqrt(acc);
}

void WriteCsv(std::ostream& out, const DenseMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << FormatDouble(m(i, j));
    }
    out << '\n';
  }
}

DenseMatrix ReadCsv(std::istream& in) {
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t count = 0;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      const std::string field = line.substr(start, end - start);
      char* parse_end = nullptr;
      const double v = std::strtod(field.c_str(), &parse_end);
      if (field.empty() || parse_end != field.c_str() + field.size()) {
        throw Error(ErrorCode::kParseError,
                    "row " + std::to_string(rows) + ": bad number '" + field + "'");
      }
      data.push_back(v);
      ++count;
      start = end + 1;
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw Error(ErrorCode::kRaggedFeatureRows,
                  "row " + std::to_string(rows) + " has " + std::to_string(count) +
                      " columns, expected " + std::to_string(cols));
    }
    ++rows;
  }
  return DenseMatrix(rows, cols, std::move(data));
}

void SaveCsv(const std::string& path, const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  WriteCsv(out, m);
}

DenseMatrix LoadCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, path);
  return ReadCsv(in);
}

void WriteBinary(std::ostream& out, const DenseMatrix& m) {
  internal::WriteMagic(out, kMatrixMagic);
  internal::WriteU64(out, m.rows());
  internal::WriteU64(out, m.cols());
  for (double v : m.data()) internal::WriteF64(out, v);
}

DenseMatrix ReadBinary(std::istream& in) {
  internal::ExpectMagic(in, kMatrixMagic);
  const std::uint64_t rows = internal::ReadU64(in);
  const std::uint64_t cols = internal::ReadU64(in);
  if (cols != 0 && rows > std::numeric_limits<std::uint64_t>::max() / 8 / cols) {
    throw Error(ErrorCode::kCorruptMagic, "matrix header dimensions overflow");
  }
  internal::CheckRemaining(in, rows * cols * 8);
  std::vector<double> data(rows * cols);
  for (double& v : data) v = internal::ReadF64(in);
  return DenseMatrix(rows, cols, std::move(data));
}

}  // namespace gcnjem
