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

#ifndef GCNJEM_DENSE_MATRIX_HPP_
#define GCNJEM_DENSE_MATRIX_HPP_

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gcnjem {

// Row-major matrix of 64-bit reals. Constructors that take external data
// reject NaN/Inf; element access through operator() is unchecked.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix Identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool AllFinite() const noexcept;
  bool SameShape(const DenseMatrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  // Exact (bitwise) comparison.
  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix Matmul(const DenseMatrix& a, const DenseMatrix& b);
// aᵀ · b without materializing the transpose.
DenseMatrix MatmulTransA(const DenseMatrix& a, const DenseMatrix& b);
// a · bᵀ without materializing the transpose.
DenseMatrix MatmulTransB(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix Transpose(const DenseMatrix& a);
DenseMatrix Relu(const DenseMatrix& a);

// Per-row log-sum-exp with max subtraction; returns an n×1 column.
DenseMatrix RowLogSumExp(const DenseMatrix& logits);
double LogSumExp(std::span<const double> values);
DenseMatrix RowSoftmax(const DenseMatrix& logits);

// Mean over `mask` of -log softmax(logits[i])[labels[i]].
double MaskedCrossEntropy(const DenseMatrix& logits, std::span<const int> labels,
                          std::span<const std::size_t> mask);

double FrobeniusNorm(const DenseMatrix& a);

// CSV: one row per line, 17 significant digits, no header.
void WriteCsv(std::ostream& out, const DenseMatrix& m);
DenseMatrix ReadCsv(std::istream& in);
void SaveCsv(const std::string& path, const DenseMatrix& m);
DenseMatrix LoadCsv(const std::string& path);

// Binary record: magic "GJM1", u64 rows, u64 cols, rows*cols little-endian
// doubles.
void WriteBinary(std::ostream& out, const DenseMatrix& m);
DenseMatrix ReadBinary(std::istream& in);

}  // namespace gcnjem

#endif  // GCNJEM_DENSE_MATRIX_HPP_
