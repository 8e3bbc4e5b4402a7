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

#ifndef GCNJEM_ANALYSIS_HPP_
#define GCNJEM_ANALYSIS_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gcnjem/dense_matrix.hpp"
#include "gcnjem/spectrum.hpp"

namespace gcnjem {

inline constexpr std::size_t kDefaultCalibrationBuckets = 20;
inline constexpr std::size_t kDefaultConfidenceBins = 100;

// Fraction of masked nodes whose prediction equals the label.
double Accuracy(std::span<const int> predictions, std::span<const int> labels,
                std::span<const std::size_t> mask);

struct CalibrationBucket {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  double mean_confidence = 0.0;  // 0 for empty buckets
  double mean_accuracy = 0.0;
};

struct CalibrationReport {
  std::vector<CalibrationBucket> buckets;
  double ece = 0.0;
};

// M equal-width buckets over [0, 1]; bucket m holds [m/M, (m+1)/M) and the
// last bucket also takes 1.0. Empty buckets contribute nothing. Throws
// ConfidenceOutOfRange outside [0, 1].
CalibrationReport ExpectedCalibrationError(std::span<const double> confidences,
                                           std::span<const bool> correct,
                                           std::size_t buckets = kDefaultCalibrationBuckets);

// Header `bucket,lo,hi,count,mean_conf,mean_acc` and a final `ece,<value>`.
void WriteCalibrationCsv(std::ostream& out, const CalibrationReport& report);

struct HistogramReport {
  std::vector<double> bin_edges;
  std::vector<std::size_t> bin_counts;
  bool log_scale_hint = false;
};

// `bins` equal bins over [0, 1], last bin closed.
HistogramReport ConfidenceHistogram(std::span<const double> confidences,
                                    std::size_t bins = kDefaultConfidenceBins);
// Header `bin_left,bin_right,count`.
void WriteHistogramCsv(std::ostream& out, const HistogramReport& report);

// Unbiased (n−1) f×f covariance of the rows of x.
DenseMatrix Covariance(const DenseMatrix& x);
SpectrumReport CovarianceSpectrum(const DenseMatrix& x, std::size_t bins = kDefaultSpectrumBins);

struct ClosedPathDelta {
  unsigned length = 0;
  double before = 0.0;
  double after = 0.0;
  double delta = 0.0;
};

struct SpectraComparison {
  std::vector<ClosedPathDelta> closed_paths;  // lengths 2..5
  double range_before = 0.0;                  // max − min eigenvalue
  double range_after = 0.0;
  double range_delta = 0.0;
};

SpectraComparison CompareSpectra(const SpectrumReport& before, const SpectrumReport& after);
// Header `metric,before,after,delta`.
void WriteComparisonCsv(std::ostream& out, const SpectraComparison& comparison);

}  // namespace gcnjem

#endif  // GCNJEM_ANALYSIS_HPP_
