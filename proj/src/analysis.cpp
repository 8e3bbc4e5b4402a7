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

#include "gcnjem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "gcnjem/error.hpp"

namespace gcnjem {
namespace {

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::size_t UnitBin(double value, std::size_t bins) {
  const auto b = static_cast<std::size_t>(value * static_cast<double>(bins));
  return std::min(b, bins - 1);
}

void RequireUnitInterval(std::span<const double> values) {
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kConfidenceOutOfRange, "value " + FormatDouble(v));
    }
  }
}

}  // namespace

double Accuracy(std::span<const int> predictions, std::span<const int> labels,
                std::span<const std::size_t> mask) {
  if (mask.empty()) throw Error(ErrorCode::kEmptyMask, "accuracy over empty mask");
  if (predictions.size() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "prediction and label counts differ");
  }
  std::size_t correct = 0;
  for (std::size_t i : mask) {
    if (i >= labels.size()) throw Error(ErrorCode::kIndexOutOfRange, "mask node");
    if (predictions[i] == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(mask.size());
}

CalibrationReport ExpectedCalibrationError(std::span<const double> confidences,
                                           std::span<const bool> correct,
                                           std::size_t buckets) {
  if (buckets == 0) throw Error(ErrorCode::kInvalidConfig, "need at least one bucket");
  if (confidences.size() != correct.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "confidence and correctness counts differ");
  }
  RequireUnitInterval(confidences);

  CalibrationReport report;
  report.buckets.resize(buckets);
  std::vector<double> conf_sum(buckets, 0.0);
  std::vector<std::size_t> hits(buckets, 0);
  for (std::size_t i = 0; i < confidences.size(); ++i) {
    const std::size_t b = UnitBin(confidences[i], buckets);
    report.buckets[b].count++;
    conf_sum[b] += confidences[i];
    if (correct[i]) hits[b]++;
  }
  const double n = static_cast<double>(confidences.size());
  for (std::size_t b = 0; b < buckets; ++b) {
    CalibrationBucket& bucket = report.buckets[b];
    bucket.lo = static_cast<double>(b) / static_cast<double>(buckets);
    bucket.hi = static_cast<double>(b + 1) / static_cast<double>(buckets);
    if (bucket.count == 0) continue;
    const double count = static_cast<double>(bucket.count);
    bucket.mean_confidence = conf_sum[b] / count;
    bucket.mean_accuracy = static_cast<double>(hits[b]) / count;
    report.ece += count / n * std::abs(bucket.mean_accuracy - bucket.mean_confidence);
  }
  return report;
}

void WriteCalibrationCsv(std::ostream& out, const CalibrationReport& report) {
  out << "bucket,lo,hi,count,mean_conf,mean_acc\n";
  for (std::size_t b = 0; b < report.buckets.size(); ++b) {
    const auto& bucket = report.buckets[b];
    out << b << ',' << FormatDouble(bucket.lo) << ',' << FormatDouble(bucket.hi) << ','
        << bucket.count << ',' << FormatDouble(bucket.mean_confidence) << ','
        << FormatDouble(bucket.mean_accuracy) << '\n';
  }
  out << "ece," << FormatDouble(report.ece) << '\n';
}

HistogramReport ConfidenceHistogram(std::span<const double> confidences, std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::kInvalidConfig, "need at least one bin");
  RequireUnitInterval(confidences);
  HistogramReport report;
  report.bin_edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    report.bin_edges[b] = static_cast<double>(b) / static_cast<double>(bins);
  }
  report.bin_counts.assign(bins, 0);
  for (double c : confidences) report.bin_counts[UnitBin(c, bins)]++;
  return report;
}

void WriteHistogramCsv(std::ostream& out, const HistogramReport& report) {
  out << "bin_left,bin_right,count\n";
  for (std::size_t b = 0; b < report.bin_counts.size(); ++b) {
    out << FormatDouble(report.bin_edges[b]) << ',' << FormatDouble(report.bin_edges[b + 1])
        << ',' << report.bin_counts[b] << '\n';
  }
}

DenseMatrix Covariance(const DenseMatrix& x) {
  if (x.rows() < 2) throw Error(ErrorCode::kDimensionMismatch, "covariance needs n >= 2");
  const std::size_t n = x.rows();
  const std::size_t f = x.cols();
  std::vector<double> mean(f, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < f; ++j) mean[j] += x(i, j);
  }
  for (double& m : mean) m /= static_cast<double>(n);
  DenseMatrix centered = x;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < f; ++j) centered(i, j) -= mean[j];
  }
  DenseMatrix cov = MatmulTransA(centered, centered);
  for (double& v : cov.data()) v /= static_cast<double>(n - 1);
  // Mirror the upper triangle so the eigensolver sees an exactly symmetric matrix.
  for (std::size_t i = 0; i < f; ++i) {
    for (std::size_t j = i + 1; j < f; ++j) cov(j, i) = cov(i, j);
  }
  return cov;
}

SpectrumReport CovarianceSpectrum(const DenseMatrix& x, std::size_t bins) {
  return SpectrumOfSymmetric(Covariance(x), bins);
}

SpectraComparison CompareSpectra(const SpectrumReport& before, const SpectrumReport& after) {
  SpectraComparison c;
  for (unsigned length = 2; length <= 5; ++length) {
    ClosedPathDelta d;
    d.length = length;
    d.before = ClosedPathCount(before, length);
    d.after = ClosedPathCount(after, length);
    d.delta = d.after - d.before;
    c.closed_paths.push_back(d);
  }
  auto range = [](const SpectrumReport& r) {
    if (r.eigenvalues.empty()) return 0.0;
    return r.eigenvalues.back() - r.eigenvalues.front();
  };
  c.range_before = range(before);
  c.range_after = range(after);
  c.range_delta = c.range_after - c.range_before;
  return c;
}

void WriteComparisonCsv(std::ostream& out, const SpectraComparison& c) {
  out << "metric,before,after,delta\n";
  for (const auto& d : c.closed_paths) {
    out << "closed_paths_" << d.length << ',' << FormatDouble(d.before) << ','
        << FormatDouble(d.after) << ',' << FormatDouble(d.delta) << '\n';
  }
  out << "eigenvalue_range," << FormatDouble(c.range_before) << ','
      << FormatDouble(c.range_after) << ',' << FormatDouble(c.range_delta) << '\n';
}

}  // namespace gcnjem
