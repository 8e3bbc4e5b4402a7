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

#include "gcnjem/gcn_model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "binary_io.hpp"
#include "gcnjem/error.hpp"

namespace gcnjem {
namespace {

constexpr std::string_view kParamsMagic = "GJP1";
constexpr double kMinNormalizer = 1e-30;

DenseMatrix GlorotUniform(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  DenseMatrix w(fan_in, fan_out);
  for (double& v : w.data()) v = dist(rng);
  return w;
}

}  // namespace

void ModelConfig::Validate() const {
  if (feature_dim == 0 || hidden_dim == 0 || class_count == 0) {
    throw Error(ErrorCode::kInvalidConfig, "feature_dim, hidden_dim and class_count must be >= 1");
  }
  if (!(jemo_weight >= 0.0) || !std::isfinite(jemo_weight)) {
    throw Error(ErrorCode::kInvalidConfig, "jemo_weight must be finite and >= 0");
  }
}

GcnParams InitParams(const ModelConfig& config, std::mt19937_64& rng) {
  config.Validate();
  GcnParams params;
  params.w0 = GlorotUniform(config.feature_dim, config.hidden_dim, rng);
  params.w1 = GlorotUniform(config.hidden_dim, config.class_count, rng);
  return params;
}

void ValidateParams(const GcnParams& params) {
  if (params.w0.cols() != params.w1.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "W0 columns must equal W1 rows");
  }
  if (!params.w0.AllFinite() || !params.w1.AllFinite()) {
    throw Error(ErrorCode::kNonFiniteValue, "non-finite weight");
  }
}

DenseMatrix Forward(const SparseAdjacency& a_norm, const DenseMatrix& x,
                    const GcnParams& params) {
  if (x.rows() != a_norm.n() || x.cols() != params.w0.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "features do not match graph or W0");
  }
  const DenseMatrix hidden = Relu(Spmm(a_norm, Matmul(x, params.w0)));
  return Spmm(a_norm, Matmul(hidden, params.w1));
}

ForwardSlots RecordForward(Tape& tape, const SparseAdjacency& a_norm, Slot x, Slot w0,
                           Slot w1) {
  if (tape.value(x).rows() != a_norm.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "features do not match graph");
  }
  ForwardSlots slots;
  slots.hidden = tape.Relu(tape.Spmm(a_norm, tape.Matmul(x, w0)));
  slots.logits = tape.Spmm(a_norm, tape.Matmul(slots.hidden, w1));
  return slots;
}

double NodeEnergy(const DenseMatrix& logits, std::size_t i) {
  if (i >= logits.rows()) {
    throw Error(ErrorCode::kIndexOutOfRange, "node " + std::to_string(i));
  }
  return -LogSumExp(logits.row(i));
}

double GraphEnergy(const DenseMatrix& logits) {
  if (logits.empty()) throw Error(ErrorCode::kDimensionMismatch, "empty logits");
  return LogSumExp(logits.data());
}

EnergyReport Energies(const DenseMatrix& logits) {
  return {RowLogSumExp(logits), GraphEnergy(logits)};
}

double ClassificationLoss(const DenseMatrix& logits, std::span<const int> labels,
                          std::span<const std::size_t> train_mask) {
  return MaskedCrossEntropy(logits, labels, train_mask);
}

double GenerativeLoss(const DenseMatrix& logits_orig, const DenseMatrix& logits_gen,
                      std::span<const std::size_t> sample_set, double z_clf, double z_gen) {
  if (std::abs(z_clf) < kMinNormalizer || std::abs(z_gen) < kMinNormalizer) {
    throw Error(ErrorCode::kZeroNormalizer, "graph energy normalizer is ~0");
  }
  if (!logits_orig.SameShape(logits_gen)) {
    throw Error(ErrorCode::kDimensionMismatch, "logit shapes differ");
  }
  if (sample_set.empty()) throw Error(ErrorCode::kEmptyMask, "empty sample set");
  double total = 0.0;
  for (std::size_t i : sample_set) {
    if (i >= logits_orig.rows()) {
      throw Error(ErrorCode::kIndexOutOfRange, "sample " + std::to_string(i));
    }
    total += LogSumExp(logits_orig.row(i)) / z_clf - LogSumExp(logits_gen.row(i)) / z_gen;
  }
  return std::abs(total);
}

double OrthogonalityPenalty(const GcnParams& params) {
  double total = 0.0;
  for (const DenseMatrix* w : {&params.w0, &params.w1}) {
    DenseMatrix gram = MatmulTransA(*w, *w);
    for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
    total += FrobeniusNorm(gram);
  }
  return total;
}

double TotalLoss(double l_clf, double l_gen, double penalty, double jemo_weight) {
  const double total = l_clf + l_gen + jemo_weight * penalty;
  if (!std::isfinite(total)) {
    throw Error(ErrorCode::kNonFiniteLoss, "total loss is not finite");
  }
  return total;
}

Prediction Predict(const DenseMatrix& logits) {
  Prediction p;
  p.classes.resize(logits.rows());
  p.confidences.resize(logits.rows());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const auto row = logits.row(i);
    const auto best = std::max_element(row.begin(), row.end());
    p.classes[i] = static_cast<int>(best - row.begin());
    // max softmax = exp(max − LSE)
    p.confidences[i] = std::exp(*best - LogSumExp(row));
  }
  return p;
}

void WriteParams(std::ostream& out, const GcnParams& params) {
  ValidateParams(params);
  internal::WriteMagic(out, kParamsMagic);
  internal::WriteU64(out, params.feature_dim());
  internal::WriteU64(out, params.hidden_dim());
  internal::WriteU64(out, params.class_count());
  WriteBinary(out, params.w0);
  WriteBinary(out, params.w1);
}

GcnParams ReadParams(std::istream& in) {
  internal::ExpectMagic(in, kParamsMagic);
  const std::uint64_t f = internal::ReadU64(in);
  const std::uint64_t h = internal::ReadU64(in);
  const std::uint64_t k = internal::ReadU64(in);
  GcnParams params;
  params.w0 = ReadBinary(in);
  params.w1 = ReadBinary(in);
  if (params.w0.rows() != f || params.w0.cols() != h || params.w1.rows() != h ||
      params.w1.cols() != k) {
    throw Error(ErrorCode::kCorruptMagic, "parameter header dims disagree with matrices");
  }
  return params;
}

}  // namespace gcnjem
