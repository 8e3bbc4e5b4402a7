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

#ifndef GCNJEM_GCN_MODEL_HPP_
#define GCNJEM_GCN_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "gcnjem/dense_matrix.hpp"
#include "gcnjem/sparse_adjacency.hpp"
#include "gcnjem/tape.hpp"

namespace gcnjem {

inline constexpr std::size_t kDefaultHiddenDim = 16;
inline constexpr double kDefaultJemoWeight = 1e-3;

struct ModelConfig {
  std::size_t feature_dim = 1;
  std::size_t hidden_dim = kDefaultHiddenDim;
  std::size_t class_count = 1;
  // Coefficient of the orthogonality penalty; 0 disables it.
  double jemo_weight = 0.0;

  void Validate() const;
};

// θ = {W0 (f×h), W1 (h×k)}.
struct GcnParams {
  DenseMatrix w0;
  DenseMatrix w1;

  std::size_t feature_dim() const { return w0.rows(); }
  std::size_t hidden_dim() const { return w0.cols(); }
  std::size_t class_count() const { return w1.cols(); }

  friend bool operator==(const GcnParams&, const GcnParams&) = default;
};

// Glorot-uniform initialization.
GcnParams InitParams(const ModelConfig& config, std::mt19937_64& rng);

// Checks w0.cols == w1.rows and finiteness.
void ValidateParams(const GcnParams& params);

// logits = Â relu(Â X W0) W1, with Â already normalized.
DenseMatrix Forward(const SparseAdjacency& a_norm, const DenseMatrix& x,
                    const GcnParams& params);

// Slots of a forward pass recorded on a tape.
struct ForwardSlots {
  Slot hidden = 0;
  Slot logits = 0;
};

// Records the same computation as Forward; x, w0, w1 are existing slots.
ForwardSlots RecordForward(Tape& tape, const SparseAdjacency& a_norm, Slot x, Slot w0, Slot w1);

// −LSE of row i.
double NodeEnergy(const DenseMatrix& logits, std::size_t i);

struct EnergyReport {
  DenseMatrix per_node_lse;  // n×1
  double graph_lse = 0.0;    // LSE over all n·k entries
};

// LSE over every logit entry: the scalar whole-graph normalizer.
double GraphEnergy(const DenseMatrix& logits);
EnergyReport Energies(const DenseMatrix& logits);

double ClassificationLoss(const DenseMatrix& logits, std::span<const int> labels,
                          std::span<const std::size_t> train_mask);

// |Σ_{i∈S} lse_orig[i]/z_clf − lse_gen[i]/z_gen| where lse_* are per-node
// LSE values of the two logit matrices.
double GenerativeLoss(const DenseMatrix& logits_orig, const DenseMatrix& logits_gen,
                      std::span<const std::size_t> sample_set, double z_clf, double z_gen);

// Σ_layers ‖WᵀW − I‖_F.
double OrthogonalityPenalty(const GcnParams& params);

double TotalLoss(double l_clf, double l_gen, double penalty, double jemo_weight);

struct Prediction {
  std::vector<int> classes;
  std::vector<double> confidences;
};

// Argmax (lowest index on ties) and max softmax probability per node.
Prediction Predict(const DenseMatrix& logits);

// Binary checkpoint: magic "GJP1", u64 f, h, k, then w0 and w1 as matrix
// records.
void WriteParams(std::ostream& out, const GcnParams& params);
GcnParams ReadParams(std::istream& in);

}  // namespace gcnjem

#endif  // GCNJEM_GCN_MODEL_HPP_
