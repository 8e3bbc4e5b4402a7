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

#ifndef GCNJEM_JEM_TRAINER_HPP_
#define GCNJEM_JEM_TRAINER_HPP_

#include <cstddef>
#include <deque>
#include <iosfwd>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "gcnjem/dataset.hpp"
#include "gcnjem/dense_matrix.hpp"
#include "gcnjem/gcn_model.hpp"
#include "gcnjem/sparse_adjacency.hpp"
#include "gcnjem/train_config.hpp"

namespace gcnjem {

// FIFO store of generated feature vectors.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t feature_dim);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t feature_dim() const noexcept { return feature_dim_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<double>& at(std::size_t i) const { return entries_.at(i); }

  // Evicts the oldest entry once full. Rejects wrong lengths and non-finite
  // entries.
  void Push(std::vector<double> features);

 private:
  std::size_t capacity_;
  std::size_t feature_dim_;
  std::deque<std::vector<double>> entries_;
};

// Starting point of one chain: a copy of a uniformly chosen buffer entry
// with probability 1 − reinit_prob, otherwise (or when the buffer is empty)
// i.i.d. Uniform(−1, 1).
std::vector<double> InitSample(const ReplayBuffer& buffer, double reinit_prob,
                               std::size_t feature_dim, std::mt19937_64& rng);

// Nodes chosen this epoch and their current generated features (one row
// per node, in `nodes` order).
struct SampleSet {
  std::vector<std::size_t> nodes;
  DenseMatrix features;
};

// ζ distinct nodes drawn uniformly without replacement (min(ζ, n) if ζ > n).
std::vector<std::size_t> DrawSampleNodes(std::size_t node_count, std::size_t batch_size,
                                         std::mt19937_64& rng);

// Runs cfg.steps Langevin updates on the rows of `x_hat` listed in `sample`:
//   x̂_i ← x̂_i + α ∂(Σ_{j∈S} LSE_j / Z_t)/∂x̂_i + σ ξ,  ξ ~ N(0, I)
// where Z_t is the whole-graph LSE of the current logits, held constant
// within the step. `x_hat` must already contain the sample rows; they are
// rewritten after every step. A sample whose update turns non-finite is
// reinitialized Uniform(−1, 1) and frozen for the rest of the chain.
SampleSet SgldChain(const SparseAdjacency& a_norm, DenseMatrix& x_hat, SampleSet sample,
                    const GcnParams& params, const SgldConfig& cfg, std::mt19937_64& rng);

// Every pair {nodes[a], nodes[b]}, a < b, with |lse[a] − lse[b]| ≤ τ, as
// (min, max) node pairs in sorted order. Pairs naming the same node twice
// are skipped.
std::vector<Edge> GenerateEdges(std::span<const double> lse, std::span<const std::size_t> nodes,
                                double tau);

struct AdamState {
  DenseMatrix m0, v0, m1, v1;
  std::size_t step = 0;
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  explicit AdamState(const GcnParams& params);
};

// One bias-corrected Adam update of both weight matrices.
void AdamStep(GcnParams& params, const GcnParams& grads, AdamState& state, double lr);

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double l_clf = 0.0;
  double l_gen = 0.0;
  double penalty = 0.0;
  double total = 0.0;
  double z_clf = 0.0;
  double z_gen = 0.0;
  std::size_t edges_added = 0;
  double train_acc = 0.0;
  double val_acc = 0.0;

  friend bool operator==(const EpochLog&, const EpochLog&) = default;
};

// Header `epoch,l_clf,l_gen,penalty,total,z_clf,z_gen,edges_added,train_acc,val_acc`.
void WriteEpochLogHeader(std::ostream& out);
void WriteEpochLogRow(std::ostream& out, const EpochLog& log);

struct TrainResult {
  GcnParams params;
  SparseAdjacency generative_adjacency;  // Ã, no self-loops
  DenseMatrix generated_features;        // X̂
  std::vector<EpochLog> logs;
  std::optional<double> energy_threshold;
};

// Owns the whole training state; TrainEpoch() performs one outer iteration.
class JemTrainer {
 public:
  JemTrainer(const Dataset& dataset, TrainConfig config);

  EpochLog TrainEpoch();
  TrainResult Run();

  const GcnParams& params() const noexcept { return params_; }
  const SparseAdjacency& adjacency() const noexcept { return adjacency_; }
  const SparseAdjacency& normalized_adjacency() const noexcept { return a_norm_; }
  const ReplayBuffer& buffer() const noexcept { return buffer_; }
  const DenseMatrix& generated_features() const noexcept { return x_generated_; }
  const std::set<Edge>& pending_edges() const noexcept { return pending_edges_; }
  // Edges proposed during the most recent epoch.
  const std::vector<Edge>& last_candidates() const noexcept { return last_candidates_; }
  // Nodes and final per-node LSE values of the most recent epoch's sample.
  const std::vector<std::size_t>& last_sample_nodes() const noexcept { return last_nodes_; }
  const std::vector<double>& last_sample_lse() const noexcept { return last_lse_; }
  std::optional<double> energy_threshold() const noexcept { return tau_; }
  std::size_t epochs_done() const noexcept { return epoch_; }
  const TrainConfig& config() const noexcept { return config_; }
  TrainResult Snapshot() const;

 private:
  void Renormalize();

  const Dataset& dataset_;
  TrainConfig config_;
  double jemo_weight_;
  std::mt19937_64 rng_;
  GcnParams params_;
  AdamState adam_;
  SparseAdjacency adjacency_;
  SparseAdjacency a_norm_;
  ReplayBuffer buffer_;
  DenseMatrix x_generated_;
  std::set<Edge> pending_edges_;
  std::vector<Edge> last_candidates_;
  std::vector<std::size_t> last_nodes_;
  std::vector<double> last_lse_;
  std::optional<double> tau_;
  std::vector<EpochLog> logs_;
  std::size_t epoch_ = 0;
};

TrainResult Train(const Dataset& dataset, const TrainConfig& config);

// Logits of the classifier on `adjacency` (self-loops added and
// normalized here).
DenseMatrix Evaluate(const SparseAdjacency& adjacency, const DenseMatrix& features,
                     const GcnParams& params);

}  // namespace gcnjem

#endif  // GCNJEM_JEM_TRAINER_HPP_
