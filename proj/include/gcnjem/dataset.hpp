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

#ifndef GCNJEM_DATASET_HPP_
#define GCNJEM_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "gcnjem/dense_matrix.hpp"
#include "gcnjem/sparse_adjacency.hpp"

namespace gcnjem {

inline constexpr int kUnlabeled = -1;

// Transductive node-classification dataset over one fixed graph.
struct Dataset {
  SparseAdjacency adjacency;  // symmetric, loop-free, deduplicated
  DenseMatrix features;       // n×f
  std::vector<int> labels;    // kUnlabeled for unlabeled nodes
  std::vector<std::size_t> train_mask;
  std::vector<std::size_t> val_mask;
  std::vector<std::size_t> test_mask;
  std::size_t class_count = 0;

  std::size_t node_count() const { return adjacency.n(); }
  std::size_t feature_dim() const { return features.cols(); }
};

// Throws on any violated Dataset invariant.
void ValidateDataset(const Dataset& dataset);

struct LoadOptions {
  bool row_normalize_features = false;
};

// Reads edges.csv, features.csv, labels.csv and split.csv from `dir` (no
// headers, LF line endings). Edges are symmetrized and deduplicated;
// self-loops in edges.csv are dropped.
Dataset LoadDataset(const std::filesystem::path& dir, const LoadOptions& options = {});

// Writes the canonical form: edges as sorted (i<j) pairs.
void SaveDataset(const std::filesystem::path& dir, const Dataset& dataset);

// Scales each nonzero feature row to sum 1.
void RowNormalize(DenseMatrix& features);

struct SbmBlock {
  std::size_t size = 1;
  int label = 0;
};

struct SbmSpec {
  std::vector<SbmBlock> blocks;
  double p_in = 0.5;
  double p_out = 0.05;
  std::size_t feature_dim = 8;
  double noise_scale = 0.5;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Stochastic block model: one-hot(label) tiled to width f plus Gaussian
// noise; 10% / 10% / 80% train/val/test by seeded shuffle.
Dataset GenerateSbm(const SbmSpec& spec);

// The small built-in graph used for smoke runs (`--dataset sbm_toy`).
SbmSpec ToySbmSpec(std::uint64_t seed = 0);

}  // namespace gcnjem

#endif  // GCNJEM_DATASET_HPP_
