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

#ifndef GCNJEM_CHECKPOINT_HPP_
#define GCNJEM_CHECKPOINT_HPP_

#include <filesystem>
#include <iosfwd>

#include "gcnjem/gcn_model.hpp"
#include "gcnjem/sparse_adjacency.hpp"

namespace gcnjem {

struct Checkpoint {
  GcnParams params;
  SparseAdjacency adjacency;  // the generative Ã (without self-loops)

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

// Adjacency record: magic "GJA1", u64 n, u64 nnz, then row_ptr (n+1 u64),
// col_idx (nnz u64) and values (nnz f64), all little-endian.
void WriteAdjacency(std::ostream& out, const SparseAdjacency& a);
SparseAdjacency ReadAdjacency(std::istream& in);

// Parameter record followed by adjacency record. Loading either returns a
// complete checkpoint or throws CorruptMagic / TruncatedFile.
void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

// `i,j` per line for every undirected edge with i < j.
void SaveEdgeList(const std::filesystem::path& path, const SparseAdjacency& a);
SparseAdjacency LoadEdgeList(const std::filesystem::path& path, std::size_t node_count);

}  // namespace gcnjem

#endif  // GCNJEM_CHECKPOINT_HPP_
