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

#include "gcnjem/checkpoint.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "binary_io.hpp"
#include "gcnjem/error.hpp"

namespace gcnjem {
namespace {

constexpr std::string_view kAdjacencyMagic = "GJA1";

}  // namespace

void WriteAdjacency(std::ostream& out, const SparseAdjacency& a) {
  internal::WriteMagic(out, kAdjacencyMagic);
  internal::WriteU64(out, a.n());
  internal::WriteU64(out, a.nnz());
  for (std::size_t p : a.row_ptr()) internal::WriteU64(out, p);
  for (std::size_t c : a.col_idx()) internal::WriteU64(out, c);
  for (double v : a.values()) internal::WriteF64(out, v);
}

SparseAdjacency ReadAdjacency(std::istream& in) {
  internal::ExpectMagic(in, kAdjacencyMagic);
  const std::uint64_t n = internal::ReadU64(in);
  const std::uint64_t nnz = internal::ReadU64(in);
  constexpr std::uint64_t kLimit = std::numeric_limits<std::uint64_t>::max() / 32;
  if (n >= kLimit || nnz >= kLimit) {
    throw Error(ErrorCode::kCorruptMagic, "adjacency header sizes overflow");
  }
  internal::CheckRemaining(in, (n + 1) * 8 + nnz * 16);
  std::vector<std::size_t> row_ptr(n + 1);
  std::vector<std::size_t> col_idx(nnz);
  std::vector<double> values(nnz);
  for (auto& p : row_ptr) p = internal::ReadU64(in);
  for (auto& c : col_idx) c = internal::ReadU64(in);
  for (auto& v : values) v = internal::ReadF64(in);
  try {
    return SparseAdjacency(n, std::move(row_ptr), std::move(col_idx), std::move(values));
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruptMagic, std::string("invalid adjacency record: ") + e.what());
  }
}

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  WriteParams(out, checkpoint.params);
  WriteAdjacency(out, checkpoint.adjacency);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, path.string());
  Checkpoint checkpoint;
  checkpoint.params = ReadParams(in);
  checkpoint.adjacency = ReadAdjacency(in);
  return checkpoint;
}

void SaveEdgeList(const std::filesystem::path& path, const SparseAdjacency& a) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (const auto& [i, j] : a.UpperEdges()) out << i << ',' << j << '\n';
}

SparseAdjacency LoadEdgeList(const std::filesystem::path& path, std::size_t node_count) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, path.string());
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t i = 0;
    std::size_t j = 0;
    char comma = 0;
    std::string rest;
    std::istringstream fields(line);
    if (!(fields >> i >> comma >> j) || comma != ',' || (fields >> rest)) {
      throw Error(ErrorCode::kParseError, path.filename().string() + ":" + std::to_string(line_no));
    }
    if (i != j) edges.emplace_back(i, j);
  }
  return SparseAdjacency::FromEdges(node_count, edges);
}

}  // namespace gcnjem
