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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <set>
#include <string>
#include <vector>

#include "gcnjem/checkpoint.hpp"
#include "gcnjem/dataset.hpp"
#include "gcnjem/error.hpp"
#include "gcnjem/gcn_model.hpp"
#include "gtest/gtest.h"
#include "oracles.hpp"
#include "test_util.hpp"

namespace gcnjem {
namespace {

namespace fs = std::filesystem;
using testing::CodeOf;
using testing::ReadFile;
using testing::TempDir;
using testing::RandomMatrix;
using testing::WriteFile;

void WriteToy(const fs::path& dir, const std::string& edges) {
  WriteFile(dir / "edges.csv", edges);
  WriteFile(dir / "features.csv", "1,0\n0,1\n");
  WriteFile(dir / "labels.csv", "0\n1\n");
  WriteFile(dir / "split.csv", "train\ntest\n");
}

TEST(LoadDataset, TwoNodeToy) {
  TempDir tmp;
  WriteToy(tmp.path(), "0,1\n");
  const Dataset d = LoadDataset(tmp.path());
  EXPECT_EQ(d.node_count(), 2u);
  EXPECT_EQ(d.feature_dim(), 2u);
  EXPECT_EQ(d.class_count, 2u);
  EXPECT_TRUE(d.adjacency.Contains(0, 1));
  EXPECT_TRUE(d.adjacency.Contains(1, 0));
  EXPECT_EQ(d.adjacency.nnz(), 2u);
  EXPECT_EQ(d.train_mask, std::vector<std::size_t>{0});
  EXPECT_EQ(d.test_mask, std::vector<std::size_t>{1});
  EXPECT_TRUE(d.val_mask.empty());
}

TEST(LoadDataset, DuplicateAndReversedEdgesCollapse) {
  TempDir tmp;
  WriteToy(tmp.path(), "0,1\n0,1\n1,0\n1,1\n");
  const Dataset d = LoadDataset(tmp.path());
  EXPECT_EQ(d.adjacency.UndirectedEdgeCount(), 1u);
  EXPECT_FALSE(d.adjacency.HasSelfLoop());
  EXPECT_TRUE(d.adjacency.is_symmetric());
}

TEST(LoadDataset, Errors) {
  TempDir tmp;
  EXPECT_EQ(CodeOf([&] { LoadDataset(tmp.path()); }), ErrorCode::kMissingFile);
  WriteToy(tmp.path(), "0,1\n");
  WriteFile(tmp.path() / "features.csv", "1,0\n0\n");
  EXPECT_EQ(CodeOf([&] { LoadDataset(tmp.path()); }), ErrorCode::kRaggedFeatureRows);
  WriteToy(tmp.path(), "0,5\n");
  EXPECT_EQ(CodeOf([&] { LoadDataset(tmp.path()); }), ErrorCode::kIndexOutOfRange);
  WriteToy(tmp.path(), "0,1\n");
  WriteFile(tmp.path() / "labels.csv", "0\n-3\n");
  EXPECT_EQ(CodeOf([&] { LoadDataset(tmp.path()); }), ErrorCode::kLabelOutOfRange);
  WriteToy(tmp.path(), "0,1\n");
  WriteFile(tmp.path() / "labels.csv", "0\n-1\n");  // unlabeled node in the test split
  EXPECT_EQ(CodeOf([&] { LoadDataset(tmp.path()); }), ErrorCode::kLabelOutOfRange);
  WriteToy(tmp.path(), "0,1\n");
  WriteFile(tmp.path() / "split.csv", "train\nholdout\n");
  EXPECT_EQ(CodeOf([&] { LoadDataset(tmp.path()); }), ErrorCode::kParseError);
}

TEST(LoadDataset, RowNormalizeOption) {
  TempDir tmp;
  WriteToy(tmp.path(), "0,1\n");
  WriteFile(tmp.path() / "features.csv", "1,3\n0,0\n");
  const Dataset d = LoadDataset(tmp.path(), {.row_normalize_features = true});
  EXPECT_EQ(d.features, (DenseMatrix{{0.25, 0.75}, {0.0, 0.0}}));
  EXPECT_EQ(LoadDataset(tmp.path()).features, (DenseMatrix{{1.0, 3.0}, {0.0, 0.0}}));
}

TEST(SaveDataset, LoadSaveIsIdempotent) {
  const Dataset d = GenerateSbm(ToySbmSpec(3));
  TempDir a, b;
  SaveDataset(a.path(), d);
  const Dataset loaded = LoadDataset(a.path());
  SaveDataset(b.path(), loaded);
  for (const char* name : {"edges.csv", "features.csv", "labels.csv", "split.csv"}) {
    EXPECT_EQ(ReadFile(a.path() / name), ReadFile(b.path() / name)) << name;
  }
  EXPECT_TRUE(loaded.adjacency.SamePattern(d.adjacency));
  EXPECT_EQ(loaded.features, d.features);
  EXPECT_EQ(loaded.labels, d.labels);
  EXPECT_EQ(loaded.train_mask, d.train_mask);
  EXPECT_EQ(loaded.val_mask, d.val_mask);
  EXPECT_EQ(loaded.test_mask, d.test_mask);
  const std::string edges = ReadFile(a.path() / "edges.csv");
  std::vector<Edge> listed;
  std::istringstream in(edges);
  for (std::string line; std::getline(in, line);) {
    const auto comma = line.find(',');
    listed.emplace_back(std::stoul(line.substr(0, comma)), std::stoul(line.substr(comma + 1)));
  }
  EXPECT_TRUE(std::is_sorted(listed.begin(), listed.end()));
  for (const Edge& e : listed) EXPECT_LT(e.first, e.second);
}

TEST(GenerateSbm, DeterministicExtremes) {
  SbmSpec spec{.blocks = {{3, 0}, {3, 1}}, .p_in = 1.0, .p_out = 0.0, .feature_dim = 4};
  const Dataset d = GenerateSbm(spec);
  EXPECT_EQ(d.adjacency.UpperEdges(),
            (std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}}));
  EXPECT_EQ(d.labels, (std::vector<int>{0, 0, 0, 1, 1, 1}));
  spec.p_in = 0.0;
  EXPECT_EQ(GenerateSbm(spec).adjacency.UndirectedEdgeCount(), 0u);
}

TEST(GenerateSbm, WithinBlockFrequency) {
  std::size_t edges = 0, pairs = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    SbmSpec spec{.blocks = {{10, 0}}, .p_in = 0.5, .p_out = 0.0, .feature_dim = 2, .seed = seed};
    edges += GenerateSbm(spec).adjacency.UndirectedEdgeCount();
    pairs += 45;
  }
  const double freq = static_cast<double>(edges) / static_cast<double>(pairs);
  EXPECT_GE(freq, 0.45);
  EXPECT_LE(freq, 0.55);
}

TEST(GenerateSbm, DeterministicPerSeedAndDisjointMasks) {
  const Dataset a = GenerateSbm(ToySbmSpec(9));
  const Dataset b = GenerateSbm(ToySbmSpec(9));
  EXPECT_EQ(a.adjacency.UpperEdges(), b.adjacency.UpperEdges());
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.train_mask, b.train_mask);
  EXPECT_NE(GenerateSbm(ToySbmSpec(10)).features, a.features);
  std::set<std::size_t> seen;
  for (const auto* m : {&a.train_mask, &a.val_mask, &a.test_mask}) {
    for (std::size_t i : *m) EXPECT_TRUE(seen.insert(i).second) << "node " << i;
  }
  EXPECT_EQ(seen.size(), a.node_count());
  EXPECT_EQ(a.train_mask.size(), 6u);
  EXPECT_EQ(a.val_mask.size(), 6u);
  ValidateDataset(a);
}

TEST(GenerateSbm, InvalidSpec) {
  SbmSpec spec{.blocks = {{3, 0}}, .p_in = 0.1, .p_out = 0.2};
  EXPECT_EQ(CodeOf([&] { GenerateSbm(spec); }), ErrorCode::kInvalidConfig);
  spec = {.blocks = {{0, 0}}};
  EXPECT_EQ(CodeOf([&] { GenerateSbm(spec); }), ErrorCode::kInvalidConfig);
}

Checkpoint RandomCheckpoint(std::uint64_t seed) {
  return {{RandomMatrix(6, 4, seed), RandomMatrix(4, 3, seed + 1)},
          SparseAdjacency::FromEdges(9, testing::RandomEdges(9, 0.4, seed))};
}

TEST(Checkpoint, RoundTripBitIdentical) {
  TempDir tmp;
  const fs::path p = tmp.path() / "ckpt.bin";
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Checkpoint c = RandomCheckpoint(seed);
    SaveCheckpoint(p, c);
    const Checkpoint back = LoadCheckpoint(p);
    EXPECT_EQ(back, c);
    TempDir again;
    SaveCheckpoint(again.path() / "c.bin", back);
    EXPECT_EQ(ReadFile(again.path() / "c.bin"), ReadFile(p));
  }
}

TEST(Checkpoint, TruncatedAndWrongMagic) {
  TempDir tmp;
  const fs::path p = tmp.path() / "ckpt.bin";
  SaveCheckpoint(p, RandomCheckpoint(1));
  const std::string bytes = ReadFile(p);
  for (std::size_t cut : {std::size_t{2}, std::size_t{30}, bytes.size() / 2, bytes.size() - 1}) {
    WriteFile(p, bytes.substr(0, cut));
    EXPECT_EQ(CodeOf([&] { LoadCheckpoint(p); }), ErrorCode::kTruncatedFile) << cut;
  }
  std::string wrong = bytes;
  wrong[0] = 'X';
  WriteFile(p, wrong);
  EXPECT_EQ(CodeOf([&] { LoadCheckpoint(p); }), ErrorCode::kCorruptMagic);
  EXPECT_EQ(CodeOf([&] { LoadCheckpoint(tmp.path() / "absent.bin"); }), ErrorCode::kMissingFile);
}

TEST(EdgeList, RoundTrip) {
  TempDir tmp;
  const SparseAdjacency a = SparseAdjacency::FromEdges(12, testing::RandomEdges(12, 0.3, 4));
  SaveEdgeList(tmp.path() / "e.csv", a);
  EXPECT_TRUE(LoadEdgeList(tmp.path() / "e.csv", 12).SamePattern(a));
}

}  // namespace
}  // namespace gcnjem
