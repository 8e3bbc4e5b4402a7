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

#include "gcnjem/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

#include "gcnjem/error.hpp"

namespace gcnjem {
namespace {

namespace fs = std::filesystem;

std::ifstream OpenInput(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, path.string());
  return in;
}

std::ofstream OpenOutput(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

// Non-empty lines with CR stripped.
std::vector<std::string> ReadLines(const fs::path& path) {
  std::ifstream in = OpenInput(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

long long ParseInt(const std::string& text, const fs::path& file, std::size_t line) {
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw Error(ErrorCode::kParseError, file.filename().string() + ":" +
                                            std::to_string(line + 1) + ": '" + text + "'");
  }
  return v;
}

std::string Trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  const auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) return {};
  return s.substr(first, last - first + 1);
}

}  // namespace

void ValidateDataset(const Dataset& d) {
  const std::size_t n = d.adjacency.n();
  if (!d.adjacency.is_symmetric()) throw Error(ErrorCode::kNotSymmetric, "dataset adjacency");
  if (d.adjacency.HasSelfLoop()) throw Error(ErrorCode::kExistingSelfLoop, "dataset adjacency");
  if (d.features.rows() != n || d.labels.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "node count mismatch between edges, features and labels");
  }
  std::vector<int> owner(n, -1);
  int which = 0;
  for (const auto* mask : {&d.train_mask, &d.val_mask, &d.test_mask}) {
    for (std::size_t i : *mask) {
      if (i >= n) throw Error(ErrorCode::kIndexOutOfRange, "mask node " + std::to_string(i));
      if (owner[i] != -1) {
        throw Error(ErrorCode::kInvalidConfig, "node " + std::to_string(i) + " in two masks");
      }
      owner[i] = which;
      if (d.labels[i] < 0 || static_cast<std::size_t>(d.labels[i]) >= d.class_count) {
        throw Error(ErrorCode::kLabelOutOfRange, "masked node " + std::to_string(i));
      }
    }
    ++which;
  }
}

Dataset LoadDataset(const fs::path& dir, const LoadOptions& options) {
  const fs::path features_path = dir / "features.csv";
  Dataset d;
  {
    std::ifstream in = OpenInput(features_path);
    d.features = ReadCsv(in);
  }
  const std::size_t n = d.features.rows();

  const auto label_lines = ReadLines(dir / "labels.csv");
  if (label_lines.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "labels.csv has " + std::to_string(label_lines.size()) + " rows, features " +
                    std::to_string(n));
  }
  int max_label = -1;
  d.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long long y = ParseInt(Trim(label_lines[i]), "labels.csv", i);
    if (y < kUnlabeled) {
      throw Error(ErrorCode::kLabelOutOfRange, "labels.csv:" + std::to_string(i + 1));
    }
    d.labels[i] = static_cast<int>(y);
    max_label = std::max(max_label, d.labels[i]);
  }
  d.class_count = static_cast<std::size_t>(max_label + 1);

  const auto split_lines = ReadLines(dir / "split.csv");
  if (split_lines.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "split.csv row count differs from features");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string s = Trim(split_lines[i]);
    if (s == "train") {
      d.train_mask.push_back(i);
    } else if (s == "val") {
      d.val_mask.push_back(i);
    } else if (s == "test") {
      d.test_mask.push_back(i);
    } else if (s != "none") {
      throw Error(ErrorCode::kParseError, "split.csv:" + std::to_string(i + 1) + ": '" + s + "'");
    }
  }

  std::vector<Edge> edges;
  const auto edge_lines = ReadLines(dir / "edges.csv");
  for (std::size_t line = 0; line < edge_lines.size(); ++line) {
    const std::string& text = edge_lines[line];
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kParseError, "edges.csv:" + std::to_string(line + 1));
    }
    const long long src = ParseInt(Trim(text.substr(0, comma)), "edges.csv", line);
    const long long dst = ParseInt(Trim(text.substr(comma + 1)), "edges.csv", line);
    if (src < 0 || dst < 0 || static_cast<std::size_t>(src) >= n ||
        static_cast<std::size_t>(dst) >= n) {
      throw Error(ErrorCode::kIndexOutOfRange, "edges.csv:" + std::to_string(line + 1));
    }
    if (src == dst) continue;
    edges.emplace_back(static_cast<std::size_t>(src), static_cast<std::size_t>(dst));
  }
  d.adjacency = SparseAdjacency::FromEdges(n, edges);

  if (options.row_normalize_features) RowNormalize(d.features);
  ValidateDataset(d);
  return d;
}

void SaveDataset(const fs::path& dir, const Dataset& d) {
  ValidateDataset(d);
  fs::create_directories(dir);
  {
    std::ofstream out = OpenOutput(dir / "edges.csv");
    for (const auto& [i, j] : d.adjacency.UpperEdges()) out << i << ',' << j << '\n';
  }
  {
    std::ofstream out = OpenOutput(dir / "features.csv");
    WriteCsv(out, d.features);
  }
  {
    std::ofstream out = OpenOutput(dir / "labels.csv");
    for (int y : d.labels) out << y << '\n';
  }
  std::vector<const char*> split(d.node_count(), "none");
  for (std::size_t i : d.train_mask) split[i] = "train";
  for (std::size_t i : d.val_mask) split[i] = "val";
  for (std::size_t i : d.test_mask) split[i] = "test";
  std::ofstream out = OpenOutput(dir / "split.csv");
  for (const char* s : split) out << s << '\n';
}

void RowNormalize(DenseMatrix& features) {
  for (std::size_t i = 0; i < features.rows(); ++i) {
    auto row = features.row(i);
    double sum = 0.0;
    for (double v : row) sum += v;
    if (sum == 0.0) continue;
    for (double& v : row) v /= sum;
  }
}

void SbmSpec::Validate() const {
  if (blocks.empty()) throw Error(ErrorCode::kInvalidConfig, "SBM needs at least one block");
  for (const auto& b : blocks) {
    if (b.size == 0) throw Error(ErrorCode::kInvalidConfig, "SBM block size must be >= 1");
    if (b.label < 0) throw Error(ErrorCode::kInvalidConfig, "SBM block label must be >= 0");
  }
  if (!(0.0 <= p_out && p_out <= p_in && p_in <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "SBM needs 0 <= p_out <= p_in <= 1");
  }
  if (feature_dim == 0) throw Error(ErrorCode::kInvalidConfig, "SBM feature_dim must be >= 1");
  if (!(noise_scale >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "SBM noise_scale < 0");
}

Dataset GenerateSbm(const SbmSpec& spec) {
  spec.Validate();
  std::mt19937_64 rng(spec.seed);

  std::vector<int> labels;
  for (const auto& b : spec.blocks) labels.insert(labels.end(), b.size, b.label);
  const std::size_t n = labels.size();
  std::vector<std::size_t> block_of;
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    block_of.insert(block_of.end(), spec.blocks[b].size, b);
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = block_of[i] == block_of[j] ? spec.p_in : spec.p_out;
      if (unit(rng) < p) edges.emplace_back(i, j);
    }
  }

  Dataset d;
  d.adjacency = SparseAdjacency::FromEdges(n, edges);
  d.labels = labels;
  d.class_count = static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end()) + 1);

  std::normal_distribution<double> noise(0.0, 1.0);
  d.features = DenseMatrix(n, spec.feature_dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < spec.feature_dim; ++j) {
      const double onehot =
          (j % d.class_count) == static_cast<std::size_t>(labels[i]) ? 1.0 : 0.0;
      d.features(i, j) = onehot + spec.noise_scale * noise(rng);
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto train_count = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.1 * n)));
  const auto val_count = std::min(n - train_count, static_cast<std::size_t>(std::lround(0.1 * n)));
  d.train_mask.assign(order.begin(), order.begin() + train_count);
  d.val_mask.assign(order.begin() + train_count, order.begin() + train_count + val_count);
  d.test_mask.assign(order.begin() + train_count + val_count, order.end());
  for (auto* mask : {&d.train_mask, &d.val_mask, &d.test_mask}) {
    std::sort(mask->begin(), mask->end());
  }
  ValidateDataset(d);
  return d;
}

SbmSpec ToySbmSpec(std::uint64_t seed) {
  SbmSpec spec;
  spec.blocks = {{20, 0}, {20, 1}, {20, 2}};
  spec.p_in = 0.3;
  spec.p_out = 0.02;
  spec.feature_dim = 8;
  spec.noise_scale = 1.0;
  spec.seed = seed;
  return spec;
}

}  // namespace gcnjem
