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

#ifndef GCNJEM_TRAIN_CONFIG_HPP_
#define GCNJEM_TRAIN_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace gcnjem {

// SGLD sampler settings: step size α, noise σ, chain length η and buffer
// reinitialization probability ρ.
struct SgldConfig {
  double step_size = 1.0;
  double noise_scale = 0.01;
  std::size_t steps = 20;
  double reinit_prob = 0.05;

  void Validate() const;
};

enum class TrainMode {
  kGcn,   // plain classifier: no sampler, no generative loss, no new edges
  kJem,   // joint energy training with edge generation
  kJemo,  // kJem plus the orthogonality penalty
};

std::optional<TrainMode> ParseTrainMode(std::string_view text);
std::string_view TrainModeName(TrainMode mode);

inline constexpr double kRelativeThresholdFraction = 0.01;

struct TrainConfig {
  TrainMode mode = TrainMode::kJem;
  std::size_t epochs = 500;
  double learning_rate = 0.01;
  std::size_t batch_size = 32;
  // Absolute τ. When unset, τ = kRelativeThresholdFraction × (max − min) of
  // the first epoch's sampled per-node LSE values.
  std::optional<double> energy_threshold;
  std::size_t edge_update_interval = 50;
  std::size_t buffer_capacity = 10000;
  std::uint64_t seed = 0;
  // Unset means 1e-3 in kJemo mode and 0 otherwise.
  std::optional<double> jemo_weight;
  std::size_t hidden_dim = 16;
  SgldConfig sgld;

  double EffectiveJemoWeight() const;
  bool generative() const { return mode != TrainMode::kGcn; }
  void Validate() const;
};

// Applies one `key=value` setting; keys are the TrainConfig / SgldConfig
// field names plus `mode`. Throws InvalidConfig for unknown keys or bad
// values.
void ApplySetting(TrainConfig& config, std::string_view key, std::string_view value);
// Accepts the `key=value` form.
void ApplySetting(TrainConfig& config, std::string_view assignment);

// Flat key=value text, one pair per line, `#` starts a comment.
void ParseConfig(std::istream& in, TrainConfig& config);
void LoadConfigFile(const std::filesystem::path& path, TrainConfig& config);

void WriteConfig(std::ostream& out, const TrainConfig& config);

}  // namespace gcnjem

#endif  // GCNJEM_TRAIN_CONFIG_HPP_
