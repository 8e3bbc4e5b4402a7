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

#include "gcnjem/train_config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "gcnjem/error.hpp"
#include "gcnjem/gcn_model.hpp"

namespace gcnjem {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Error Bad(std::string_view key, std::string_view value, std::string_view why) {
  return Error(ErrorCode::kInvalidConfig,
               std::string(key) + "=" + std::string(value) + ": " + std::string(why));
}

double ParseReal(std::string_view key, std::string_view value) {
  const std::string text(value);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw Bad(key, value, "expected a finite real");
  }
  return v;
}

std::uint64_t ParseCount(std::string_view key, std::string_view value) {
  const std::string text(value);
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw Bad(key, value, "expected a non-negative integer");
  }
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (errno != 0) throw Bad(key, value, "out of range");
  return v;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void SgldConfig::Validate() const {
  // α = 0 is allowed and leaves the chain driven by noise alone.
  if (!(step_size >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "step_size must be >= 0");
  if (!(noise_scale >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "noise_scale must be >= 0");
  if (steps < 1) throw Error(ErrorCode::kInvalidConfig, "steps must be >= 1");
  if (!(reinit_prob >= 0.0 && reinit_prob <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "reinit_prob must lie in [0, 1]");
  }
}

std::optional<TrainMode> ParseTrainMode(std::string_view text) {
  if (text == "gcn") return TrainMode::kGcn;
  if (text == "jem") return TrainMode::kJem;
  if (text == "jemo") return TrainMode::kJemo;
  return std::nullopt;
}

std::string_view TrainModeName(TrainMode mode) {
  switch (mode) {
    case TrainMode::kGcn: return "gcn";
    case TrainMode::kJem: return "jem";
    case TrainMode::kJemo: return "jemo";
  }
  return "?";
}

double TrainConfig::EffectiveJemoWeight() const {
  if (jemo_weight) return *jemo_weight;
  return mode == TrainMode::kJemo ? kDefaultJemoWeight : 0.0;
}

void TrainConfig::Validate() const {
  if (epochs < 1 || batch_size < 1 || edge_update_interval < 1 || buffer_capacity < 1 ||
      hidden_dim < 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "epochs, batch_size, edge_update_interval, buffer_capacity and hidden_dim "
                "must be >= 1");
  }
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::kInvalidConfig, "learning_rate must be > 0");
  if (energy_threshold && !(*energy_threshold >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "energy_threshold must be >= 0");
  }
  const double jemo = EffectiveJemoWeight();
  if (!(jemo >= 0.0) || !std::isfinite(jemo)) {
    throw Error(ErrorCode::kInvalidConfig, "jemo_weight must be finite and >= 0");
  }
  sgld.Validate();
}

void ApplySetting(TrainConfig& c, std::string_view key, std::string_view value) {
  key = Trim(key);
  value = Trim(value);
  if (key == "mode") {
    const auto mode = ParseTrainMode(value);
    if (!mode) throw Bad(key, value, "expected gcn, jem or jemo");
    c.mode = *mode;
  } else if (key == "epochs") {
    c.epochs = ParseCount(key, value);
  } else if (key == "learning_rate") {
    c.learning_rate = ParseReal(key, value);
  } else if (key == "batch_size") {
    c.batch_size = ParseCount(key, value);
  } else if (key == "energy_threshold") {
    if (value == "auto") {
      c.energy_threshold.reset();
    } else {
      c.energy_threshold = ParseReal(key, value);
    }
  } else if (key == "edge_update_interval") {
    c.edge_update_interval = ParseCount(key, value);
  } else if (key == "buffer_capacity") {
    c.buffer_capacity = ParseCount(key, value);
  } else if (key == "seed") {
    c.seed = ParseCount(key, value);
  } else if (key == "jemo_weight") {
    c.jemo_weight = ParseReal(key, value);
  } else if (key == "hidden_dim") {
    c.hidden_dim = ParseCount(key, value);
  } else if (key == "step_size") {
    c.sgld.step_size = ParseReal(key, value);
  } else if (key == "noise_scale") {
    c.sgld.noise_scale = ParseReal(key, value);
  } else if (key == "steps") {
    c.sgld.steps = ParseCount(key, value);
  } else if (key == "reinit_prob") {
    c.sgld.reinit_prob = ParseReal(key, value);
  } else {
    throw Bad(key, value, "unknown key");
  }
}

void ApplySetting(TrainConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidConfig, "expected key=value, got '" +
                                               std::string(assignment) + "'");
  }
  ApplySetting(config, assignment.substr(0, eq), assignment.substr(eq + 1));
}

void ParseConfig(std::istream& in, TrainConfig& config) {
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = Trim(view);
    if (view.empty()) continue;
    ApplySetting(config, view);
  }
}

void LoadConfigFile(const std::filesystem::path& path, TrainConfig& config) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot read config " + path.string());
  ParseConfig(in, config);
}

void WriteConfig(std::ostream& out, const TrainConfig& c) {
  out << "mode=" << TrainModeName(c.mode) << '\n'
      << "epochs=" << c.epochs << '\n'
      << "learning_rate=" << FormatDouble(c.learning_rate) << '\n'
      << "batch_size=" << c.batch_size << '\n'
      << "energy_threshold="
      << (c.energy_threshold ? FormatDouble(*c.energy_threshold) : std::string("auto")) << '\n'
      << "edge_update_interval=" << c.edge_update_interval << '\n'
      << "buffer_capacity=" << c.buffer_capacity << '\n'
      << "seed=" << c.seed << '\n'
      << "jemo_weight=" << FormatDouble(c.EffectiveJemoWeight()) << '\n'
      << "hidden_dim=" << c.hidden_dim << '\n'
      << "step_size=" << FormatDouble(c.sgld.step_size) << '\n'
      << "noise_scale=" << FormatDouble(c.sgld.noise_scale) << '\n'
      << "steps=" << c.sgld.steps << '\n'
      << "reinit_prob=" << FormatDouble(c.sgld.reinit_prob) << '\n';
}

}  // namespace gcnjem
