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

#include "gcnjem/jem_trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "gcnjem/analysis.hpp"
#include "gcnjem/error.hpp"
#include "gcnjem/tape.hpp"

namespace gcnjem {
namespace {

constexpr double kMinNormalizer = 1e-30;

std::vector<double> UniformVector(std::size_t f, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(f);
  for (double& x : v) x = dist(rng);
  return v;
}

void RequireNormalizer(double z, const char* name) {
  if (!(std::abs(z) >= kMinNormalizer) || !std::isfinite(z)) {
    throw Error(ErrorCode::kZeroNormalizer, std::string(name) + " is ~0 or non-finite");
  }
}

void AdamUpdate(DenseMatrix& w, const DenseMatrix& g, DenseMatrix& m, DenseMatrix& v,
                double lr, double bias1, double bias2) {
  if (!w.SameShape(g) || !w.SameShape(m)) {
    throw Error(ErrorCode::kDimensionMismatch, "gradient shape differs from parameter");
  }
  auto wd = w.data();
  const auto gd = g.data();
  auto md = m.data();
  auto vd = v.data();
  for (std::size_t i = 0; i < wd.size(); ++i) {
    md[i] = AdamState::kBeta1 * md[i] + (1.0 - AdamState::kBeta1) * gd[i];
    vd[i] = AdamState::kBeta2 * vd[i] + (1.0 - AdamState::kBeta2) * gd[i] * gd[i];
    const double m_hat = md[i] / bias1;
    const double v_hat = vd[i] / bias2;
    wd[i] -= lr * m_hat / (std::sqrt(v_hat) + AdamState::kEpsilon);
  }
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t feature_dim)
    : capacity_(capacity), feature_dim_(feature_dim) {
  if (capacity_ == 0) throw Error(ErrorCode::kInvalidConfig, "buffer capacity must be >= 1");
}

void ReplayBuffer::Push(std::vector<double> features) {
  if (features.size() != feature_dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "buffer entry has wrong length");
  }
  for (double v : features) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteSample, "buffer entry");
  }
  if (entries_.size() == capacity_) entries_.pop_front();
  entries_.push_back(std::move(features));
}

std::vector<double> InitSample(const ReplayBuffer& buffer, double reinit_prob,
                               std::size_t feature_dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const bool reinit = coin(rng) < reinit_prob;
  if (buffer.empty() || reinit) return UniformVector(feature_dim, rng);
  std::uniform_int_distribution<std::size_t> pick(0, buffer.size() - 1);
  return buffer.at(pick(rng));
}

std::vector<std::size_t> DrawSampleNodes(std::size_t node_count, std::size_t batch_size,
                                         std::mt19937_64& rng) {
  std::vector<std::size_t> all(node_count);
  std::iota(all.begin(), all.end(), 0);
  const std::size_t m = std::min(batch_size, node_count);
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, node_count - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  all.resize(m);
  return all;
}

SampleSet SgldChain(const SparseAdjacency& a_norm, DenseMatrix& x_hat, SampleSet sample,
                    const GcnParams& params, const SgldConfig& cfg, std::mt19937_64& rng) {
  cfg.Validate();
  const std::size_t m = sample.nodes.size();
  if (sample.features.rows() != m || sample.features.cols() != x_hat.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "sample set shape");
  }
  for (std::size_t node : sample.nodes) {
    if (node >= x_hat.rows()) throw Error(ErrorCode::kIndexOutOfRange, "sample node");
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<bool> frozen(m, false);
  const std::size_t f = x_hat.cols();
  std::vector<double> next(f);

  for (std::size_t step = 0; step < cfg.steps; ++step) {
    DenseMatrix grad;
    if (cfg.step_size != 0.0) {
      Tape tape;
      const Slot x = tape.Leaf(x_hat, true, sample.nodes);
      const Slot w0 = tape.Leaf(params.w0, false);
      const Slot w1 = tape.Leaf(params.w1, false);
      const ForwardSlots fwd = RecordForward(tape, a_norm, x, w0, w1);
      const double z_t = GraphEnergy(tape.value(fwd.logits));
      RequireNormalizer(z_t, "Z_t");
      const Slot lse = tape.RowLogSumExp(fwd.logits);
      const Slot objective = tape.Combine({{lse, 1.0 / z_t, sample.nodes, false}});
      grad = std::move(tape.Backward(objective).at(x));
    }
    for (std::size_t a = 0; a < m; ++a) {
      if (frozen[a]) continue;
      const std::size_t node = sample.nodes[a];
      bool finite = true;
      for (std::size_t j = 0; j < f; ++j) {
        const double drift = cfg.step_size != 0.0 ? cfg.step_size * grad(node, j) : 0.0;
        next[j] = x_hat(node, j) + drift + cfg.noise_scale * gauss(rng);
        finite = finite && std::isfinite(next[j]);
      }
      if (!finite) {
        next = UniformVector(f, rng);
        frozen[a] = true;
      }
      std::copy(next.begin(), next.end(), x_hat.row(node).begin());
    }
  }
  for (std::size_t a = 0; a < m; ++a) {
    const auto src = x_hat.row(sample.nodes[a]);
    std::copy(src.begin(), src.end(), sample.features.row(a).begin());
  }
  return sample;
}

std::vector<Edge> GenerateEdges(std::span<const double> lse, std::span<const std::size_t> nodes,
                                double tau) {
  if (lse.size() != nodes.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "one energy per sampled node expected");
  }
  if (!(tau >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "energy threshold must be >= 0");
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      if (nodes[a] == nodes[b]) continue;
      if (std::abs(lse[a] - lse[b]) <= tau) {
        edges.emplace_back(std::min(nodes[a], nodes[b]), std::max(nodes[a], nodes[b]));
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

AdamState::AdamState(const GcnParams& params)
    : m0(params.w0.rows(), params.w0.cols()),
      v0(params.w0.rows(), params.w0.cols()),
      m1(params.w1.rows(), params.w1.cols()),
      v1(params.w1.rows(), params.w1.cols()) {}

void AdamStep(GcnParams& params, const GcnParams& grads, AdamState& state, double lr) {
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(AdamState::kBeta1, t);
  const double bias2 = 1.0 - std::pow(AdamState::kBeta2, t);
  AdamUpdate(params.w0, grads.w0, state.m0, state.v0, lr, bias1, bias2);
  AdamUpdate(params.w1, grads.w1, state.m1, state.v1, lr, bias1, bias2);
}

void WriteEpochLogHeader(std::ostream& out) {
  out << "epoch,l_clf,l_gen,penalty,total,z_clf,z_gen,edges_added,train_acc,val_acc\n";
}

void WriteEpochLogRow(std::ostream& out, const EpochLog& log) {
  out << log.epoch << ',' << FormatDouble(log.l_clf) << ',' << FormatDouble(log.l_gen) << ','
      << FormatDouble(log.penalty) << ',' << FormatDouble(log.total) << ','
      << FormatDouble(log.z_clf) << ',' << FormatDouble(log.z_gen) << ',' << log.edges_added
      << ',' << FormatDouble(log.train_acc) << ',' << FormatDouble(log.val_acc) << '\n';
}

JemTrainer::JemTrainer(const Dataset& dataset, TrainConfig config)
    : dataset_(dataset),
      config_(std::move(config)),
      jemo_weight_(config_.EffectiveJemoWeight()),
      rng_(config_.seed ^ 0x9e3779b97f4a7c15ULL),
      params_([&] {
        config_.Validate();
        ValidateDataset(dataset);
        if (dataset.train_mask.empty()) {
          throw Error(ErrorCode::kEmptyMask, "dataset has no training nodes");
        }
        ModelConfig model;
        model.feature_dim = dataset.feature_dim();
        model.hidden_dim = config_.hidden_dim;
        model.class_count = dataset.class_count;
        model.jemo_weight = jemo_weight_;
        std::mt19937_64 init_rng(config_.seed);
        return InitParams(model, init_rng);
      }()),
      adam_(params_),
      adjacency_(dataset.adjacency),
      buffer_(config_.buffer_capacity, dataset.feature_dim()),
      x_generated_(dataset.features),
      tau_(config_.energy_threshold) {
  Renormalize();
}

void JemTrainer::Renormalize() { a_norm_ = SymmetricNormalize(AddSelfLoops(adjacency_)); }

EpochLog JemTrainer::TrainEpoch() {
  EpochLog log;
  log.epoch = ++epoch_;

  Tape tape;
  const Slot w0 = tape.Leaf(params_.w0, true);
  const Slot w1 = tape.Leaf(params_.w1, true);
  const Slot x = tape.Leaf(dataset_.features, false);
  const ForwardSlots orig = RecordForward(tape, a_norm_, x, w0, w1);
  const Slot l_clf = tape.MaskedCrossEntropy(orig.logits, dataset_.labels, dataset_.train_mask);
  const DenseMatrix& logits_orig = tape.value(orig.logits);
  log.l_clf = tape.scalar(l_clf);
  log.z_clf = GraphEnergy(logits_orig);

  const Prediction pred = Predict(logits_orig);
  log.train_acc = Accuracy(pred.classes, dataset_.labels, dataset_.train_mask);
  log.val_acc = dataset_.val_mask.empty()
                    ? 0.0
                    : Accuracy(pred.classes, dataset_.labels, dataset_.val_mask);

  std::vector<CombineTerm> terms{{l_clf, 1.0, {}, false}};
  SampleSet sample;
  std::optional<Slot> lse_gen;

  if (config_.generative()) {
    const std::size_t f = dataset_.feature_dim();
    sample.nodes = DrawSampleNodes(dataset_.node_count(), config_.batch_size, rng_);
    sample.features = DenseMatrix(sample.nodes.size(), f);
    DenseMatrix x_hat = dataset_.features;
    for (std::size_t a = 0; a < sample.nodes.size(); ++a) {
      const std::vector<double> init = InitSample(buffer_, config_.sgld.reinit_prob, f, rng_);
      std::copy(init.begin(), init.end(), sample.features.row(a).begin());
      std::copy(init.begin(), init.end(), x_hat.row(sample.nodes[a]).begin());
    }
    sample = SgldChain(a_norm_, x_hat, std::move(sample), params_, config_.sgld, rng_);

    const Slot xh = tape.Leaf(std::move(x_hat), false);
    const ForwardSlots gen = RecordForward(tape, a_norm_, xh, w0, w1);
    log.z_gen = GraphEnergy(tape.value(gen.logits));
    RequireNormalizer(log.z_clf, "Z_clf");
    RequireNormalizer(log.z_gen, "Z_gen");
    const Slot lse_orig = tape.RowLogSumExp(orig.logits);
    lse_gen = tape.RowLogSumExp(gen.logits);
    const Slot l_gen = tape.Combine({{lse_orig, 1.0 / log.z_clf, sample.nodes, false},
                                     {*lse_gen, -1.0 / log.z_gen, sample.nodes, false}},
                                    CombinePost::kAbs);
    log.l_gen = tape.scalar(l_gen);
    terms.push_back({l_gen, 1.0, {}, false});
  }

  log.penalty = OrthogonalityPenalty(params_);
  if (jemo_weight_ > 0.0) {
    terms.push_back({tape.OrthogonalityPenalty(w0), jemo_weight_, {}, false});
    terms.push_back({tape.OrthogonalityPenalty(w1), jemo_weight_, {}, false});
  }
  const Slot total = tape.Combine(std::move(terms));
  log.total = tape.scalar(total);
  if (!std::isfinite(log.total)) {
    throw Error(ErrorCode::kNonFiniteLoss, "epoch " + std::to_string(log.epoch));
  }

  GradientSet grads = tape.Backward(total);
  GcnParams step{std::move(grads.at(w0)), std::move(grads.at(w1))};
  AdamStep(params_, step, adam_, config_.learning_rate);

  if (config_.generative()) {
    last_nodes_ = sample.nodes;
    last_lse_.assign(sample.nodes.size(), 0.0);
    const DenseMatrix& lse = tape.value(*lse_gen);
    for (std::size_t a = 0; a < sample.nodes.size(); ++a) {
      const auto row = sample.features.row(a);
      buffer_.Push(std::vector<double>(row.begin(), row.end()));
      std::copy(row.begin(), row.end(), x_generated_.row(sample.nodes[a]).begin());
      last_lse_[a] = lse(sample.nodes[a], 0);
    }
    if (!tau_) {
      const auto [lo, hi] = std::minmax_element(last_lse_.begin(), last_lse_.end());
      tau_ = kRelativeThresholdFraction * (*hi - *lo);
    }
    last_candidates_ = GenerateEdges(last_lse_, last_nodes_, *tau_);
    pending_edges_.insert(last_candidates_.begin(), last_candidates_.end());

    if (log.epoch % config_.edge_update_interval == 0 && !pending_edges_.empty()) {
      const std::vector<Edge> commit(pending_edges_.begin(), pending_edges_.end());
      pending_edges_.clear();
      log.edges_added = AddEdges(adjacency_, commit);
      if (log.edges_added > 0) Renormalize();
    }
  }

  logs_.push_back(log);
  return log;
}

TrainResult JemTrainer::Snapshot() const {
  return {params_, adjacency_, x_generated_, logs_, tau_};
}

TrainResult JemTrainer::Run() {
  while (epoch_ < config_.epochs) TrainEpoch();
  return Snapshot();
}

TrainResult Train(const Dataset& dataset, const TrainConfig& config) {
  JemTrainer trainer(dataset, config);
  return trainer.Run();
}

DenseMatrix Evaluate(const SparseAdjacency& adjacency, const DenseMatrix& features,
                     const GcnParams& params) {
  return Forward(SymmetricNormalize(AddSelfLoops(adjacency)), features, params);
}

}  // namespace gcnjem
