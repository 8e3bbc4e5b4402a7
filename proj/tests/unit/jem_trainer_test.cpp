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
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "gcnjem/dataset.hpp"
#include "gcnjem/error.hpp"
#include "gcnjem/gcn_model.hpp"
#include "gcnjem/jem_trainer.hpp"
#include "gcnjem/train_config.hpp"
#include "gtest/gtest.h"
#include "oracles.hpp"
#include "test_util.hpp"

namespace gcnjem {
namespace {

using testing::CodeOf;
using testing::RandomMatrix;

// n=8, f=4, k=2.
Dataset TinyDataset() {
  Dataset d;
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5},
                                {5, 6}, {6, 7}, {7, 4}, {0, 4}};
  d.adjacency = SparseAdjacency::FromEdges(8, edges);
  d.features = RandomMatrix(8, 4, 42);
  d.labels = {0, 0, 0, 0, 1, 1, 1, 1};
  d.train_mask = {0, 1, 4, 5};
  d.val_mask = {2, 6};
  d.test_mask = {3, 7};
  d.class_count = 2;
  return d;
}

TrainConfig ShortConfig(TrainMode mode, std::size_t epochs) {
  TrainConfig c;
  c.mode = mode;
  c.epochs = epochs;
  c.sgld.steps = 5;
  c.seed = 7;
  return c;
}

// --- ReplayBuffer / InitSample ---

TEST(ReplayBuffer, FifoEviction) {
  ReplayBuffer b(3, 2);
  for (int i = 0; i < 5; ++i) b.Push({double(i), double(i)});
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b.at(0)[0], 2.0);
  EXPECT_EQ(b.at(2)[0], 4.0);
}

TEST(ReplayBuffer, RejectsBadEntries) {
  ReplayBuffer b(3, 2);
  EXPECT_EQ(CodeOf([&] { b.Push({1.0}); }), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([&] { b.Push({1.0, std::nan("")}); }), ErrorCode::kNonFiniteSample);
  EXPECT_TRUE(b.empty());
}

TEST(InitSample, EmptyBufferDrawsUniform) {
  ReplayBuffer b(10, 6);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const auto v = InitSample(b, 0.0, 6, rng);
    ASSERT_EQ(v.size(), 6u);
    for (double x : v) {
      EXPECT_GT(x, -1.0);
      EXPECT_LT(x, 1.0);
    }
  }
}

TEST(InitSample, FullReinitNeverReadsBuffer) {
  ReplayBuffer b(4, 3);
  for (int i = 0; i < 4; ++i) b.Push({5.0, 5.0, 5.0});
  std::mt19937_64 rng(2);
  for (int t = 0; t < 500; ++t) EXPECT_LT(std::abs(InitSample(b, 1.0, 3, rng)[0]), 1.0);
}

TEST(InitSample, BufferHitFrequency) {
  ReplayBuffer b(100, 2);
  for (int i = 0; i < 100; ++i) b.Push({5.0 + i, 0.0});
  std::mt19937_64 rng(3);
  std::size_t hits = 0;
  const std::size_t draws = 10000;
  for (std::size_t t = 0; t < draws; ++t) {
    if (InitSample(b, 0.05, 2, rng)[0] >= 5.0) ++hits;
  }
  const double fraction = static_cast<double>(hits) / draws;
  EXPECT_GE(fraction, 0.94);
  EXPECT_LE(fraction, 0.96);
}

TEST(DrawSampleNodes, DistinctAndCapped) {
  std::mt19937_64 rng(4);
  const auto s = DrawSampleNodes(100, 32, rng);
  EXPECT_EQ(s.size(), 32u);
  EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 32u);
  for (std::size_t i : s) EXPECT_LT(i, 100u);
  const auto all = DrawSampleNodes(5, 32, rng);
  EXPECT_EQ(std::set<std::size_t>(all.begin(), all.end()), (std::set<std::size_t>{0, 1, 2, 3, 4}));
}

// --- SgldChain ---

struct ChainFixture {
  SparseAdjacency a_norm;
  DenseMatrix x_hat;
  SampleSet sample;
  GcnParams params;
};

ChainFixture MakeChain(std::size_t n, std::vector<std::size_t> nodes, std::uint64_t seed) {
  ChainFixture c;
  c.a_norm = SymmetricNormalize(
      AddSelfLoops(SparseAdjacency::FromEdges(n, testing::RandomEdges(n, 0.5, seed))));
  c.x_hat = RandomMatrix(n, 3, seed + 1);
  c.params = {RandomMatrix(3, 4, seed + 2), RandomMatrix(4, 2, seed + 3)};
  c.sample.features = DenseMatrix(nodes.size(), 3);
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    const auto row = c.x_hat.row(nodes[a]);
    std::copy(row.begin(), row.end(), c.sample.features.row(a).begin());
  }
  c.sample.nodes = std::move(nodes);
  return c;
}

TEST(SgldChain, IdentityWithoutStepOrNoise) {
  ChainFixture c = MakeChain(6, {1, 3, 4}, 1);
  const DenseMatrix before = c.x_hat;
  const DenseMatrix feats = c.sample.features;
  std::mt19937_64 rng(1);
  const SgldConfig cfg{.step_size = 0.0, .noise_scale = 0.0, .steps = 20, .reinit_prob = 0.05};
  const SampleSet out = SgldChain(c.a_norm, c.x_hat, c.sample, c.params, cfg, rng);
  EXPECT_EQ(out.features, feats);
  EXPECT_EQ(c.x_hat, before);
}

TEST(SgldChain, ZeroWeightsGiveZeroGradient) {
  ChainFixture c = MakeChain(6, {0, 5}, 2);
  c.params = {DenseMatrix(3, 4), DenseMatrix(4, 2)};
  const DenseMatrix feats = c.sample.features;
  std::mt19937_64 rng(2);
  const SgldConfig cfg{.step_size = 1.0, .noise_scale = 0.0, .steps = 20, .reinit_prob = 0.05};
  EXPECT_EQ(SgldChain(c.a_norm, c.x_hat, c.sample, c.params, cfg, rng).features, feats);
}

// Σ_{j∈S} LSE_j(X) / z, evaluated from scratch.
double ScaledLse(const ChainFixture& c, const DenseMatrix& x, double z) {
  const DenseMatrix lse = RowLogSumExp(Forward(c.a_norm, x, c.params));
  double s = 0.0;
  for (std::size_t i : c.sample.nodes) s += lse(i, 0);
  return s / z;
}

TEST(SgldChain, SingleStepMatchesFiniteDifference) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ChainFixture c = MakeChain(4, {0, 2}, seed);
    const DenseMatrix x0 = c.x_hat;
    const double z = GraphEnergy(Forward(c.a_norm, x0, c.params));
    const double alpha = 0.5;
    const double h = 1e-6;

    std::mt19937_64 rng(seed);
    const SgldConfig cfg{.step_size = alpha, .noise_scale = 0.0, .steps = 1, .reinit_prob = 0.0};
    const SampleSet out = SgldChain(c.a_norm, c.x_hat, c.sample, c.params, cfg, rng);

    double diff_sq = 0.0, ref_sq = 0.0;
    for (std::size_t a = 0; a < c.sample.nodes.size(); ++a) {
      const std::size_t i = c.sample.nodes[a];
      for (std::size_t col = 0; col < 3; ++col) {
        DenseMatrix plus = x0, minus = x0;
        plus(i, col) += h;
        minus(i, col) -= h;
        const double fd = (ScaledLse(c, plus, z) - ScaledLse(c, minus, z)) / (2.0 * h);
        const double update = out.features(a, col) - x0(i, col);
        diff_sq += (update - alpha * fd) * (update - alpha * fd);
        ref_sq += alpha * fd * alpha * fd;
        EXPECT_EQ(c.x_hat(i, col), out.features(a, col));
      }
    }
    ASSERT_GT(ref_sq, 0.0);
    EXPECT_LE(std::sqrt(diff_sq / ref_sq), 1e-4) << "seed " << seed;
  }
}

TEST(SgldChain, NonSampleRowsUntouched) {
  ChainFixture c = MakeChain(7, {2, 5}, 3);
  const DenseMatrix before = c.x_hat;
  std::mt19937_64 rng(3);
  SgldChain(c.a_norm, c.x_hat, c.sample, c.params, SgldConfig{}, rng);
  for (std::size_t i : {0u, 1u, 3u, 4u, 6u}) {
    for (std::size_t col = 0; col < 3; ++col) EXPECT_EQ(c.x_hat(i, col), before(i, col));
  }
}

// Smoke property at small α without noise: Σ LSE_i / Z_t does not decrease.
TEST(SgldChain, SmallStepAscends) {
  ChainFixture c = MakeChain(8, {1, 4, 6}, 4);
  const SgldConfig cfg{.step_size = 0.01, .noise_scale = 0.0, .steps = 1, .reinit_prob = 0.0};
  std::mt19937_64 rng(4);
  auto objective = [&] {
    return ScaledLse(c, c.x_hat, GraphEnergy(Forward(c.a_norm, c.x_hat, c.params)));
  };
  double previous = objective();
  for (int t = 0; t < 20; ++t) {
    c.sample = SgldChain(c.a_norm, c.x_hat, c.sample, c.params, cfg, rng);
    const double current = objective();
    EXPECT_GE(current, previous - 1e-12) << "step " << t;
    previous = current;
  }
}

TEST(SgldChain, NoiseIsSeeded) {
  ChainFixture c1 = MakeChain(6, {1, 2}, 5);
  ChainFixture c2 = MakeChain(6, {1, 2}, 5);
  std::mt19937_64 r1(9), r2(9);
  const SgldConfig cfg{};
  EXPECT_EQ(SgldChain(c1.a_norm, c1.x_hat, c1.sample, c1.params, cfg, r1).features,
            SgldChain(c2.a_norm, c2.x_hat, c2.sample, c2.params, cfg, r2).features);
}

// --- GenerateEdges ---

TEST(GenerateEdges, Examples) {
  const std::vector<std::size_t> nodes{7, 3, 9};
  EXPECT_TRUE(GenerateEdges(std::vector<double>{0.1, 0.2, 0.3}, nodes, 0.0).empty());
  const auto e = GenerateEdges(std::vector<double>{0.10, 0.15, 0.90}, nodes, 0.1);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0], (Edge{3, 7}));
}

TEST(GenerateEdges, MatchesPairScan) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto nodes = DrawSampleNodes(200, 32, rng);
    std::vector<double> lse(32);
    for (double& v : lse) v = u(rng);
    const double tau = 0.05;
    const auto got = GenerateEdges(lse, nodes, tau);
    EXPECT_EQ(testing::PairScanEdges(lse, nodes, tau), got);
  }
}

// --- Adam ---

TEST(Adam, ZeroGradientLeavesParams) {
  GcnParams p{RandomMatrix(3, 2, 1), RandomMatrix(2, 2, 2)};
  const GcnParams before = p;
  AdamState s(p);
  AdamStep(p, {DenseMatrix(3, 2), DenseMatrix(2, 2)}, s, 0.01);
  EXPECT_EQ(p, before);
}

TEST(Adam, FirstStepMagnitudeNearLr) {
  GcnParams p{RandomMatrix(3, 2, 1), RandomMatrix(2, 2, 2)};
  const GcnParams before = p;
  AdamState s(p);
  const double lr = 0.01;
  AdamStep(p, {DenseMatrix(3, 2, 0.37), DenseMatrix(2, 2, -2.5)}, s, lr);
  for (std::size_t i = 0; i < p.w0.size(); ++i) {
    const double d = std::abs(p.w0.data()[i] - before.w0.data()[i]);
    EXPECT_GE(d, 0.9 * lr);
    EXPECT_LE(d, lr);
  }
  for (std::size_t i = 0; i < p.w1.size(); ++i) {
    const double d = std::abs(p.w1.data()[i] - before.w1.data()[i]);
    EXPECT_GE(d, 0.9 * lr);
    EXPECT_LE(d, lr);
  }
}

TEST(Adam, SignFlipMatchesRecurrence) {
  GcnParams p{DenseMatrix{{0.5}}, DenseMatrix{{-0.25}}};
  AdamState s(p);
  const double lr = 0.01, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  double theta = 0.5, m = 0.0, v = 0.0;
  const double grads[] = {0.3, -0.3};
  for (int t = 1; t <= 2; ++t) {
    const double g = grads[t - 1];
    AdamStep(p, {DenseMatrix{{g}}, DenseMatrix{{0.0}}}, s, lr);
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mh = m / (1 - std::pow(b1, t));
    const double vh = v / (1 - std::pow(b2, t));
    theta -= lr * mh / (std::sqrt(vh) + eps);
    EXPECT_NEAR(s.m0(0, 0), m, 1e-12);
    EXPECT_NEAR(s.v0(0, 0), v, 1e-12);
    EXPECT_NEAR(p.w0(0, 0), theta, 1e-12);
  }
}

TEST(Adam, ShapeMismatch) {
  GcnParams p{DenseMatrix(2, 2), DenseMatrix(2, 2)};
  AdamState s(p);
  EXPECT_EQ(CodeOf([&] { AdamStep(p, {DenseMatrix(3, 2), DenseMatrix(2, 2)}, s, 0.01); }),
            ErrorCode::kDimensionMismatch);
}

// --- Trainer ---

TEST(Trainer, ClassificationLossIsolation) {
  const Dataset d = TinyDataset();
  JemTrainer trainer(d, ShortConfig(TrainMode::kJem, 1));
  const GcnParams initial = trainer.params();
  const EpochLog log = trainer.TrainEpoch();
  const auto a_norm = SymmetricNormalize(AddSelfLoops(d.adjacency));
  const DenseMatrix logits = Forward(a_norm, d.features, initial);
  EXPECT_NEAR(log.l_clf, ClassificationLoss(logits, d.labels, d.train_mask), 1e-12);
  EXPECT_NEAR(log.z_clf, GraphEnergy(logits), 1e-12);
  EXPECT_EQ(logits, Evaluate(d.adjacency, d.features, initial));
}

TEST(Trainer, DeterministicSingleStepNoNoise) {
  const Dataset d = TinyDataset();
  TrainConfig c = ShortConfig(TrainMode::kJem, 3);
  c.sgld.steps = 1;
  c.sgld.noise_scale = 0.0;
  const TrainResult a = Train(d, c);
  const TrainResult b = Train(d, c);
  EXPECT_EQ(a.logs, b.logs);
  EXPECT_EQ(a.params, b.params);
}

TEST(Trainer, DeterministicFullRun) {
  const Dataset d = GenerateSbm(ToySbmSpec(0));
  TrainConfig c = ShortConfig(TrainMode::kJemo, 60);
  c.energy_threshold = 0.05;
  const TrainResult a = Train(d, c);
  const TrainResult b = Train(d, c);
  EXPECT_EQ(a.logs, b.logs);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.generated_features, b.generated_features);
  EXPECT_EQ(a.generative_adjacency.UpperEdges(), b.generative_adjacency.UpperEdges());
}

TEST(Trainer, NoCommitBeforeInterval) {
  const Dataset d = GenerateSbm(ToySbmSpec(1));
  TrainConfig c = ShortConfig(TrainMode::kJem, 49);
  c.energy_threshold = 10.0;  // every pair qualifies
  JemTrainer trainer(d, c);
  const TrainResult r = trainer.Run();
  EXPECT_FALSE(trainer.pending_edges().empty());
  EXPECT_TRUE(r.generative_adjacency.SamePattern(d.adjacency));
  for (const EpochLog& log : r.logs) EXPECT_EQ(log.edges_added, 0u);
}

TEST(Trainer, CommitsOnIntervalAndGrowsMonotonically) {
  const Dataset d = GenerateSbm(ToySbmSpec(2));
  TrainConfig c = ShortConfig(TrainMode::kJem, 100);
  c.energy_threshold = 0.02;
  c.edge_update_interval = 25;
  JemTrainer trainer(d, c);
  const auto original = d.adjacency.UpperEdges();
  std::size_t committed = 0;
  for (std::size_t e = 1; e <= c.epochs; ++e) {
    const EpochLog log = trainer.TrainEpoch();
    if (e % 25 != 0) {
      EXPECT_EQ(log.edges_added, 0u);
      continue;
    }
    EXPECT_TRUE(trainer.pending_edges().empty());
    committed += log.edges_added;
    const SparseAdjacency& a = trainer.adjacency();
    EXPECT_TRUE(a.is_symmetric());
    EXPECT_FALSE(a.HasSelfLoop());
    for (const Edge& edge : original) EXPECT_TRUE(a.Contains(edge.first, edge.second));
    EXPECT_EQ(a.UndirectedEdgeCount(), original.size() + committed);
    EXPECT_TRUE(trainer.normalized_adjacency().SamePattern(AddSelfLoops(a)));
  }
  EXPECT_GT(committed, 0u);
}

TEST(Trainer, ZeroThresholdAddsNoEdges) {
  const Dataset d = GenerateSbm(ToySbmSpec(3));
  TrainConfig c = ShortConfig(TrainMode::kJem, 100);
  c.energy_threshold = 0.0;
  const TrainResult r = Train(d, c);
  for (const EpochLog& log : r.logs) EXPECT_EQ(log.edges_added, 0u);
  EXPECT_TRUE(r.generative_adjacency.SamePattern(d.adjacency));
}

TEST(Trainer, BufferSizeLaw) {
  const Dataset d = GenerateSbm(ToySbmSpec(4));  // n = 60, ζ = 32
  TrainConfig c = ShortConfig(TrainMode::kJem, 5);
  JemTrainer uncapped(d, c);
  for (std::size_t e = 1; e <= 5; ++e) {
    uncapped.TrainEpoch();
    EXPECT_EQ(uncapped.buffer().size(), std::min<std::size_t>(10000, e * 32));
  }
  c.buffer_capacity = 100;
  JemTrainer capped(d, c);
  for (std::size_t e = 1; e <= 5; ++e) {
    capped.TrainEpoch();
    EXPECT_EQ(capped.buffer().size(), std::min<std::size_t>(100, e * 32));
  }
}

TEST(Trainer, AutoThresholdFromFirstEpoch) {
  const Dataset d = GenerateSbm(ToySbmSpec(5));
  JemTrainer trainer(d, ShortConfig(TrainMode::kJem, 2));
  EXPECT_FALSE(trainer.energy_threshold().has_value());
  trainer.TrainEpoch();
  const auto& lse = trainer.last_sample_lse();
  const auto [lo, hi] = std::minmax_element(lse.begin(), lse.end());
  ASSERT_TRUE(trainer.energy_threshold().has_value());
  EXPECT_DOUBLE_EQ(*trainer.energy_threshold(), kRelativeThresholdFraction * (*hi - *lo));
  const double tau = *trainer.energy_threshold();
  trainer.TrainEpoch();
  EXPECT_EQ(*trainer.energy_threshold(), tau);
  EXPECT_EQ(trainer.last_candidates(),
            GenerateEdges(trainer.last_sample_lse(), trainer.last_sample_nodes(), tau));
}

TEST(Trainer, FrozenDynamicsStillFinite) {
  const Dataset d = GenerateSbm(ToySbmSpec(6));
  TrainConfig c = ShortConfig(TrainMode::kJem, 20);
  c.sgld.step_size = 0.0;
  c.sgld.noise_scale = 0.0;
  c.energy_threshold = 0.0;
  for (const EpochLog& log : Train(d, c).logs) {
    EXPECT_TRUE(std::isfinite(log.l_clf));
    EXPECT_TRUE(std::isfinite(log.l_gen));
    EXPECT_TRUE(std::isfinite(log.total));
  }
}

TEST(Trainer, GcnModeSkipsGeneration) {
  const Dataset d = GenerateSbm(ToySbmSpec(7));
  JemTrainer trainer(d, ShortConfig(TrainMode::kGcn, 60));
  const TrainResult r = trainer.Run();
  EXPECT_TRUE(trainer.buffer().empty());
  EXPECT_EQ(r.generated_features, d.features);
  EXPECT_TRUE(r.generative_adjacency.SamePattern(d.adjacency));
  for (const EpochLog& log : r.logs) {
    EXPECT_EQ(log.l_gen, 0.0);
    EXPECT_NEAR(log.total, log.l_clf, 1e-15);
  }
}

TEST(Trainer, LearnsToyGraph) {
  const Dataset d = GenerateSbm(ToySbmSpec(0));
  TrainConfig c = ShortConfig(TrainMode::kGcn, 200);
  const TrainResult r = Train(d, c);
  EXPECT_LT(r.logs.back().l_clf, r.logs.front().l_clf);
  EXPECT_GE(r.logs.back().train_acc, 0.9);
}

TEST(Trainer, JemoAddsPenalty) {
  const Dataset d = TinyDataset();
  TrainConfig c = ShortConfig(TrainMode::kJemo, 1);
  c.energy_threshold = 0.0;
  const EpochLog log = Train(d, c).logs.front();
  EXPECT_GT(log.penalty, 0.0);
  EXPECT_NEAR(log.total, log.l_clf + log.l_gen + kDefaultJemoWeight * log.penalty, 1e-12);
}

TEST(EpochLogCsv, HeaderAndRow) {
  std::ostringstream out;
  WriteEpochLogHeader(out);
  EpochLog log;
  log.epoch = 3;
  log.l_clf = 0.5;
  log.edges_added = 2;
  WriteEpochLogRow(out, log);
  EXPECT_EQ(out.str(),
            "epoch,l_clf,l_gen,penalty,total,z_clf,z_gen,edges_added,train_acc,val_acc\n"
            "3,0.5,0,0,0,0,0,2,0,0\n");
}

// --- TrainConfig ---

TEST(TrainConfig, DefaultsAndEffectiveWeight) {
  TrainConfig c;
  EXPECT_EQ(c.epochs, 500u);
  EXPECT_EQ(c.learning_rate, 0.01);
  EXPECT_EQ(c.batch_size, 32u);
  EXPECT_EQ(c.edge_update_interval, 50u);
  EXPECT_EQ(c.sgld.step_size, 1.0);
  EXPECT_EQ(c.sgld.noise_scale, 0.01);
  EXPECT_EQ(c.sgld.steps, 20u);
  EXPECT_EQ(c.sgld.reinit_prob, 0.05);
  EXPECT_EQ(c.EffectiveJemoWeight(), 0.0);
  c.mode = TrainMode::kJemo;
  EXPECT_EQ(c.EffectiveJemoWeight(), 1e-3);
  c.jemo_weight = 0.5;
  EXPECT_EQ(c.EffectiveJemoWeight(), 0.5);
}

TEST(TrainConfig, ParseWithComments) {
  std::istringstream in(
      "# comment\n"
      "mode = jemo\n"
      "epochs=12   # trailing\n"
      "\n"
      "steps=3\n"
      "energy_threshold=0.25\n"
      "reinit_prob=0.5\n");
  TrainConfig c;
  ParseConfig(in, c);
  EXPECT_EQ(c.mode, TrainMode::kJemo);
  EXPECT_EQ(c.epochs, 12u);
  EXPECT_EQ(c.sgld.steps, 3u);
  EXPECT_EQ(c.energy_threshold, 0.25);
  EXPECT_EQ(c.sgld.reinit_prob, 0.5);
}

TEST(TrainConfig, RoundTrip) {
  TrainConfig c;
  c.mode = TrainMode::kGcn;
  c.learning_rate = 0.003;
  c.seed = 99;
  c.jemo_weight = 0.125;
  std::stringstream buf;
  WriteConfig(buf, c);
  TrainConfig back;
  ParseConfig(buf, back);
  std::ostringstream again;
  WriteConfig(again, back);
  EXPECT_EQ(buf.str(), again.str());
  EXPECT_EQ(back.learning_rate, 0.003);
  EXPECT_EQ(back.seed, 99u);
  EXPECT_FALSE(back.energy_threshold.has_value());
}

TEST(TrainConfig, RejectsBadInput) {
  TrainConfig c;
  EXPECT_EQ(CodeOf([&] { ApplySetting(c, "no_such_key=1"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([&] { ApplySetting(c, "epochs=abc"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([&] { ApplySetting(c, "mode=xyz"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([&] { ApplySetting(c, "missing_equals"); }), ErrorCode::kInvalidConfig);
  for (const char* bad : {"batch_size=0", "epochs=0", "learning_rate=0", "energy_threshold=-1",
                          "reinit_prob=1.5", "steps=0", "noise_scale=-0.1"}) {
    TrainConfig fresh;
    EXPECT_EQ(CodeOf([&] {
                ApplySetting(fresh, bad);
                fresh.Validate();
              }),
              ErrorCode::kInvalidConfig)
        << bad;
  }
}

}  // namespace
}  // namespace gcnjem
