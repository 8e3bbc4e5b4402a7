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

#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gcnjem/analysis.hpp"
#include "gcnjem/checkpoint.hpp"
#include "gcnjem/dataset.hpp"
#include "gcnjem/jem_trainer.hpp"
#include "gcnjem/spectrum.hpp"
#include "gcnjem/train_config.hpp"

namespace gcnjem::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kToyDataset = "sbm_toy";

std::string Metric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct DatasetOptions {
  std::string dataset;
  bool row_normalize = false;
};

void AddDatasetOptions(CLI::App& sub, DatasetOptions& o) {
  sub.add_option("--dataset", o.dataset, "dataset directory, or sbm_toy")->required();
  sub.add_flag("--row-normalize", o.row_normalize, "scale feature rows to sum 1");
}

Dataset LoadInput(const DatasetOptions& o) {
  Dataset d;
  if (o.dataset == kToyDataset) {
    d = GenerateSbm(ToySbmSpec(0));
    if (o.row_normalize) RowNormalize(d.features);
  } else {
    d = LoadDataset(o.dataset, {.row_normalize_features = o.row_normalize});
  }
  return d;
}

const std::vector<std::size_t>& SplitMask(const Dataset& d, const std::string& split) {
  if (split == "train") return d.train_mask;
  if (split == "val") return d.val_mask;
  if (split == "test") return d.test_mask;
  throw Error(ErrorCode::kInvalidConfig, "unknown split '" + split + "'");
}

void WriteFileOrThrow(const fs::path& path, auto&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  writer(out);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

// --- train ---

struct TrainOptions {
  DatasetOptions data;
  std::string config_file;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::size_t repeats = 1;
  std::string mode;
  std::vector<std::string> overrides;
  std::optional<std::size_t> epochs;
  std::optional<double> jemo_weight;
  std::size_t log_every = 0;
};

TrainConfig BuildConfig(const TrainOptions& o) {
  TrainConfig c;
  if (!o.config_file.empty()) LoadConfigFile(o.config_file, c);
  if (!o.mode.empty()) ApplySetting(c, "mode", o.mode);
  if (o.epochs) c.epochs = *o.epochs;
  if (o.jemo_weight) c.jemo_weight = *o.jemo_weight;
  if (o.seed) c.seed = *o.seed;
  for (const std::string& s : o.overrides) ApplySetting(c, s);
  c.Validate();
  return c;
}

double TrainOnce(const Dataset& d, const TrainConfig& c, const fs::path& dir,
                 std::size_t log_every, std::ostream& err) {
  fs::create_directories(dir);
  JemTrainer trainer(d, c);
  for (std::size_t e = 1; e <= c.epochs; ++e) {
    const EpochLog log = trainer.TrainEpoch();
    if (log_every > 0 && (e % log_every == 0 || e == c.epochs)) {
      WriteEpochLogRow(err, log);
    }
  }
  const TrainResult r = trainer.Snapshot();

  SaveCheckpoint(dir / "checkpoint.bin", {r.params, r.generative_adjacency});
  SaveEdgeList(dir / "generative_edges.csv", r.generative_adjacency);
  SaveCsv((dir / "generated_features.csv").string(), r.generated_features);
  WriteFileOrThrow(dir / "epoch_log.csv", [&](std::ostream& out) {
    WriteEpochLogHeader(out);
    for (const EpochLog& log : r.logs) WriteEpochLogRow(out, log);
  });
  WriteFileOrThrow(dir / "config.txt", [&](std::ostream& out) {
    TrainConfig effective = c;
    if (!effective.energy_threshold && r.energy_threshold) {
      effective.energy_threshold = r.energy_threshold;
    }
    WriteConfig(out, effective);
  });

  const Prediction pred = Predict(Evaluate(r.generative_adjacency, d.features, r.params));
  return Accuracy(pred.classes, d.labels, d.test_mask);
}

int RunTrain(const TrainOptions& o, std::ostream& out, std::ostream& err) {
  const TrainConfig base = BuildConfig(o);
  if (o.repeats == 0) throw Error(ErrorCode::kInvalidConfig, "--repeats must be >= 1");
  const Dataset d = LoadInput(o.data);
  std::vector<double> accs;
  for (std::size_t r = 0; r < o.repeats; ++r) {
    TrainConfig c = base;
    c.seed = base.seed + r;
    fs::path dir(o.out_dir);
    if (o.repeats > 1) dir /= "seed_" + std::to_string(c.seed);
    const double acc = TrainOnce(d, c, dir, o.log_every, err);
    accs.push_back(acc);
    out << "seed=" << c.seed << " test_accuracy=" << Metric(acc) << '\n';
  }
  if (o.repeats > 1) {
    double mean = 0.0;
    for (double a : accs) mean += a;
    mean /= static_cast<double>(accs.size());
    double var = 0.0;
    for (double a : accs) var += (a - mean) * (a - mean);
    var /= static_cast<double>(accs.size() - 1);
    out << "mean_test_accuracy=" << Metric(mean) << " std=" << Metric(std::sqrt(var)) << '\n';
  }
  return kExitOk;
}

// --- eval / calibration ---

struct EvalOptions {
  DatasetOptions data;
  std::string checkpoint;
  std::string split = "test";
  bool original_adjacency = false;
};

DenseMatrix CheckpointLogits(const EvalOptions& o, const Dataset& d) {
  const Checkpoint c = LoadCheckpoint(o.checkpoint);
  const SparseAdjacency& a = o.original_adjacency ? d.adjacency : c.adjacency;
  return Evaluate(a, d.features, c.params);
}

int RunEval(const EvalOptions& o, std::ostream& out) {
  const Dataset d = LoadInput(o.data);
  const auto& mask = SplitMask(d, o.split);
  const Prediction pred = Predict(CheckpointLogits(o, d));
  out << o.split << "_accuracy=" << Metric(Accuracy(pred.classes, d.labels, mask)) << '\n';
  return kExitOk;
}

struct CalibrationOptions {
  EvalOptions eval;
  std::string out_dir;
  std::size_t buckets = kDefaultCalibrationBuckets;
  std::string histogram_split = "train";
  std::size_t bins = kDefaultConfidenceBins;
};

int RunCalibration(const CalibrationOptions& o, std::ostream& out) {
  const Dataset d = LoadInput(o.eval.data);
  const Prediction pred = Predict(CheckpointLogits(o.eval, d));

  const auto& mask = SplitMask(d, o.eval.split);
  std::vector<double> conf;
  std::unique_ptr<bool[]> correct(new bool[mask.size()]);
  for (std::size_t a = 0; a < mask.size(); ++a) {
    conf.push_back(pred.confidences[mask[a]]);
    correct[a] = pred.classes[mask[a]] == d.labels[mask[a]];
  }
  const CalibrationReport report = ExpectedCalibrationError(
      conf, std::span<const bool>(correct.get(), mask.size()), o.buckets);

  std::vector<double> hist_conf;
  for (std::size_t i : SplitMask(d, o.histogram_split)) hist_conf.push_back(pred.confidences[i]);
  const HistogramReport hist = ConfidenceHistogram(hist_conf, o.bins);

  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  WriteFileOrThrow(dir / "calibration.csv",
                   [&](std::ostream& f) { WriteCalibrationCsv(f, report); });
  WriteFileOrThrow(dir / "confidence_histogram.csv",
                   [&](std::ostream& f) { WriteHistogramCsv(f, hist); });
  out << "ece=" << Metric(report.ece) << " buckets=" << o.buckets << '\n';
  return kExitOk;
}

// --- analyze ---

struct AnalyzeOptions {
  DatasetOptions data;
  std::string after;
  std::string out_dir;
  std::size_t bins = kDefaultSpectrumBins;
};

int WriteComparison(const AnalyzeOptions& o, const SpectrumReport& before,
                    const SpectrumReport& after, std::ostream& out) {
  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  SaveSpectrumCsv((dir / "spectrum_before.csv").string(), before);
  SaveSpectrumCsv((dir / "spectrum_after.csv").string(), after);
  const SpectraComparison cmp = CompareSpectra(before, after);
  WriteFileOrThrow(dir / "comparison.csv", [&](std::ostream& f) { WriteComparisonCsv(f, cmp); });
  for (const ClosedPathDelta& d : cmp.closed_paths) {
    out << "closed_paths_" << d.length << " before=" << Metric(d.before)
        << " after=" << Metric(d.after) << " delta=" << Metric(d.delta) << '\n';
  }
  out << "eigenvalue_range before=" << Metric(cmp.range_before)
      << " after=" << Metric(cmp.range_after) << " delta=" << Metric(cmp.range_delta) << '\n';
  return kExitOk;
}

int RunAnalyzeAdjacency(const AnalyzeOptions& o, std::ostream& out) {
  const Dataset d = LoadInput(o.data);
  const SpectrumReport before = Spectrum(d.adjacency, o.bins);
  if (o.after.empty()) return WriteComparison(o, before, before, out);
  SparseAdjacency after = LoadEdgeList(o.after, d.node_count());
  return WriteComparison(o, before, Spectrum(after, o.bins), out);
}

int RunAnalyzeFeatures(const AnalyzeOptions& o, std::ostream& out) {
  const Dataset d = LoadInput(o.data);
  const SpectrumReport before = CovarianceSpectrum(d.features, o.bins);
  if (o.after.empty()) return WriteComparison(o, before, before, out);
  const DenseMatrix generated = LoadCsv(o.after);
  if (generated.cols() != d.feature_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "generated features have " +
                                                   std::to_string(generated.cols()) +
                                                   " columns, dataset has " +
                                                   std::to_string(d.feature_dim()));
  }
  return WriteComparison(o, before, CovarianceSpectrum(generated, o.bins), out);
}

// --- synth ---

struct SynthOptions {
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t blocks = 3;
  std::size_t block_size = 20;
  double p_in = 0.3;
  double p_out = 0.02;
  std::size_t feature_dim = 8;
  double noise = 1.0;
};

int RunSynth(const SynthOptions& o, std::ostream& out) {
  SbmSpec spec{.blocks = {},
               .p_in = o.p_in,
               .p_out = o.p_out,
               .feature_dim = o.feature_dim,
               .noise_scale = o.noise,
               .seed = o.seed};
  for (std::size_t b = 0; b < o.blocks; ++b) {
    spec.blocks.push_back({o.block_size, static_cast<int>(b)});
  }
  const Dataset d = GenerateSbm(spec);
  fs::create_directories(o.out_dir);
  SaveDataset(o.out_dir, d);
  out << "nodes=" << d.node_count() << " edges=" << d.adjacency.UndirectedEdgeCount()
      << " features=" << d.feature_dim() << " classes=" << d.class_count << '\n';
  return kExitOk;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
      return kExitConfig;
    case ErrorCode::kNonFiniteValue:
    case ErrorCode::kNonFiniteLoss:
    case ErrorCode::kNonFiniteSample:
    case ErrorCode::kConvergenceFailure:
    case ErrorCode::kZeroNormalizer:
      return kExitNumerical;
    default:
      return kExitData;
  }
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph convolutional joint energy model: training and analysis."};
  app.name("gcnjem");
  app.require_subcommand(1);

  TrainOptions train;
  CLI::App* train_cmd = app.add_subcommand("train", "train a model and write its artifacts");
  AddDatasetOptions(*train_cmd, train.data);
  train_cmd->add_option("--config", train.config_file, "key=value config file")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train.out_dir, "output directory")->required();
  train_cmd->add_option("--seed", train.seed, "random seed");
  train_cmd->add_option("--repeats", train.repeats, "runs with seeds seed..seed+N-1");
  train_cmd->add_option("--mode", train.mode, "gcn, jem or jemo");
  train_cmd->add_option("--set", train.overrides, "key=value override (repeatable)");
  train_cmd->add_option("--epochs", train.epochs, "number of epochs");
  train_cmd->add_option("--jemo-weight", train.jemo_weight, "orthogonality penalty weight");
  train_cmd->add_option("--log-every", train.log_every, "print every Nth epoch row to stderr");

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "accuracy of a checkpoint on one split");
  AddDatasetOptions(*eval_cmd, eval.data);
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "checkpoint.bin")->required();
  eval_cmd->add_option("--split", eval.split, "train, val or test");
  eval_cmd->add_flag("--original-adjacency", eval.original_adjacency,
                     "use the dataset graph instead of the checkpoint's");

  CalibrationOptions calib;
  CLI::App* calib_cmd =
      app.add_subcommand("calibration", "expected calibration error and confidence histogram");
  AddDatasetOptions(*calib_cmd, calib.eval.data);
  calib_cmd->add_option("--checkpoint", calib.eval.checkpoint, "checkpoint.bin")->required();
  calib_cmd->add_option("--split", calib.eval.split, "split for the ECE (default test)");
  calib_cmd->add_flag("--original-adjacency", calib.eval.original_adjacency,
                      "use the dataset graph instead of the checkpoint's");
  calib_cmd->add_option("--buckets", calib.buckets, "ECE bucket count");
  calib_cmd->add_option("--histogram-split", calib.histogram_split,
                        "split for the confidence histogram (default train)");
  calib_cmd->add_option("--bins", calib.bins, "confidence histogram bins");
  calib_cmd->add_option("--out", calib.out_dir, "output directory")->required();

  AnalyzeOptions adj;
  CLI::App* adj_cmd =
      app.add_subcommand("analyze-adjacency", "adjacency spectra and closed-path counts");
  AddDatasetOptions(*adj_cmd, adj.data);
  adj_cmd->add_option("--after", adj.after, "edge list of the generated graph");
  adj_cmd->add_option("--bins", adj.bins, "histogram bins");
  adj_cmd->add_option("--out", adj.out_dir, "output directory")->required();

  AnalyzeOptions feat;
  CLI::App* feat_cmd = app.add_subcommand("analyze-features", "feature covariance spectra");
  AddDatasetOptions(*feat_cmd, feat.data);
  feat_cmd->add_option("--after,--generated", feat.after, "generated feature CSV");
  feat_cmd->add_option("--bins", feat.bins, "histogram bins");
  feat_cmd->add_option("--out", feat.out_dir, "output directory")->required();

  SynthOptions synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "write a stochastic block model dataset");
  synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();
  synth_cmd->add_option("--seed", synth.seed, "random seed");
  synth_cmd->add_option("--blocks", synth.blocks, "number of blocks");
  synth_cmd->add_option("--block-size", synth.block_size, "nodes per block");
  synth_cmd->add_option("--p-in", synth.p_in, "within-block edge probability");
  synth_cmd->add_option("--p-out", synth.p_out, "between-block edge probability");
  synth_cmd->add_option("--features", synth.feature_dim, "feature width");
  synth_cmd->add_option("--noise", synth.noise, "feature noise scale");

  std::vector<std::string> argv_storage{"gcnjem"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "gcnjem: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*train_cmd) return RunTrain(train, out, err);
    if (*eval_cmd) return RunEval(eval, out);
    if (*calib_cmd) return RunCalibration(calib, out);
    if (*adj_cmd) return RunAnalyzeAdjacency(adj, out);
    if (*feat_cmd) return RunAnalyzeFeatures(feat, out);
    if (*synth_cmd) return RunSynth(synth, out);
  } catch (const Error& e) {
    err << "gcnjem: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "gcnjem: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace gcnjem::cli
