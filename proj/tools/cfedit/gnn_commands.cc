// Copyright 2026 The cfedit Authors
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

// gen-data, train-gnn, eval-gnn and bench.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cfedit/assignment.h"
#include "cfedit/errors.h"
#include "cfedit/gnn.h"
#include "commands.h"

namespace cfedit::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr const char* kSamplesFile = "samples.txt";
constexpr const char* kManifestFile = "manifest.json";

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

void AddGnnConfigOptions(CLI::App* command, GnnConfig* c) {
  command->add_option("--epochs", c->epochs, "Training epochs")->check(CLI::PositiveNumber);
  command->add_option("--lr", c->lr_initial, "Initial learning rate")
      ->check(CLI::PositiveNumber);
  command->add_option("--lr-decay", c->lr_decay, "Fractional decay per step")
      ->check(CLI::Range(0.0, 1.0));
  command->add_option("--decay-every", c->decay_every, "Epochs between decay steps")
      ->check(CLI::PositiveNumber);
  command->add_option("--latent-dim", c->latent_dim, "Latent width of nodes and edges")
      ->check(CLI::PositiveNumber);
  command->add_option("--iterations", c->conv_iterations, "Convolution rounds")
      ->check(CLI::PositiveNumber);
  command->add_option("--hidden", c->mlp_hidden, "Hidden width of every MLP")
      ->check(CLI::PositiveNumber);
  command->add_option("--balance-w", c->loss_balance_w, "Positive-class weight of the loss")
      ->check(CLI::Range(0.0, 1.0));
}

fs::path SamplesPath(const std::string& data) {
  const fs::path p(data);
  return fs::is_directory(p) ? p / kSamplesFile : p;
}

std::vector<TrainingSample> ReadSamplesFile(const fs::path& path) {
  RequireFiles({path});
  std::ifstream in(path);
  return ReadTrainingSamples(in);
}

CostMatrix UniformCost(int n, int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> values(static_cast<size_t>(n) * m);
  for (double& v : values) v = unit(rng);
  return CostMatrix(n, m, std::move(values));
}

// ---------------------------------------------------------------- gen-data

struct GenDataOptions {
  int count = 1000;
  int n = 5;
  int m = 8;
  int n_max = 0;
  int m_max = 0;
  int check = 20;
  std::string out;
};

void RunGenData(const CLI::App& cmd, const GlobalOptions& global, const GenDataOptions& o) {
  const SizeRange rows{o.n, std::max(o.n, o.n_max)};
  const SizeRange cols{o.m, std::max(o.m, o.m_max)};
  if (cols.min < rows.max) throw InvalidConfig("need n <= m for every sample");
  const auto samples = GenerateTrainingSet(o.count, rows, cols, global.seed);

  // Re-derive a random subset of the labels with the exhaustive solver.
  std::vector<int> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(global.seed ^ 0x5eedc0ffeeULL);
  std::shuffle(order.begin(), order.end(), rng);
  int checked = 0;
  int skipped = 0;
  int mismatches = 0;
  for (int k = 0; k < std::min<int>(o.check, static_cast<int>(order.size())); ++k) {
    const TrainingSample& s = samples[order[k]];
    if (s.cost.rows() > kExhaustiveMaxSources || s.cost.cols() > kExhaustiveMaxTargets) {
      ++skipped;
      continue;
    }
    ++checked;
    const double want = SolveExhaustive(s.cost).total_weight;
    if (std::abs(want - s.ground_truth.total_weight) > 1e-9) ++mismatches;
  }
  if (mismatches > 0) {
    throw Error(std::to_string(mismatches) + " generated labels disagree with the exhaustive solver");
  }

  nlohmann::ordered_json manifest = BuildManifest(cmd);
  const fs::path dir(o.out);
  {
    std::ofstream out = OpenOutput(dir / kSamplesFile);
    out << ManifestComment(manifest);
    WriteTrainingSamples(out, samples);
    if (!out) throw IoError("failed writing " + (dir / kSamplesFile).string());
  }
  manifest["samples_file"] = kSamplesFile;
  manifest["count"] = samples.size();
  manifest["oracle_check"] = {{"checked", checked}, {"skipped", skipped}, {"mismatches", 0}};
  std::ofstream out = OpenOutput(dir / kManifestFile);
  out << manifest.dump(2) << '\n';
  Log(global, "wrote " + std::to_string(samples.size()) + " samples to " + dir.string() +
                  " (" + std::to_string(checked) + " labels re-checked exhaustively)");
}

// --------------------------------------------------------------- train-gnn

struct TrainOptions {
  GnnConfig config;
  std::string data;
  double heldout = 0.1;
  std::string out;
  std::string log;
};

void RunTrainGnn(const CLI::App& cmd, const GlobalOptions& global, TrainOptions o) {
  const fs::path data(o.data);
  if (fs::is_directory(data)) RequireFiles({data / kManifestFile});
  std::vector<TrainingSample> samples = ReadSamplesFile(SamplesPath(o.data));
  size_t held = static_cast<size_t>(std::floor(o.heldout * samples.size()));
  if (o.heldout > 0.0) held = std::max<size_t>(held, 1);
  if (held >= samples.size()) throw InvalidConfig("--heldout leaves no training samples");
  const std::vector<TrainingSample> heldout(samples.end() - held, samples.end());
  samples.resize(samples.size() - held);

  o.config.seed = global.seed;
  o.config.Validate();
  Log(global, "training on " + std::to_string(samples.size()) + " samples, " +
                  std::to_string(heldout.size()) + " held out");
  const TrainingResult result =
      Train(o.config, samples, heldout, [&](const EpochStats& s) {
        char line[160];
        std::snprintf(line, sizeof(line), "epoch %d lr %.6g loss %.6f held-out ratio %.4f",
                      s.epoch, s.lr, s.mean_loss, s.heldout_ratio);
        Log(global, line);
      });

  const nlohmann::ordered_json manifest = BuildManifest(cmd);
  std::stringstream checkpoint;
  SaveCheckpoint(checkpoint, result.model, o.config);
  nlohmann::ordered_json doc = nlohmann::ordered_json::parse(checkpoint.str());
  doc["manifest"] = manifest;
  {
    std::ofstream out = OpenOutput(o.out);
    out << doc.dump(1) << '\n';
    if (!out) throw IoError("failed writing " + o.out);
  }
  const std::string log_path = o.log.empty() ? o.out + ".log.csv" : o.log;
  std::ofstream log = OpenOutput(log_path);
  log << ManifestComment(manifest);
  WriteTrainingLog(log, result.epochs);
  Log(global, "wrote " + o.out + " and " + log_path);
}

// ---------------------------------------------------------------- eval-gnn

struct EvalGnnOptions {
  std::string model;
  std::string data;
  std::string out;
};

void RunEvalGnn(const CLI::App& cmd, const GlobalOptions& global, const EvalGnnOptions& o) {
  const Checkpoint ckpt = LoadModel(o.model);
  const std::vector<TrainingSample> samples = ReadSamplesFile(SamplesPath(o.data));
  if (samples.empty()) throw EmptyInput("no samples to evaluate");
  std::ostringstream rows;
  rows << "sample,n,m,optimal_weight,decoded_weight,optimality_ratio\n";
  double total = 0.0;
  for (size_t k = 0; k < samples.size(); ++k) {
    const TrainingSample& s = samples[k];
    const Matching decoded =
        DecodeAssignment(Forward(CostToGraph(s.cost), ckpt.model, ckpt.config), s.cost);
    const double ratio = decoded.total_weight / s.ground_truth.total_weight;
    total += ratio;
    char line[200];
    std::snprintf(line, sizeof(line), "%zu,%d,%d,%.10g,%.10g,%.10g\n", k, s.cost.rows(),
                  s.cost.cols(), s.ground_truth.total_weight, decoded.total_weight, ratio);
    rows << line;
  }
  const double mean = total / static_cast<double>(samples.size());
  if (!o.out.empty()) {
    std::ofstream out = OpenOutput(o.out);
    out << ManifestComment(BuildManifest(cmd)) << rows.str();
  }
  std::printf("mean_optimality_ratio %.6f over %zu samples\n", mean, samples.size());
  Log(global, "evaluated " + o.model);
}

// ------------------------------------------------------------------- bench

struct BenchOptions {
  std::vector<std::string> sizes = {"4x8", "8x9", "16x32", "64x128", "128x256", "256x512"};
  int repeats = 3;
  std::string model;
  std::string out;
};

std::pair<int, int> ParseSize(const std::string& text) {
  const size_t x = text.find('x');
  try {
    if (x != std::string::npos) {
      size_t used_n = 0;
      size_t used_m = 0;
      const int n = std::stoi(text.substr(0, x), &used_n);
      const int m = std::stoi(text.substr(x + 1), &used_m);
      if (used_n == x && used_m == text.size() - x - 1 && n >= 1 && m >= n) return {n, m};
    }
  } catch (const std::exception&) {
  }
  throw InvalidConfig("--sizes entries look like NxM with 1 <= N <= M, got '" + text + "'");
}

void RunBench(const CLI::App& cmd, const GlobalOptions& global, const BenchOptions& o) {
  std::vector<std::pair<int, int>> sizes;
  for (const std::string& s : o.sizes) sizes.push_back(ParseSize(s));
  GnnConfig config;
  GnnModel model;
  if (!o.model.empty()) {
    Checkpoint ckpt = LoadModel(o.model);
    config = ckpt.config;
    model = std::move(ckpt.model);
  } else {
    config.seed = global.seed;
    model = GnnModel::Create(config);
    Log(global, "no --model given; timing an untrained network");
  }

  std::ostringstream rows;
  rows << "solver,n,m,repeat,seconds,weight,optimality_ratio\n";
  auto row = [&](const char* solver, int n, int m, int r, double secs, double weight,
                 double optimum) {
    char line[200];
    std::snprintf(line, sizeof(line), "%s,%d,%d,%d,%.6e,%.10g,%.10g\n", solver, n, m, r, secs,
                  weight, weight / optimum);
    rows << line;
  };
  std::mt19937_64 rng(global.seed);
  for (const auto& [n, m] : sizes) {
    for (int r = 0; r < o.repeats; ++r) {
      const CostMatrix cost = UniformCost(n, m, rng);
      auto start = Clock::now();
      const Matching optimal = SolveRlap(cost);
      const double det_s = Seconds(start);
      const double optimum = optimal.total_weight;
      if (n <= kExhaustiveMaxSources && m <= kExhaustiveMaxTargets) {
        start = Clock::now();
        const Matching exhaustive = SolveExhaustive(cost);
        row("exhaustive", n, m, r, Seconds(start), exhaustive.total_weight, optimum);
      }
      row("deterministic", n, m, r, det_s, optimum, optimum);
      start = Clock::now();
      const Matching decoded = DecodeAssignment(Forward(CostToGraph(cost), model, config), cost);
      row("gnn", n, m, r, Seconds(start), decoded.total_weight, optimum);
    }
    Log(global, "benchmarked " + std::to_string(n) + "x" + std::to_string(m));
  }
  const std::string manifest = ManifestComment(BuildManifest(cmd));
  if (o.out.empty()) {
    std::cout << manifest << rows.str();
  } else {
    std::ofstream out = OpenOutput(o.out);
    out << manifest << rows.str();
  }
}

}  // namespace

void RegisterGenData(CLI::App& app, const GlobalOptions& global) {
  auto o = std::make_shared<GenDataOptions>();
  CLI::App* cmd = app.add_subcommand("gen-data", "Generate synthetic assignment samples");
  cmd->add_option("--count", o->count, "Number of samples")->check(CLI::PositiveNumber);
  cmd->add_option("--n", o->n, "Sources per sample (minimum when --n-max is set)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--m", o->m, "Targets per sample (minimum when --m-max is set)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--n-max", o->n_max, "Largest source count (0 = same as --n)");
  cmd->add_option("--m-max", o->m_max, "Largest target count (0 = same as --m)");
  cmd->add_option("--check", o->check, "Samples re-solved exhaustively as a label check")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", o->out, "Output directory")->required();
  cmd->callback([cmd, &global, o] { RunGenData(*cmd, global, *o); });
}

void RegisterTrainGnn(CLI::App& app, const GlobalOptions& global) {
  auto o = std::make_shared<TrainOptions>();
  CLI::App* cmd = app.add_subcommand("train-gnn", "Train the GNN solver on generated samples");
  cmd->add_option("--data", o->data, "Directory written by gen-data, or a samples file")
      ->required();
  AddGnnConfigOptions(cmd, &o->config);
  cmd->add_option("--heldout", o->heldout, "Fraction of samples held out for evaluation")
      ->check(CLI::Range(0.0, 0.9));
  cmd->add_option("--out", o->out, "Checkpoint path")->required();
  cmd->add_option("--log", o->log, "Training log CSV (default: <out>.log.csv)");
  cmd->callback([cmd, &global, o] { RunTrainGnn(*cmd, global, *o); });
}

void RegisterEvalGnn(CLI::App& app, const GlobalOptions& global) {
  auto o = std::make_shared<EvalGnnOptions>();
  CLI::App* cmd = app.add_subcommand("eval-gnn", "Report the optimality ratio of a checkpoint");
  cmd->add_option("--model", o->model, "Checkpoint path")->required();
  cmd->add_option("--data", o->data, "Directory written by gen-data, or a samples file")
      ->required();
  cmd->add_option("--out", o->out, "Per-sample CSV");
  cmd->callback([cmd, &global, o] { RunEvalGnn(*cmd, global, *o); });
}

void RegisterBench(CLI::App& app, const GlobalOptions& global) {
  auto o = std::make_shared<BenchOptions>();
  CLI::App* cmd = app.add_subcommand("bench", "Time the three solvers on uniform cost matrices");
  cmd->add_option("--sizes", o->sizes, "Matrix sizes as NxM")->delimiter(',');
  cmd->add_option("--repeats", o->repeats, "Matrices per size")->check(CLI::PositiveNumber);
  cmd->add_option("--model", o->model, "Checkpoint for the GNN rows (default: untrained)");
  cmd->add_option("--out", o->out, "CSV path (default: stdout)");
  cmd->callback([cmd, &global, o] { RunBench(*cmd, global, *o); });
}

}  // namespace cfedit::cli
