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

// Graph convolutional approximator for rectangular assignment: an edge
// encoder, alternating node/edge convolutions with channel attention, and a
// sigmoid edge decoder, trained on synthetic uniform cost matrices labelled
// by the exact solver.

#ifndef CFEDIT_GNN_H_
#define CFEDIT_GNN_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cfedit/assignment.h"
#include "cfedit/mlp.h"

namespace cfedit {

struct GnnConfig {
  int latent_dim = 16;
  int conv_iterations = 2;
  int mlp_hidden = 32;
  int epochs = 20;
  double lr_initial = 0.003;
  double lr_decay = 0.05;
  int decay_every = 5;
  double loss_balance_w = 0.9;
  uint64_t seed = 0;

  // Throws InvalidConfig.
  void Validate() const;
  // lr_initial * (1 - lr_decay)^floor(epoch / decay_every), epoch 0-based.
  double LearningRate(int epoch) const;
};

struct GnnModel {
  Mlp encoder;         // edge weight -> latent edge attribute
  Mlp edge_update;     // [v_i*c_u, v_j*c_u, e_ij*c_e] -> e_ij
  Mlp node_transform;  // [e_ij*c_e, a_ij * (v_j*c_u)] -> message
  Mlp node_update;     // [mean message, v_i] -> v_i
  Mlp attention;       // [v_i, v_j] -> a_ij in (0,1)
  Mlp decoder;         // e_ij -> edge logit
  Eigen::MatrixXd node_channel;  // latent_dim x 1
  Eigen::MatrixXd edge_channel;  // latent_dim x 1

  // Random MLP weights from config.seed; channel attention starts at ones.
  static GnnModel Create(const GnnConfig& config);

  int latent_dim() const { return static_cast<int>(node_channel.rows()); }
  GnnModel ZerosLike() const;

  // Visits (group, name, matrix) for every parameter tensor, in a fixed order.
  template <typename F>
  void ForEachParameter(F&& f);
  template <typename F>
  void ForEachParameter(F&& f) const;

  bool AllFinite() const;
};

// Node attributes (sources first, then targets) and edge attributes, with
// edge order matching BipartiteGraph::edges().
struct LatentGraph {
  int num_sources = 0;
  std::vector<int> edge_source;  // node index
  std::vector<int> edge_target;  // node index, offset by num_sources
  Eigen::MatrixXd nodes;         // (n + m) x latent_dim
  Eigen::MatrixXd edges;         // |E| x latent_dim
};

struct ScoredEdge {
  int source = 0;
  int target = 0;
  double score = 0.0;
};

// One score in (0,1) per graph edge, in graph edge order.
struct EdgeScores {
  std::vector<ScoredEdge> edges;
};

LatentGraph Encode(const BipartiteGraph& graph, const GnnModel& model);
// Throws DimensionMismatch.
LatentGraph EdgeConv(const LatentGraph& latent, const GnnModel& model);
// Throws DimensionMismatch, IsolatedNode.
LatentGraph NodeConv(const LatentGraph& latent, const GnnModel& model);
EdgeScores Decode(const LatentGraph& latent, const GnnModel& model);
// Encode, then (NodeConv, EdgeConv) x conv_iterations, then Decode.
EdgeScores Forward(const BipartiteGraph& graph, const GnnModel& model,
                   const GnnConfig& config);

// Greedy one-to-one decoding: repeatedly take the highest-scoring pair whose
// source and target are both free (ties: lower cost, then lower indices).
// Sources left stranded by infeasible entries are repaired along augmenting
// paths. Throws NoFeasibleAssignment when no complete matching exists.
Matching DecodeAssignment(const EdgeScores& scores, const CostMatrix& cost);

// Class-weighted binary cross-entropy summed over edges:
//   -sum( w * y_gt * log y + (1 - w) * (1 - y_gt) * log(1 - y) )
// with y clamped to [1e-7, 1 - 1e-7]. Throws DimensionMismatch.
double BalancedBceLoss(std::span<const double> scores,
                       std::span<const double> labels, double w);
double BalancedBceLoss(const EdgeScores& scores, std::span<const double> labels,
                       double w);

struct TrainingSample {
  CostMatrix cost;
  Matching ground_truth;
};

// 1.0 for edges in `matching`, 0.0 otherwise, in graph edge order.
std::vector<double> EdgeLabels(const BipartiteGraph& graph, const Matching& matching);

struct SizeRange {
  int min = 1;
  int max = 1;
};

// Uniform(0,1) dense cost matrices labelled by SolveRlap. n is drawn from
// `rows`, m from [max(n, cols.min), cols.max]. Deterministic in `seed`.
std::vector<TrainingSample> GenerateTrainingSet(int count, SizeRange rows,
                                                SizeRange cols, uint64_t seed);

// Text format: a "cfedit-samples <version> <count>" header, then per sample
// a "sample <k>" line, the cost matrix, and its n ground-truth pairs.
// Lines starting with '#' are comments.
inline constexpr int kSamplesVersion = 1;
void WriteTrainingSamples(std::ostream& out, std::span<const TrainingSample> samples);
std::vector<TrainingSample> ReadTrainingSamples(std::istream& in);

struct LossAndGradient {
  double loss = 0.0;
  EdgeScores scores;
  GnnModel gradient;
};

// Balanced BCE of Forward(graph) against `labels` and its gradient with
// respect to every parameter, by reverse-mode differentiation.
LossAndGradient ComputeLossAndGradient(const BipartiteGraph& graph,
                                       std::span<const double> labels,
                                       const GnnModel& model,
                                       const GnnConfig& config);

// Mean over samples of (decoded weight / optimal weight).
double MeanOptimalityRatio(const GnnModel& model, const GnnConfig& config,
                           std::span<const TrainingSample> samples);

struct EpochStats {
  int epoch = 0;  // 1-based
  double lr = 0.0;
  double mean_loss = 0.0;
  double heldout_ratio = 0.0;  // NaN without a held-out set
};

struct TrainingResult {
  GnnModel model;
  double initial_heldout_ratio = 0.0;
  std::vector<EpochStats> epochs;
};

// Plain per-sample SGD over `data` for config.epochs epochs, shuffling with
// config.seed. Throws DivergenceError on a non-finite loss or parameter.
TrainingResult Train(const GnnConfig& config, std::span<const TrainingSample> data,
                     std::span<const TrainingSample> heldout = {},
                     const std::function<void(const EpochStats&)>& on_epoch = {});
GnnModel TrainModel(const GnnConfig& config, std::span<const TrainingSample> data);

// CSV: epoch,lr,mean_loss,heldout_optimality_ratio
void WriteTrainingLog(std::ostream& out, std::span<const EpochStats> epochs);

inline constexpr int kCheckpointVersion = 1;

// JSON document with format tag, version, config echo and every parameter
// array under "<group>.<name>".
void SaveCheckpoint(std::ostream& out, const GnnModel& model, const GnnConfig& config);
void SaveCheckpoint(const std::filesystem::path& path, const GnnModel& model,
                    const GnnConfig& config);
struct Checkpoint {
  GnnConfig config;
  GnnModel model;
};
// Throws ParseError on malformed or version-mismatched input.
Checkpoint LoadCheckpoint(std::istream& in);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

template <typename F>
void GnnModel::ForEachParameter(F&& f) {
  auto mlp = [&](std::string_view group, Mlp& m) {
    m.ForEachParameter([&](std::string_view name, Eigen::MatrixXd& p) { f(group, name, p); });
  };
  mlp("encoder", encoder);
  mlp("edge_update", edge_update);
  mlp("node_transform", node_transform);
  mlp("node_update", node_update);
  mlp("attention", attention);
  mlp("decoder", decoder);
  f(std::string_view("node_channel"), std::string_view("c"), node_channel);
  f(std::string_view("edge_channel"), std::string_view("c"), edge_channel);
}

template <typename F>
void GnnModel::ForEachParameter(F&& f) const {
  auto mlp = [&](std::string_view group, const Mlp& m) {
    m.ForEachParameter(
        [&](std::string_view name, const Eigen::MatrixXd& p) { f(group, name, p); });
  };
  mlp("encoder", encoder);
  mlp("edge_update", edge_update);
  mlp("node_transform", node_transform);
  mlp("node_update", node_update);
  mlp("attention", attention);
  mlp("decoder", decoder);
  f(std::string_view("node_channel"), std::string_view("c"), node_channel);
  f(std::string_view("edge_channel"), std::string_view("c"), edge_channel);
}

}  // namespace cfedit

#endif  // CFEDIT_GNN_H_
