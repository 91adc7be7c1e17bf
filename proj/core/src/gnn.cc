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

#include "cfedit/gnn.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "cfedit/errors.h"
#include "json.hpp"

namespace cfedit {
namespace {

constexpr double kScoreEpsilon = 1e-7;
constexpr char kCheckpointFormat[] = "cfedit-gnn-checkpoint";

using Eigen::MatrixXd;

// Incidence k pairs node inc_self[k] with neighbour inc_nbr[k] through edge
// inc_edge[k]; every edge appears twice, once from each endpoint.
struct Topology {
  int num_nodes = 0;
  std::vector<int> src;
  std::vector<int> tgt;
  std::vector<int> inc_self;
  std::vector<int> inc_nbr;
  std::vector<int> inc_edge;
  std::vector<double> inv_degree;
};

Topology MakeTopology(const LatentGraph& latent) {
  Topology topo;
  topo.num_nodes = static_cast<int>(latent.nodes.rows());
  topo.src = latent.edge_source;
  topo.tgt = latent.edge_target;
  const int num_edges = static_cast<int>(topo.src.size());
  topo.inc_self.reserve(2 * num_edges);
  topo.inc_nbr.reserve(2 * num_edges);
  topo.inc_edge.reserve(2 * num_edges);
  std::vector<int> degree(topo.num_nodes, 0);
  for (int e = 0; e < num_edges; ++e) {
    topo.inc_self.push_back(topo.src[e]);
    topo.inc_nbr.push_back(topo.tgt[e]);
    topo.inc_edge.push_back(e);
  }
  for (int e = 0; e < num_edges; ++e) {
    topo.inc_self.push_back(topo.tgt[e]);
    topo.inc_nbr.push_back(topo.src[e]);
    topo.inc_edge.push_back(e);
  }
  for (int self : topo.inc_self) ++degree[self];
  topo.inv_degree.resize(topo.num_nodes);
  for (int v = 0; v < topo.num_nodes; ++v) {
    if (degree[v] == 0) {
      throw IsolatedNode("node " + std::to_string(v) + " has no incident edges");
    }
    topo.inv_degree[v] = 1.0 / degree[v];
  }
  return topo;
}

MatrixXd Gather(const MatrixXd& x, const std::vector<int>& rows) {
  MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (size_t k = 0; k < rows.size(); ++k) out.row(k) = x.row(rows[k]);
  return out;
}

void ScatterAdd(MatrixXd& dst, const std::vector<int>& rows, const MatrixXd& src) {
  for (size_t k = 0; k < rows.size(); ++k) dst.row(rows[k]) += src.row(k);
}

// x with every row multiplied element-wise by the channel vector.
MatrixXd Channel(const MatrixXd& x, const MatrixXd& channel) {
  return (x.array().rowwise() * channel.col(0).transpose().array()).matrix();
}

// Column sums of (a .* b), as a column vector: gradient of a channel vector.
MatrixXd ChannelGrad(const MatrixXd& upstream, const MatrixXd& x) {
  return (upstream.array() * x.array()).colwise().sum().transpose().matrix();
}

MatrixXd HStack(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

MatrixXd HStack(const MatrixXd& a, const MatrixXd& b, const MatrixXd& c) {
  MatrixXd out(a.rows(), a.cols() + b.cols() + c.cols());
  out << a, b, c;
  return out;
}

void CheckModel(const GnnModel& model) {
  const int d = model.latent_dim();
  auto expect = [](const Mlp& mlp, int in, int out, const char* name) {
    if (mlp.input_dim() != in || mlp.output_dim() != out) {
      throw DimensionMismatch(std::string(name) + " expects " + std::to_string(in) +
                              " -> " + std::to_string(out) + ", has " +
                              std::to_string(mlp.input_dim()) + " -> " +
                              std::to_string(mlp.output_dim()));
    }
  };
  if (d <= 0 || model.edge_channel.rows() != d || model.node_channel.cols() != 1 ||
      model.edge_channel.cols() != 1) {
    throw DimensionMismatch("channel attention vectors must both be latent_dim x 1");
  }
  expect(model.encoder, 1, d, "encoder");
  expect(model.edge_update, 3 * d, d, "edge_update");
  expect(model.node_transform, 2 * d, d, "node_transform");
  expect(model.node_update, 2 * d, d, "node_update");
  expect(model.attention, 2 * d, 1, "attention");
  expect(model.decoder, d, 1, "decoder");
}

void CheckLatent(const LatentGraph& latent, const GnnModel& model) {
  CheckModel(model);
  const int d = model.latent_dim();
  if (latent.nodes.cols() != d || latent.edges.cols() != d) {
    throw DimensionMismatch("latent width " + std::to_string(latent.nodes.cols()) +
                            "/" + std::to_string(latent.edges.cols()) +
                            " does not match model latent_dim " + std::to_string(d));
  }
  if (latent.edges.rows() != static_cast<Eigen::Index>(latent.edge_source.size()) ||
      latent.edge_source.size() != latent.edge_target.size()) {
    throw DimensionMismatch("edge attribute rows do not match the edge list");
  }
}

struct NodeConvTape {
  MatrixXd nodes;
  MatrixXd edges;
  MatrixXd v_self;
  MatrixXd v_nbr;
  MatrixXd attn;       // K x 1
  MatrixXd nbr_chan;   // v_nbr * c_u
  Mlp::Tape attention;
  Mlp::Tape transform;
  Mlp::Tape update;
};

struct EdgeConvTape {
  MatrixXd nodes;
  MatrixXd edges;
  Mlp::Tape update;
};

MatrixXd NodeConvForward(const Topology& topo, const MatrixXd& nodes,
                         const MatrixXd& edges, const GnnModel& model,
                         NodeConvTape* tape) {
  MatrixXd v_self = Gather(nodes, topo.inc_self);
  MatrixXd v_nbr = Gather(nodes, topo.inc_nbr);
  MatrixXd attn = model.attention.Forward(HStack(v_self, v_nbr),
                                          tape ? &tape->attention : nullptr);
  MatrixXd nbr_chan = Channel(v_nbr, model.node_channel);
  MatrixXd edge_chan = Channel(Gather(edges, topo.inc_edge), model.edge_channel);
  MatrixXd weighted = (nbr_chan.array().colwise() * attn.col(0).array()).matrix();
  MatrixXd messages = model.node_transform.Forward(HStack(edge_chan, weighted),
                                                   tape ? &tape->transform : nullptr);

  MatrixXd mean = MatrixXd::Zero(topo.num_nodes, messages.cols());
  ScatterAdd(mean, topo.inc_self, messages);
  for (int v = 0; v < topo.num_nodes; ++v) mean.row(v) *= topo.inv_degree[v];

  MatrixXd updated = model.node_update.Forward(HStack(mean, nodes),
                                               tape ? &tape->update : nullptr);
  if (tape != nullptr) {
    tape->nodes = nodes;
    tape->edges = edges;
    tape->v_self = std::move(v_self);
    tape->v_nbr = std::move(v_nbr);
    tape->attn = std::move(attn);
    tape->nbr_chan = std::move(nbr_chan);
  }
  return updated;
}

void NodeConvBackward(const Topology& topo, const NodeConvTape& tape,
                      const MatrixXd& d_updated, const GnnModel& model, GnnModel* grad,
                      MatrixXd* d_nodes, MatrixXd* d_edges) {
  const int d = model.latent_dim();
  const MatrixXd d_update_in = model.node_update.Backward(tape.update, d_updated,
                                                          &grad->node_update);
  MatrixXd d_mean = d_update_in.leftCols(d);
  *d_nodes += d_update_in.rightCols(d);
  for (int v = 0; v < topo.num_nodes; ++v) d_mean.row(v) *= topo.inv_degree[v];

  const MatrixXd d_messages = Gather(d_mean, topo.inc_self);
  const MatrixXd d_transform_in = model.node_transform.Backward(
      tape.transform, d_messages, &grad->node_transform);

  const MatrixXd d_edge_chan = d_transform_in.leftCols(d);
  const MatrixXd inc_edges = Gather(tape.edges, topo.inc_edge);
  grad->edge_channel += ChannelGrad(d_edge_chan, inc_edges);
  ScatterAdd(*d_edges, topo.inc_edge, Channel(d_edge_chan, model.edge_channel));

  const MatrixXd d_weighted = d_transform_in.rightCols(d);
  const MatrixXd d_attn =
      (d_weighted.array() * tape.nbr_chan.array()).rowwise().sum().matrix();
  const MatrixXd d_nbr_chan =
      (d_weighted.array().colwise() * tape.attn.col(0).array()).matrix();
  grad->node_channel += ChannelGrad(d_nbr_chan, tape.v_nbr);
  MatrixXd d_v_nbr = Channel(d_nbr_chan, model.node_channel);

  const MatrixXd d_attn_in =
      model.attention.Backward(tape.attention, d_attn, &grad->attention);
  d_v_nbr += d_attn_in.rightCols(d);
  ScatterAdd(*d_nodes, topo.inc_self, d_attn_in.leftCols(d));
  ScatterAdd(*d_nodes, topo.inc_nbr, d_v_nbr);
}

MatrixXd EdgeConvForward(const Topology& topo, const MatrixXd& nodes,
                         const MatrixXd& edges, const GnnModel& model,
                         EdgeConvTape* tape) {
  MatrixXd input = HStack(Channel(Gather(nodes, topo.src), model.node_channel),
                          Channel(Gather(nodes, topo.tgt), model.node_channel),
                          Channel(edges, model.edge_channel));
  MatrixXd updated = model.edge_update.Forward(input, tape ? &tape->update : nullptr);
  if (tape != nullptr) {
    tape->nodes = nodes;
    tape->edges = edges;
  }
  return updated;
}

void EdgeConvBackward(const Topology& topo, const EdgeConvTape& tape,
                      const MatrixXd& d_updated, const GnnModel& model, GnnModel* grad,
                      MatrixXd* d_nodes, MatrixXd* d_edges) {
  const int d = model.latent_dim();
  const MatrixXd d_in =
      model.edge_update.Backward(tape.update, d_updated, &grad->edge_update);
  const MatrixXd d_src = d_in.leftCols(d);
  const MatrixXd d_tgt = d_in.middleCols(d, d);
  const MatrixXd d_edge = d_in.rightCols(d);
  grad->node_channel += ChannelGrad(d_src, Gather(tape.nodes, topo.src));
  grad->node_channel += ChannelGrad(d_tgt, Gather(tape.nodes, topo.tgt));
  grad->edge_channel += ChannelGrad(d_edge, tape.edges);
  ScatterAdd(*d_nodes, topo.src, Channel(d_src, model.node_channel));
  ScatterAdd(*d_nodes, topo.tgt, Channel(d_tgt, model.node_channel));
  *d_edges += Channel(d_edge, model.edge_channel);
}

MatrixXd EdgeWeights(const BipartiteGraph& graph) {
  MatrixXd w(graph.num_edges(), 1);
  for (int e = 0; e < graph.num_edges(); ++e) w(e, 0) = graph.edges()[e].weight;
  return w;
}

LatentGraph EmptyLatent(const BipartiteGraph& graph, int latent_dim) {
  LatentGraph latent;
  latent.num_sources = graph.num_sources();
  const int n = graph.num_sources();
  for (const Edge& e : graph.edges()) {
    latent.edge_source.push_back(e.source);
    latent.edge_target.push_back(n + e.target);
  }
  latent.nodes = MatrixXd::Zero(n + graph.num_targets(), latent_dim);
  return latent;
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

EdgeScores ScoresFromLogits(const LatentGraph& latent, const MatrixXd& logits) {
  EdgeScores scores;
  scores.edges.reserve(latent.edge_source.size());
  for (size_t e = 0; e < latent.edge_source.size(); ++e) {
    // Clamp the logit so the score stays strictly inside (0,1) in doubles.
    const double z = std::clamp(logits(static_cast<Eigen::Index>(e), 0), -36.0, 36.0);
    scores.edges.push_back({latent.edge_source[e],
                            latent.edge_target[e] - latent.num_sources, Sigmoid(z)});
  }
  return scores;
}

std::vector<double> ScoreValues(const EdgeScores& scores) {
  std::vector<double> out;
  out.reserve(scores.edges.size());
  for (const ScoredEdge& e : scores.edges) out.push_back(e.score);
  return out;
}

}  // namespace

void GnnConfig::Validate() const {
  if (latent_dim <= 0) throw InvalidConfig("latent_dim must be positive");
  if (mlp_hidden <= 0) throw InvalidConfig("mlp_hidden must be positive");
  if (conv_iterations < 2) throw InvalidConfig("conv_iterations must be >= 2");
  if (epochs < 0) throw InvalidConfig("epochs must be >= 0");
  if (!(lr_initial > 0.0)) throw InvalidConfig("lr_initial must be positive");
  if (!(lr_decay >= 0.0 && lr_decay < 1.0)) throw InvalidConfig("lr_decay must be in [0,1)");
  if (decay_every <= 0) throw InvalidConfig("decay_every must be positive");
  if (!(loss_balance_w > 0.0 && loss_balance_w < 1.0)) {
    throw InvalidConfig("loss_balance_w must be in (0,1)");
  }
}

double GnnConfig::LearningRate(int epoch) const {
  return lr_initial * std::pow(1.0 - lr_decay, epoch / decay_every);
}

GnnModel GnnModel::Create(const GnnConfig& config) {
  config.Validate();
  std::mt19937_64 rng(config.seed);
  const int d = config.latent_dim;
  const int h = config.mlp_hidden;
  GnnModel model;
  model.encoder = Mlp::Create(1, h, d, Mlp::Output::kLinear, rng);
  model.edge_update = Mlp::Create(3 * d, h, d, Mlp::Output::kLinear, rng);
  model.node_transform = Mlp::Create(2 * d, h, d, Mlp::Output::kLinear, rng);
  model.node_update = Mlp::Create(2 * d, h, d, Mlp::Output::kLinear, rng);
  model.attention = Mlp::Create(2 * d, h, 1, Mlp::Output::kSigmoid, rng);
  model.decoder = Mlp::Create(d, h, 1, Mlp::Output::kLinear, rng);
  model.node_channel = MatrixXd::Ones(d, 1);
  model.edge_channel = MatrixXd::Ones(d, 1);
  return model;
}

GnnModel GnnModel::ZerosLike() const {
  GnnModel z;
  z.encoder = encoder.ZerosLike();
  z.edge_update = edge_update.ZerosLike();
  z.node_transform = node_transform.ZerosLike();
  z.node_update = node_update.ZerosLike();
  z.attention = attention.ZerosLike();
  z.decoder = decoder.ZerosLike();
  z.node_channel = MatrixXd::Zero(node_channel.rows(), 1);
  z.edge_channel = MatrixXd::Zero(edge_channel.rows(), 1);
  return z;
}

bool GnnModel::AllFinite() const {
  bool ok = true;
  ForEachParameter([&](std::string_view, std::string_view, const MatrixXd& p) {
    ok = ok && p.allFinite();
  });
  return ok;
}

LatentGraph Encode(const BipartiteGraph& graph, const GnnModel& model) {
  CheckModel(model);
  LatentGraph latent = EmptyLatent(graph, model.latent_dim());
  latent.edges = model.encoder.Forward(EdgeWeights(graph), nullptr);
  return latent;
}

LatentGraph EdgeConv(const LatentGraph& latent, const GnnModel& model) {
  CheckLatent(latent, model);
  Topology topo;
  topo.src = latent.edge_source;
  topo.tgt = latent.edge_target;
  LatentGraph out = latent;
  out.edges = EdgeConvForward(topo, latent.nodes, latent.edges, model, nullptr);
  return out;
}

LatentGraph NodeConv(const LatentGraph& latent, const GnnModel& model) {
  CheckLatent(latent, model);
  const Topology topo = MakeTopology(latent);
  LatentGraph out = latent;
  out.nodes = NodeConvForward(topo, latent.nodes, latent.edges, model, nullptr);
  return out;
}

EdgeScores Decode(const LatentGraph& latent, const GnnModel& model) {
  CheckLatent(latent, model);
  return ScoresFromLogits(latent, model.decoder.Forward(latent.edges, nullptr));
}

EdgeScores Forward(const BipartiteGraph& graph, const GnnModel& model,
                   const GnnConfig& config) {
  config.Validate();
  LatentGraph latent = Encode(graph, model);
  const Topology topo = MakeTopology(latent);
  for (int s = 0; s < config.conv_iterations; ++s) {
    latent.nodes = NodeConvForward(topo, latent.nodes, latent.edges, model, nullptr);
    latent.edges = EdgeConvForward(topo, latent.nodes, latent.edges, model, nullptr);
  }
  return Decode(latent, model);
}

Matching DecodeAssignment(const EdgeScores& scores, const CostMatrix& cost) {
  std::vector<ScoredEdge> candidates;
  candidates.reserve(scores.edges.size());
  for (const ScoredEdge& e : scores.edges) {
    if (e.source < 0 || e.source >= cost.rows() || e.target < 0 ||
        e.target >= cost.cols()) {
      throw IndexError("scored edge outside the cost matrix");
    }
    if (cost.feasible(e.source, e.target)) candidates.push_back(e);
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](const ScoredEdge& a, const ScoredEdge& b) {
              if (a.score != b.score) return a.score > b.score;
              const double ca = cost(a.source, a.target);
              const double cb = cost(b.source, b.target);
              if (ca != cb) return ca < cb;
              if (a.source != b.source) return a.source < b.source;
              return a.target < b.target;
            });
  const int n = cost.rows();
  std::vector<int> target_of(n, -1);
  std::vector<int> source_of(cost.cols(), -1);
  int matched = 0;
  for (const ScoredEdge& e : candidates) {
    if (target_of[e.source] >= 0 || source_of[e.target] >= 0) continue;
    target_of[e.source] = e.target;
    source_of[e.target] = e.source;
    if (++matched == n) break;
  }

  // Repair: greedy can strand a source whose remaining targets are all taken
  // (or infeasible) even though a complete matching exists. Each stranded
  // source is matched along a shortest alternating path, trying targets in
  // score order.
  if (matched < n) {
    std::vector<std::vector<int>> adjacency(n);
    for (const ScoredEdge& e : candidates) adjacency[e.source].push_back(e.target);
    std::vector<int> parent(cost.cols());
    std::vector<int> queue;
    for (int s = 0; s < n; ++s) {
      if (target_of[s] >= 0) continue;
      std::fill(parent.begin(), parent.end(), -1);
      queue.assign(1, s);
      int free_target = -1;
      for (size_t head = 0; head < queue.size() && free_target < 0; ++head) {
        const int u = queue[head];
        for (int t : adjacency[u]) {
          if (parent[t] >= 0) continue;
          parent[t] = u;
          if (source_of[t] < 0) {
            free_target = t;
            break;
          }
          queue.push_back(source_of[t]);
        }
      }
      if (free_target < 0) {
        throw NoFeasibleAssignment("no complete matching over the feasible edges");
      }
      for (int t = free_target; t >= 0;) {
        const int u = parent[t];
        const int previous = target_of[u];
        target_of[u] = t;
        source_of[t] = u;
        t = previous;
      }
    }
  }
  Matching matching;
  for (int s = 0; s < n; ++s) matching.pairs.push_back({s, target_of[s]});
  std::sort(matching.pairs.begin(), matching.pairs.end());
  matching.total_weight = MatchingWeight(matching.pairs, cost);
  return matching;
}

double BalancedBceLoss(std::span<const double> scores, std::span<const double> labels,
                       double w) {
  if (scores.size() != labels.size()) {
    throw DimensionMismatch("scores and labels differ in length");
  }
  double loss = 0.0;
  for (size_t k = 0; k < scores.size(); ++k) {
    const double y = std::clamp(scores[k], kScoreEpsilon, 1.0 - kScoreEpsilon);
    const double g = labels[k];
    loss -= w * g * std::log(y) + (1.0 - w) * (1.0 - g) * std::log(1.0 - y);
  }
  return loss;
}

double BalancedBceLoss(const EdgeScores& scores, std::span<const double> labels,
                       double w) {
  return BalancedBceLoss(ScoreValues(scores), labels, w);
}

std::vector<double> EdgeLabels(const BipartiteGraph& graph, const Matching& matching) {
  const std::vector<int> target_of = matching.TargetsBySource(graph.num_sources());
  std::vector<double> labels;
  labels.reserve(graph.num_edges());
  for (const Edge& e : graph.edges()) {
    labels.push_back(target_of[e.source] == e.target ? 1.0 : 0.0);
  }
  return labels;
}

std::vector<TrainingSample> GenerateTrainingSet(int count, SizeRange rows,
                                                SizeRange cols, uint64_t seed) {
  if (rows.min < 1 || rows.max < rows.min || cols.max < cols.min || cols.max < rows.max) {
    throw ShapeError("training set ranges must satisfy 1 <= n <= m");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TrainingSample> samples;
  samples.reserve(std::max(count, 0));
  for (int k = 0; k < count; ++k) {
    const int n = std::uniform_int_distribution<int>(rows.min, rows.max)(rng);
    const int m = std::uniform_int_distribution<int>(std::max(n, cols.min), cols.max)(rng);
    std::vector<double> values(static_cast<size_t>(n) * m);
    for (double& v : values) {
      do {
        v = unit(rng);
      } while (v == 0.0);
    }
    TrainingSample sample{CostMatrix(n, m, std::move(values)), {}};
    sample.ground_truth = SolveRlap(sample.cost);
    samples.push_back(std::move(sample));
  }
  return samples;
}

void WriteTrainingSamples(std::ostream& out, std::span<const TrainingSample> samples) {
  out << "cfedit-samples " << kSamplesVersion << ' ' << samples.size() << '\n';
  for (size_t k = 0; k < samples.size(); ++k) {
    out << "sample " << k << '\n';
    WriteCostMatrix(out, samples[k].cost);
    WriteMatching(out, samples[k].ground_truth, samples[k].cost);
  }
}

std::vector<TrainingSample> ReadTrainingSamples(std::istream& in) {
  std::ostringstream body;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] == '#') continue;
    body << line << '\n';
  }
  std::istringstream text(body.str());
  std::string tag;
  int version = 0;
  size_t count = 0;
  if (!(text >> tag >> version >> count) || tag != "cfedit-samples") {
    throw ParseError("not a training sample file");
  }
  if (version != kSamplesVersion) {
    throw ParseError("unsupported sample file version " + std::to_string(version));
  }
  std::vector<TrainingSample> samples;
  samples.reserve(std::min<size_t>(count, 1 << 20));
  for (size_t k = 0; k < count; ++k) {
    size_t index = 0;
    if (!(text >> tag >> index) || tag != "sample" || index != k) {
      throw ParseError("expected 'sample " + std::to_string(k) + "'");
    }
    TrainingSample sample;
    sample.cost = ReadCostMatrix(text);
    text >> std::ws;
    sample.ground_truth = ReadMatching(text, sample.cost.rows());
    if (!IsValidMatching(sample.ground_truth, sample.cost) ||
        sample.ground_truth.size() != sample.cost.rows()) {
      throw ParseError("sample " + std::to_string(k) + " has an invalid matching");
    }
    samples.push_back(std::move(sample));
  }
  return samples;
}

LossAndGradient ComputeLossAndGradient(const BipartiteGraph& graph,
                                       std::span<const double> labels,
                                       const GnnModel& model, const GnnConfig& config) {
  config.Validate();
  CheckModel(model);
  if (labels.size() != static_cast<size_t>(graph.num_edges())) {
    throw DimensionMismatch("one label per edge required");
  }
  const double w = config.loss_balance_w;
  const int iterations = config.conv_iterations;

  LatentGraph latent = EmptyLatent(graph, model.latent_dim());
  const Topology topo = MakeTopology(latent);
  Mlp::Tape encoder_tape;
  latent.edges = model.encoder.Forward(EdgeWeights(graph), &encoder_tape);

  std::vector<NodeConvTape> node_tapes(iterations);
  std::vector<EdgeConvTape> edge_tapes(iterations);
  for (int s = 0; s < iterations; ++s) {
    latent.nodes = NodeConvForward(topo, latent.nodes, latent.edges, model, &node_tapes[s]);
    latent.edges = EdgeConvForward(topo, latent.nodes, latent.edges, model, &edge_tapes[s]);
  }
  Mlp::Tape decoder_tape;
  const MatrixXd logits = model.decoder.Forward(latent.edges, &decoder_tape);

  LossAndGradient result;
  result.scores = ScoresFromLogits(latent, logits);
  result.loss = BalancedBceLoss(result.scores, labels, w);
  result.gradient = model.ZerosLike();
  GnnModel& grad = result.gradient;

  // d loss / d logit for a sigmoid output: -(w g (1 - y) - (1 - w)(1 - g) y).
  MatrixXd d_logits(graph.num_edges(), 1);
  for (int e = 0; e < graph.num_edges(); ++e) {
    const double y = result.scores.edges[e].score;
    const double g = labels[e];
    d_logits(e, 0) = -(w * g * (1.0 - y) - (1.0 - w) * (1.0 - g) * y);
  }

  MatrixXd d_edges = model.decoder.Backward(decoder_tape, d_logits, &grad.decoder);
  MatrixXd d_nodes = MatrixXd::Zero(latent.nodes.rows(), latent.nodes.cols());
  for (int s = iterations - 1; s >= 0; --s) {
    MatrixXd d_nodes_in = MatrixXd::Zero(d_nodes.rows(), d_nodes.cols());
    MatrixXd d_edges_in = MatrixXd::Zero(d_edges.rows(), d_edges.cols());
    EdgeConvBackward(topo, edge_tapes[s], d_edges, model, &grad, &d_nodes, &d_edges_in);
    NodeConvBackward(topo, node_tapes[s], d_nodes, model, &grad, &d_nodes_in, &d_edges_in);
    d_nodes = std::move(d_nodes_in);
    d_edges = std::move(d_edges_in);
  }
  // Initial node attributes are constant zeros; only the encoder gets d_edges.
  model.encoder.Backward(encoder_tape, d_edges, &grad.encoder);
  return result;
}

double MeanOptimalityRatio(const GnnModel& model, const GnnConfig& config,
                           std::span<const TrainingSample> samples) {
  if (samples.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (const TrainingSample& s : samples) {
    const BipartiteGraph graph = CostToGraph(s.cost);
    const Matching decoded = DecodeAssignment(Forward(graph, model, config), s.cost);
    sum += decoded.total_weight / s.ground_truth.total_weight;
  }
  return sum / static_cast<double>(samples.size());
}

TrainingResult Train(const GnnConfig& config, std::span<const TrainingSample> data,
                     std::span<const TrainingSample> heldout,
                     const std::function<void(const EpochStats&)>& on_epoch) {
  config.Validate();
  if (data.empty()) throw InvalidConfig("training needs at least one sample");

  std::vector<BipartiteGraph> graphs;
  std::vector<std::vector<double>> labels;
  graphs.reserve(data.size());
  labels.reserve(data.size());
  for (const TrainingSample& s : data) {
    graphs.push_back(CostToGraph(s.cost));
    labels.push_back(EdgeLabels(graphs.back(), s.ground_truth));
  }

  TrainingResult result;
  result.model = GnnModel::Create(config);
  GnnModel& model = result.model;
  result.initial_heldout_ratio = MeanOptimalityRatio(model, config, heldout);

  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = config.LearningRate(epoch);
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    for (size_t idx : order) {
      LossAndGradient lg = ComputeLossAndGradient(graphs[idx], labels[idx], model, config);
      if (!std::isfinite(lg.loss)) {
        throw DivergenceError("non-finite loss in epoch " + std::to_string(epoch + 1));
      }
      loss_sum += lg.loss;
      // SGD step: walk both parameter lists in the same fixed order.
      std::vector<const MatrixXd*> grads;
      lg.gradient.ForEachParameter(
          [&](std::string_view, std::string_view, const MatrixXd& g) { grads.push_back(&g); });
      size_t k = 0;
      model.ForEachParameter(
          [&](std::string_view, std::string_view, MatrixXd& p) { p -= lr * *grads[k++]; });
    }
    if (!model.AllFinite()) {
      throw DivergenceError("non-finite parameter after epoch " + std::to_string(epoch + 1));
    }
    EpochStats stats;
    stats.epoch = epoch + 1;
    stats.lr = lr;
    stats.mean_loss = loss_sum / static_cast<double>(data.size());
    stats.heldout_ratio = MeanOptimalityRatio(model, config, heldout);
    result.epochs.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return result;
}

GnnModel TrainModel(const GnnConfig& config, std::span<const TrainingSample> data) {
  return Train(config, data).model;
}

void WriteTrainingLog(std::ostream& out, std::span<const EpochStats> epochs) {
  out << "epoch,lr,mean_loss,heldout_optimality_ratio\n";
  char buf[160];
  for (const EpochStats& s : epochs) {
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%.10g\n", s.epoch, s.lr,
                  s.mean_loss, s.heldout_ratio);
    out << buf;
  }
}

void SaveCheckpoint(std::ostream& out, const GnnModel& model, const GnnConfig& config) {
  nlohmann::ordered_json doc;
  doc["format"] = kCheckpointFormat;
  doc["version"] = kCheckpointVersion;
  doc["config"] = {
      {"latent_dim", config.latent_dim},     {"conv_iterations", config.conv_iterations},
      {"mlp_hidden", config.mlp_hidden},     {"epochs", config.epochs},
      {"lr_initial", config.lr_initial},     {"lr_decay", config.lr_decay},
      {"decay_every", config.decay_every},   {"loss_balance_w", config.loss_balance_w},
      {"seed", config.seed},
  };
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  model.ForEachParameter([&](std::string_view group, std::string_view name,
                             const MatrixXd& p) {
    std::vector<double> data;
    data.reserve(p.size());
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
      for (Eigen::Index c = 0; c < p.cols(); ++c) data.push_back(p(r, c));
    }
    params[std::string(group) + "." + std::string(name)] = {
        {"rows", p.rows()}, {"cols", p.cols()}, {"data", std::move(data)}};
  });
  doc["parameters"] = std::move(params);
  out << doc.dump(1) << '\n';
}

void SaveCheckpoint(const std::filesystem::path& path, const GnnModel& model,
                    const GnnConfig& config) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  SaveCheckpoint(out, model, config);
}

Checkpoint LoadCheckpoint(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kCheckpointFormat) {
      throw ParseError("not a GNN checkpoint");
    }
    const int version = doc.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw ParseError("unsupported checkpoint version " + std::to_string(version));
    }
    Checkpoint ckpt;
    const auto& c = doc.at("config");
    ckpt.config.latent_dim = c.at("latent_dim").get<int>();
    ckpt.config.conv_iterations = c.at("conv_iterations").get<int>();
    ckpt.config.mlp_hidden = c.at("mlp_hidden").get<int>();
    ckpt.config.epochs = c.at("epochs").get<int>();
    ckpt.config.lr_initial = c.at("lr_initial").get<double>();
    ckpt.config.lr_decay = c.at("lr_decay").get<double>();
    ckpt.config.decay_every = c.at("decay_every").get<int>();
    ckpt.config.loss_balance_w = c.at("loss_balance_w").get<double>();
    ckpt.config.seed = c.at("seed").get<uint64_t>();
    ckpt.model = GnnModel::Create(ckpt.config);
    const auto& params = doc.at("parameters");
    ckpt.model.ForEachParameter([&](std::string_view group, std::string_view name,
                                    MatrixXd& p) {
      const std::string key = std::string(group) + "." + std::string(name);
      const auto& entry = params.at(key);
      const auto data = entry.at("data").get<std::vector<double>>();
      if (entry.at("rows").get<Eigen::Index>() != p.rows() ||
          entry.at("cols").get<Eigen::Index>() != p.cols() ||
          data.size() != static_cast<size_t>(p.size())) {
        throw ParseError("shape mismatch for parameter " + key);
      }
      size_t k = 0;
      for (Eigen::Index r = 0; r < p.rows(); ++r) {
        for (Eigen::Index col = 0; col < p.cols(); ++col) p(r, col) = data[k++];
      }
    });
    if (!ckpt.model.AllFinite()) throw ParseError("checkpoint has non-finite parameters");
    return ckpt;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what());
  } catch (const InvalidConfig& e) {
    throw ParseError(std::string("checkpoint config invalid: ") + e.what());
  }
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return LoadCheckpoint(in);
}

}  // namespace cfedit
