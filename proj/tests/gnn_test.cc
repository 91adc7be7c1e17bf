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

#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cfedit/errors.h"
#include "gtest/gtest.h"

namespace cfedit {
namespace {

using Eigen::MatrixXd;
using Vec = std::vector<double>;

// Scalar reference of an Mlp: loops instead of matrix products.
Vec RefMlp(const Mlp& mlp, const Vec& x) {
  Vec hidden(mlp.hidden_dim());
  for (int h = 0; h < mlp.hidden_dim(); ++h) {
    double z = mlp.b1(h, 0);
    for (int i = 0; i < mlp.input_dim(); ++i) z += mlp.w1(h, i) * x[i];
    hidden[h] = std::tanh(z);
  }
  Vec out(mlp.output_dim());
  for (int o = 0; o < mlp.output_dim(); ++o) {
    double z = mlp.b2(o, 0);
    for (int h = 0; h < mlp.hidden_dim(); ++h) z += mlp.w2(o, h) * hidden[h];
    out[o] = mlp.output == Mlp::Output::kSigmoid ? 1.0 / (1.0 + std::exp(-z)) : z;
  }
  return out;
}

Vec Row(const MatrixXd& m, int r) {
  Vec v(m.cols());
  for (int c = 0; c < m.cols(); ++c) v[c] = m(r, c);
  return v;
}

Vec Mul(const Vec& a, const MatrixXd& channel) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * channel(i, 0);
  return out;
}

Vec Cat(const Vec& a, const Vec& b) {
  Vec out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

GnnModel RandomizedModel(int latent, int hidden, uint64_t seed) {
  GnnConfig config;
  config.latent_dim = latent;
  config.mlp_hidden = hidden;
  config.seed = seed;
  GnnModel model = GnnModel::Create(config);
  std::mt19937_64 rng(seed + 100);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  // Non-trivial biases and channel vectors so every parameter matters.
  model.ForEachParameter([&](std::string_view, std::string_view name, MatrixXd& p) {
    if (name == "b1" || name == "b2") {
      for (int i = 0; i < p.size(); ++i) p.data()[i] = dist(rng) - 1.0;
    }
  });
  for (int i = 0; i < latent; ++i) {
    model.node_channel(i, 0) = dist(rng);
    model.edge_channel(i, 0) = dist(rng);
  }
  return model;
}

BipartiteGraph RandomGraph(int n, int m, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) edges.push_back({i, j, dist(rng)});
  }
  return BipartiteGraph(std::vector<std::string>(n, "s"), std::vector<std::string>(m, "t"),
                        edges);
}

TEST(GnnConfigTest, Defaults) {
  const GnnConfig config;
  EXPECT_EQ(config.latent_dim, 16);
  EXPECT_EQ(config.conv_iterations, 2);
  EXPECT_EQ(config.mlp_hidden, 32);
  EXPECT_EQ(config.epochs, 20);
  EXPECT_DOUBLE_EQ(config.lr_initial, 0.003);
  EXPECT_DOUBLE_EQ(config.loss_balance_w, 0.9);
}

TEST(GnnConfigTest, LearningRateSchedule) {
  const GnnConfig config;
  EXPECT_DOUBLE_EQ(config.LearningRate(0), 0.003);
  EXPECT_DOUBLE_EQ(config.LearningRate(4), 0.003);
  EXPECT_NEAR(config.LearningRate(5), 0.00285, 1e-15);
  EXPECT_NEAR(config.LearningRate(19), 0.003 * std::pow(0.95, 3), 1e-15);
}

TEST(GnnConfigTest, Validation) {
  GnnConfig config;
  config.conv_iterations = 1;
  EXPECT_THROW(config.Validate(), InvalidConfig);
  config = GnnConfig();
  config.loss_balance_w = 1.0;
  EXPECT_THROW(config.Validate(), InvalidConfig);
}

TEST(GnnModelTest, ChannelVectorsHaveLatentWidth) {
  const GnnModel model = GnnModel::Create(GnnConfig());
  EXPECT_EQ(model.node_channel.rows(), 16);
  EXPECT_EQ(model.edge_channel.rows(), 16);
  EXPECT_EQ(model.edge_update.input_dim(), 3 * 16);
  EXPECT_TRUE(model.AllFinite());
}

TEST(EncodeTest, NodesStartAtZero) {
  const GnnModel model = RandomizedModel(4, 6, 1);
  const LatentGraph latent = Encode(RandomGraph(2, 3, 1), model);
  EXPECT_EQ(latent.nodes.rows(), 5);
  EXPECT_TRUE(latent.nodes.isZero(0.0));
  EXPECT_EQ(latent.edges.rows(), 6);
}

TEST(EncodeTest, EqualWeightsGiveEqualAttributes) {
  const GnnModel model = RandomizedModel(4, 6, 2);
  const BipartiteGraph g({"a", "b"}, {"x", "y"},
                         {{0, 0, 0.3}, {0, 1, 0.3}, {1, 0, 0.3}, {1, 1, 0.3}});
  const LatentGraph latent = Encode(g, model);
  for (int e = 1; e < 4; ++e) EXPECT_EQ(latent.edges.row(e), latent.edges.row(0));
  const LatentGraph again = Encode(g, model);
  EXPECT_EQ(again.edges, latent.edges);
}

TEST(EdgeConvTest, HandTranscriptSingleEdge) {
  GnnConfig config;
  config.latent_dim = 2;
  config.mlp_hidden = 2;
  GnnModel model = GnnModel::Create(config);
  model.node_channel << 1.0, 0.5;
  model.edge_channel << 0.5, 2.0;
  Mlp& rho = model.edge_update;
  rho.w1 << 0.1, -0.2, 0.3, 0.0, 0.5, -0.1,
            -0.4, 0.2, 0.1, 0.3, -0.2, 0.6;
  rho.b1 << 0.05, -0.1;
  rho.w2 << 1.0, -0.5,
            0.3, 0.8;
  rho.b2 << 0.0, 0.2;

  LatentGraph latent;
  latent.num_sources = 1;
  latent.edge_source = {0};
  latent.edge_target = {1};
  latent.nodes.resize(2, 2);
  latent.nodes << 0.1, -0.2,
                  0.3, 0.05;
  latent.edges.resize(1, 2);
  latent.edges << 0.4, -0.1;

  // Input [v_s*c_u, v_t*c_u, e*c_e] = [0.1, -0.1, 0.3, 0.025, 0.2, -0.2].
  const double h0 = std::tanh(0.05 + 0.1 * 0.1 - 0.2 * -0.1 + 0.3 * 0.3 + 0.0 * 0.025 +
                              0.5 * 0.2 - 0.1 * -0.2);
  const double h1 = std::tanh(-0.1 - 0.4 * 0.1 + 0.2 * -0.1 + 0.1 * 0.3 + 0.3 * 0.025 -
                              0.2 * 0.2 + 0.6 * -0.2);
  const double y0 = 1.0 * h0 - 0.5 * h1 + 0.0;
  const double y1 = 0.3 * h0 + 0.8 * h1 + 0.2;

  const LatentGraph out = EdgeConv(latent, model);
  ASSERT_EQ(out.edges.rows(), 1);
  EXPECT_NEAR(out.edges(0, 0), y0, 1e-14);
  EXPECT_NEAR(out.edges(0, 1), y1, 1e-14);
  EXPECT_EQ(out.nodes, latent.nodes);
}

TEST(EdgeConvTest, RejectsWidthMismatch) {
  const GnnModel model = RandomizedModel(4, 6, 3);
  LatentGraph latent = Encode(RandomGraph(1, 2, 3), model);
  latent.edges = MatrixXd::Zero(2, 3);
  EXPECT_THROW(EdgeConv(latent, model), DimensionMismatch);
}

TEST(NodeConvTest, TranscriptDenseTwoByTwo) {
  const GnnModel model = RandomizedModel(2, 3, 4);
  LatentGraph latent;
  latent.num_sources = 2;
  latent.edge_source = {0, 0, 1, 1};
  latent.edge_target = {2, 3, 2, 3};
  latent.nodes.resize(4, 2);
  latent.nodes << 0.1, -0.3, 0.4, 0.2, -0.5, 0.05, 0.25, 0.6;
  latent.edges.resize(4, 2);
  latent.edges << 0.3, 0.1, -0.2, 0.4, 0.05, -0.35, 0.7, 0.2;

  // Per node: mean over incident edges of
  //   node_transform([e*c_e, tau(v_i, v_j) * (v_j*c_u)])
  // then node_update([mean, v_i]).
  std::vector<Vec> expected(4);
  for (int i = 0; i < 4; ++i) {
    Vec sum(2, 0.0);
    int count = 0;
    for (int e = 0; e < 4; ++e) {
      int j = -1;
      if (latent.edge_source[e] == i) j = latent.edge_target[e];
      if (latent.edge_target[e] == i) j = latent.edge_source[e];
      if (j < 0) continue;
      const Vec vi = Row(latent.nodes, i);
      const Vec vj = Row(latent.nodes, j);
      const double a = RefMlp(model.attention, Cat(vi, vj))[0];
      Vec weighted = Mul(vj, model.node_channel);
      for (double& x : weighted) x *= a;
      const Vec msg = RefMlp(model.node_transform,
                             Cat(Mul(Row(latent.edges, e), model.edge_channel), weighted));
      for (int k = 0; k < 2; ++k) sum[k] += msg[k];
      ++count;
    }
    for (double& x : sum) x /= count;
    expected[i] = RefMlp(model.node_update, Cat(sum, Row(latent.nodes, i)));
  }

  const LatentGraph out = NodeConv(latent, model);
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(out.nodes(i, k), expected[i][k], 1e-13);
  }
  EXPECT_EQ(out.edges, latent.edges);
}

TEST(NodeConvTest, IdenticalNeighboursAverageToOne) {
  const GnnModel model = RandomizedModel(3, 4, 5);
  // Source 0 sees three identical targets through identical edges.
  LatentGraph three;
  three.num_sources = 1;
  three.edge_source = {0, 0, 0};
  three.edge_target = {1, 2, 3};
  three.nodes = MatrixXd::Zero(4, 3);
  three.nodes.row(0) << 0.2, -0.1, 0.3;
  for (int t = 1; t <= 3; ++t) three.nodes.row(t) << 0.5, 0.4, -0.2;
  three.edges = MatrixXd::Zero(3, 3);
  for (int e = 0; e < 3; ++e) three.edges.row(e) << 0.1, 0.2, 0.3;

  LatentGraph one;
  one.num_sources = 1;
  one.edge_source = {0};
  one.edge_target = {1};
  one.nodes = three.nodes.topRows(2);
  one.edges = three.edges.topRows(1);

  const MatrixXd a = NodeConv(three, model).nodes;
  const MatrixXd b = NodeConv(one, model).nodes;
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(a(0, k), b(0, k), 1e-14);
}

TEST(NodeConvTest, IsolatedNodeThrows) {
  const GnnModel model = RandomizedModel(2, 2, 6);
  const BipartiteGraph g({"a"}, {"x", "y"}, {{0, 0, 0.5}});
  const LatentGraph latent = Encode(g, model);
  EXPECT_THROW(NodeConv(latent, model), IsolatedNode);
  GnnConfig config;
  config.latent_dim = 2;
  config.mlp_hidden = 2;
  EXPECT_THROW(Forward(g, model, config), IsolatedNode);
}

TEST(ConvolutionTest, TwoIterationsReachEveryNode) {
  const GnnModel model = RandomizedModel(4, 6, 7);
  auto run = [&](const BipartiteGraph& g) {
    LatentGraph latent = Encode(g, model);
    for (int s = 0; s < 2; ++s) latent = EdgeConv(NodeConv(latent, model), model);
    return latent.nodes;
  };
  const BipartiteGraph g = RandomGraph(3, 4, 8);
  const MatrixXd base = run(g);
  for (int e = 0; e < g.num_edges(); ++e) {
    std::vector<Edge> edges = g.edges();
    edges[e].weight += 0.25;
    const MatrixXd moved = run(BipartiteGraph(g.source_words(), g.target_words(), edges));
    for (int v = 0; v < base.rows(); ++v) {
      EXPECT_GT((moved.row(v) - base.row(v)).norm(), 0.0) << "edge " << e << " node " << v;
    }
  }
}

TEST(DecodeTest, ScoresInsideUnitInterval) {
  GnnConfig config;
  const GnnModel model = GnnModel::Create(config);
  const BipartiteGraph g = RandomGraph(5, 8, 9);
  const EdgeScores scores = Forward(g, model, config);
  ASSERT_EQ(static_cast<int>(scores.edges.size()), g.num_edges());
  for (size_t e = 0; e < scores.edges.size(); ++e) {
    EXPECT_GT(scores.edges[e].score, 0.0);
    EXPECT_LT(scores.edges[e].score, 1.0);
    EXPECT_EQ(scores.edges[e].source, g.edges()[e].source);
    EXPECT_EQ(scores.edges[e].target, g.edges()[e].target);
  }
  const EdgeScores again = Forward(g, model, config);
  for (size_t e = 0; e < scores.edges.size(); ++e) {
    EXPECT_EQ(scores.edges[e].score, again.edges[e].score);
  }
}

TEST(DecodeTest, IdenticalEdgesScoreIdentically) {
  const GnnModel model = RandomizedModel(4, 6, 10);
  LatentGraph latent = Encode(RandomGraph(2, 2, 10), model);
  latent.edges.row(1) = latent.edges.row(0);
  const EdgeScores scores = Decode(latent, model);
  EXPECT_EQ(scores.edges[0].score, scores.edges[1].score);
}

TEST(ForwardTest, ExtremeWeightsStayValid) {
  GnnConfig config;
  const GnnModel model = RandomizedModel(16, 32, 11);
  const BipartiteGraph g({"a", "b"}, {"x", "y", "z"},
                         {{0, 0, 1e-9}, {0, 1, 1e6}, {0, 2, 3.0}, {1, 0, 1e3}, {1, 2, 1e-3}});
  for (const ScoredEdge& e : Forward(g, model, config).edges) {
    EXPECT_TRUE(std::isfinite(e.score));
    EXPECT_GT(e.score, 0.0);
    EXPECT_LT(e.score, 1.0);
  }
}

TEST(ForwardTest, PermutationEquivariance) {
  GnnConfig config;
  config.latent_dim = 6;
  config.mlp_hidden = 8;
  const GnnModel model = RandomizedModel(6, 8, 12);
  const BipartiteGraph g = RandomGraph(3, 4, 12);
  const std::vector<int> row_perm = {2, 0, 1};
  const std::vector<int> col_perm = {3, 1, 0, 2};
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    edges.push_back({row_perm[e.source], col_perm[e.target], e.weight});
  }
  std::sort(edges.begin(), edges.end());
  const BipartiteGraph h(g.source_words(), g.target_words(), edges);
  const EdgeScores a = Forward(g, model, config);
  const EdgeScores b = Forward(h, model, config);
  std::map<std::pair<int, int>, double> by_pair;
  for (const ScoredEdge& e : b.edges) by_pair[{e.source, e.target}] = e.score;
  for (const ScoredEdge& e : a.edges) {
    EXPECT_NEAR(e.score, (by_pair[{row_perm[e.source], col_perm[e.target]}]), 1e-12);
  }
}

TEST(TrainingSamplesTest, RoundTripAndErrors) {
  const auto samples = GenerateTrainingSet(6, {1, 4}, {4, 6}, 17);
  std::stringstream buffer;
  buffer << "# comment line\n";
  WriteTrainingSamples(buffer, samples);
  const auto back = ReadTrainingSamples(buffer);
  ASSERT_EQ(back.size(), samples.size());
  for (size_t k = 0; k < samples.size(); ++k) {
    EXPECT_EQ(back[k].cost, samples[k].cost);
    EXPECT_EQ(back[k].ground_truth.pairs, samples[k].ground_truth.pairs);
    EXPECT_NEAR(back[k].ground_truth.total_weight, samples[k].ground_truth.total_weight,
                1e-12);
  }
  std::stringstream wrong_version("cfedit-samples 9 0\n");
  EXPECT_THROW(ReadTrainingSamples(wrong_version), ParseError);
  std::stringstream truncated("cfedit-samples 1 1\nsample 0\n2 2\n0.1 0.2\n");
  EXPECT_THROW(ReadTrainingSamples(truncated), ParseError);
  std::stringstream bad_pair("cfedit-samples 1 1\nsample 0\n1 2\n0.1 0.2\n0 5 0.1\n");
  EXPECT_THROW(ReadTrainingSamples(bad_pair), ParseError);
}

TEST(DecodeAssignmentTest, CleanMaxima) {
  const CostMatrix cost(2, 3, 0.5);
  EdgeScores scores;
  scores.edges = {{0, 0, 0.1}, {0, 1, 0.9}, {0, 2, 0.2},
                  {1, 0, 0.8}, {1, 1, 0.3}, {1, 2, 0.1}};
  const Matching m = DecodeAssignment(scores, cost);
  EXPECT_EQ(m.pairs, (std::vector<Assignment>{{0, 1}, {1, 0}}));
  EXPECT_DOUBLE_EQ(m.total_weight, 1.0);
}

TEST(DecodeAssignmentTest, ConflictGoesToHigherScore) {
  const CostMatrix cost(2, 3, 0.5);
  EdgeScores scores;
  scores.edges = {{0, 0, 0.7}, {0, 1, 0.4}, {0, 2, 0.1},
                  {1, 0, 0.9}, {1, 1, 0.2}, {1, 2, 0.3}};
  const Matching m = DecodeAssignment(scores, cost);
  EXPECT_EQ(m.pairs, (std::vector<Assignment>{{0, 1}, {1, 0}}));
}

TEST(DecodeAssignmentTest, RepairsStrandedSource) {
  // Greedy gives target 0 to source 1, leaving source 0 with no free
  // feasible target; the repair moves source 1 over to target 1.
  CostMatrix cost(2, 2, 0.5);
  cost.set(0, 1, kInfeasible);
  EdgeScores scores;
  scores.edges = {{0, 0, 0.5}, {0, 1, 0.99}, {1, 0, 0.9}, {1, 1, 0.1}};
  const Matching m = DecodeAssignment(scores, cost);
  EXPECT_EQ(m.pairs, (std::vector<Assignment>{{0, 0}, {1, 1}}));
  cost.set(1, 1, kInfeasible);
  EXPECT_THROW(DecodeAssignment(scores, cost), NoFeasibleAssignment);
}

TEST(DecodeAssignmentTest, CompleteOnDerangementGraphs) {
  // Square graphs without the diagonal, as built from copy-of-source targets.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    CostMatrix cost(n, n);
    EdgeScores scores;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        cost.set(i, j, u(rng));
        scores.edges.push_back({i, j, u(rng)});
      }
    }
    const Matching m = DecodeAssignment(scores, cost);
    EXPECT_TRUE(IsValidMatching(m, cost));
    EXPECT_EQ(m.size(), n);
  }
}

TEST(DecodeAssignmentTest, NeverBeatsTheOptimum) {
  GnnConfig config;
  const GnnModel model = GnnModel::Create(config);
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const BipartiteGraph g = RandomGraph(4, 6, seed);
    const CostMatrix cost = GraphToCost(g);
    const Matching decoded = DecodeAssignment(Forward(g, model, config), cost);
    EXPECT_TRUE(IsValidMatching(decoded, cost));
    EXPECT_EQ(decoded.size(), 4);
    EXPECT_GE(decoded.total_weight, SolveRlap(cost).total_weight - 1e-12);
  }
}

TEST(BalancedBceTest, SingleEdgeFixture) {
  const std::vector<double> y = {0.5};
  const std::vector<double> gt = {1.0};
  // -0.9 * ln(0.5)
  EXPECT_NEAR(BalancedBceLoss(y, gt, 0.9), 0.6238324625039507, 1e-12);
}

TEST(BalancedBceTest, HalfWeightIsHalvedBce) {
  const std::vector<double> y = {0.2, 0.7, 0.9, 0.4};
  const std::vector<double> gt = {0.0, 1.0, 0.0, 1.0};
  double bce = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    bce -= gt[i] * std::log(y[i]) + (1 - gt[i]) * std::log(1 - y[i]);
  }
  EXPECT_NEAR(BalancedBceLoss(y, gt, 0.5), 0.5 * bce, 1e-12);
}

TEST(BalancedBceTest, PerfectPredictionsNearZero) {
  const std::vector<double> y = {1.0, 0.0, 0.0};
  const std::vector<double> gt = {1.0, 0.0, 0.0};
  EXPECT_LE(BalancedBceLoss(y, gt, 0.9), 2 * 3 * -std::log(1 - 1e-7));
  EXPECT_THROW(BalancedBceLoss(y, std::vector<double>{1.0}, 0.9), DimensionMismatch);
}

TEST(TrainingSetTest, DeterministicAndLabelled) {
  const auto a = GenerateTrainingSet(50, {2, 5}, {3, 7}, 21);
  const auto b = GenerateTrainingSet(50, {2, 5}, {3, 7}, 21);
  ASSERT_EQ(a.size(), 50u);
  for (size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].cost, b[k].cost);
    EXPECT_EQ(a[k].ground_truth.pairs, b[k].ground_truth.pairs);
    const BipartiteGraph g = CostToGraph(a[k].cost);
    const std::vector<double> labels = EdgeLabels(g, a[k].ground_truth);
    double positives = 0.0;
    for (double l : labels) positives += l;
    EXPECT_EQ(positives, a[k].cost.rows());
    EXPECT_NEAR(a[k].ground_truth.total_weight, SolveExhaustive(a[k].cost).total_weight,
                1e-9);
  }
}

// Central differences over every parameter entry against the analytic
// gradient, compared per group by relative norm error.
TEST(GradientTest, MatchesFiniteDifferences) {
  GnnConfig config;
  config.latent_dim = 4;
  config.mlp_hidden = 5;
  const GnnModel model = RandomizedModel(4, 5, 31);
  const BipartiteGraph g = RandomGraph(2, 3, 31);
  const Matching gt = SolveRlap(GraphToCost(g));
  const std::vector<double> labels = EdgeLabels(g, gt);

  const LossAndGradient analytic = ComputeLossAndGradient(g, labels, model, config);
  EXPECT_NEAR(analytic.loss,
              BalancedBceLoss(Forward(g, model, config), labels, config.loss_balance_w),
              1e-12);

  std::map<std::string, std::pair<double, double>> error;  // group -> (diff^2, norm^2)
  GnnModel probe = model;
  const double h = 1e-6;
  std::vector<const MatrixXd*> grads;
  analytic.gradient.ForEachParameter(
      [&](std::string_view, std::string_view, const MatrixXd& p) { grads.push_back(&p); });
  int index = 0;
  probe.ForEachParameter([&](std::string_view group, std::string_view, MatrixXd& p) {
    const MatrixXd& grad = *grads[index++];
    for (int i = 0; i < p.size(); ++i) {
      const double saved = p.data()[i];
      p.data()[i] = saved + h;
      const double up =
          BalancedBceLoss(Forward(g, probe, config), labels, config.loss_balance_w);
      p.data()[i] = saved - h;
      const double down =
          BalancedBceLoss(Forward(g, probe, config), labels, config.loss_balance_w);
      p.data()[i] = saved;
      const double numeric = (up - down) / (2 * h);
      auto& [diff, norm] = error[std::string(group)];
      diff += std::pow(numeric - grad.data()[i], 2);
      norm += std::pow(std::abs(numeric) + std::abs(grad.data()[i]), 2);
    }
  });
  ASSERT_EQ(error.size(), 8u);
  for (const auto& [group, e] : error) {
    ASSERT_GT(e.second, 0.0) << group;
    EXPECT_LT(std::sqrt(e.first / e.second), 1e-4) << group;
  }
}

TEST(TrainTest, ImprovesHeldOutRatioAndIsReproducible) {
  GnnConfig config;
  config.epochs = 4;
  config.seed = 3;
  const auto data = GenerateTrainingSet(250, {5, 5}, {8, 8}, 41);
  const auto heldout = GenerateTrainingSet(60, {5, 5}, {8, 8}, 42);
  int calls = 0;
  const TrainingResult a = Train(config, data, heldout, [&](const EpochStats&) { ++calls; });
  EXPECT_EQ(calls, 4);
  ASSERT_EQ(a.epochs.size(), 4u);
  EXPECT_LT(a.epochs.back().heldout_ratio, a.initial_heldout_ratio);
  EXPECT_GE(a.epochs.back().heldout_ratio, 1.0 - 1e-12);
  EXPECT_TRUE(a.model.AllFinite());

  const TrainingResult b = Train(config, data, heldout);
  EXPECT_NEAR(a.epochs.back().mean_loss, b.epochs.back().mean_loss, 1e-6);
  EXPECT_EQ(a.epochs.back().mean_loss, b.epochs.back().mean_loss);

  std::stringstream log;
  WriteTrainingLog(log, a.epochs);
  std::string header;
  std::getline(log, header);
  EXPECT_EQ(header, "epoch,lr,mean_loss,heldout_optimality_ratio");
  int rows = 0;
  for (std::string line; std::getline(log, line);) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(CheckpointTest, RoundTrip) {
  GnnConfig config;
  config.latent_dim = 3;
  config.mlp_hidden = 4;
  config.seed = 9;
  const GnnModel model = RandomizedModel(3, 4, 9);
  std::stringstream buffer;
  SaveCheckpoint(buffer, model, config);
  const Checkpoint back = LoadCheckpoint(buffer);
  EXPECT_EQ(back.config.latent_dim, 3);
  EXPECT_EQ(back.config.seed, 9u);
  std::vector<MatrixXd> a;
  std::vector<MatrixXd> b;
  model.ForEachParameter([&](auto, auto, const MatrixXd& p) { a.push_back(p); });
  back.model.ForEachParameter([&](auto, auto, const MatrixXd& p) { b.push_back(p); });
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(CheckpointTest, RejectsWrongVersion) {
  GnnConfig config;
  std::stringstream buffer;
  SaveCheckpoint(buffer, GnnModel::Create(config), config);
  std::string text = buffer.str();
  const std::string key = "\"version\": 1";
  const size_t at = text.find(key);
  ASSERT_NE(at, std::string::npos);
  text.replace(at, key.size(), "\"version\":99");
  std::stringstream bad(text);
  EXPECT_THROW(LoadCheckpoint(bad), ParseError);
  std::stringstream garbage("not json");
  EXPECT_THROW(LoadCheckpoint(garbage), ParseError);
}

}  // namespace
}  // namespace cfedit
