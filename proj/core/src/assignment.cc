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

#include "cfedit/assignment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>

#include "cfedit/errors.h"

namespace cfedit {
namespace {

void CheckCost(double cost) {
  if (std::isnan(cost) || cost < 0.0) {
    throw InvalidGraph("cost entries must be nonnegative or infeasible, got " +
                       std::to_string(cost));
  }
}

std::string FormatCost(double value) {
  if (value == kInfeasible) return "inf";
  char buf[32];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", value);
  return std::string(buf, len);
}

double ParseCost(const std::string& token) {
  if (token == "inf") return kInfeasible;
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("bad cost token '" + token + "'");
  }
  return value;
}

}  // namespace

CostMatrix::CostMatrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
  CheckCost(fill);
  values_.assign(static_cast<size_t>(rows) * cols, fill);
}

CostMatrix::CostMatrix(int rows, int cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
  if (values_.size() != static_cast<size_t>(rows) * cols) {
    throw ShapeError("value count does not match " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  for (double v : values_) CheckCost(v);
}

CostMatrix CostMatrix::FromRows(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  const int m = n == 0 ? 0 : static_cast<int>(rows.front().size());
  std::vector<double> values;
  values.reserve(static_cast<size_t>(n) * m);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != m) throw ShapeError("ragged rows");
    values.insert(values.end(), row.begin(), row.end());
  }
  return CostMatrix(n, m, std::move(values));
}

void CostMatrix::set(int i, int j, double cost) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) {
    throw IndexError("cell out of range");
  }
  CheckCost(cost);
  values_[Index(i, j)] = cost;
}

BipartiteGraph::BipartiteGraph(std::vector<std::string> source_words,
                               std::vector<std::string> target_words,
                               std::vector<Edge> edges)
    : source_words_(std::move(source_words)),
      target_words_(std::move(target_words)),
      edges_(std::move(edges)) {
  const int n = num_sources();
  const int m = num_targets();
  if (n < 1) throw InvalidGraph("graph needs at least one source node");
  if (m < n) {
    throw InvalidGraph("graph has fewer targets (" + std::to_string(m) +
                       ") than sources (" + std::to_string(n) + ")");
  }
  for (const Edge& e : edges_) {
    if (e.source < 0 || e.source >= n || e.target < 0 || e.target >= m) {
      throw InvalidGraph("edge endpoint out of range");
    }
    if (!std::isfinite(e.weight) || e.weight <= 0.0) {
      throw InvalidGraph("edge weights must be finite and > 0");
    }
  }
  std::sort(edges_.begin(), edges_.end());
  const auto dup = std::adjacent_find(
      edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return a.source == b.source && a.target == b.target;
      });
  if (dup != edges_.end()) {
    throw InvalidGraph("duplicate edge " + std::to_string(dup->source) + "->" +
                       std::to_string(dup->target));
  }
}

std::vector<int> Matching::TargetsBySource(int num_sources) const {
  std::vector<int> out(num_sources, -1);
  for (const Assignment& a : pairs) {
    if (a.source >= 0 && a.source < num_sources) out[a.source] = a.target;
  }
  return out;
}

Matching SolveExhaustive(const CostMatrix& cost) {
  const int n = cost.rows();
  const int m = cost.cols();
  if (n > m) throw ShapeError("exhaustive solver needs rows <= cols");
  if (n > kExhaustiveMaxSources || m > kExhaustiveMaxTargets) {
    throw InstanceTooLarge("exhaustive solver is limited to " +
                           std::to_string(kExhaustiveMaxSources) + "x" +
                           std::to_string(kExhaustiveMaxTargets) + ", got " +
                           std::to_string(n) + "x" + std::to_string(m));
  }

  std::vector<int> current(n, -1);
  std::vector<int> best;
  std::vector<char> used(m, 0);
  double best_total = kInfeasible;

  // Depth-first in lexicographic order of (target of row 0, row 1, ...), so
  // replacing only on strict improvement keeps the lexicographically
  // smallest optimum.
  std::function<void(int, double)> visit = [&](int row, double partial) {
    if (row == n) {
      if (partial < best_total) {
        best_total = partial;
        best = current;
      }
      return;
    }
    for (int j = 0; j < m; ++j) {
      if (used[j] || !cost.feasible(row, j)) continue;
      used[j] = 1;
      current[row] = j;
      visit(row + 1, partial + cost(row, j));
      used[j] = 0;
    }
  };
  visit(0, 0.0);

  if (best.size() != static_cast<size_t>(n)) {
    throw NoFeasibleAssignment("every injective assignment uses an infeasible entry");
  }
  Matching result;
  for (int i = 0; i < n; ++i) result.pairs.push_back({i, best[i]});
  result.total_weight = MatchingWeight(result.pairs, cost);
  return result;
}

Matching SolveRlap(const CostMatrix& cost) {
  const int n = cost.rows();
  const int m = cost.cols();
  if (n > m) throw ShapeError("RLAP solver needs rows <= cols");

  // Reduced cost c(i,j) - u[i] - v[j] stays >= 0 on feasible entries and is 0
  // on matched ones; Dijkstra over reduced costs finds each augmenting path.
  std::vector<double> u(n, 0.0);
  std::vector<double> v(m, 0.0);
  std::vector<int> row_of_col(m, -1);
  std::vector<int> col_of_row(n, -1);

  std::vector<double> dist(m);
  std::vector<int> pred_row(m);
  std::vector<char> done(m);
  std::vector<int> scanned_cols;
  // (distance, column already matched, column): among equally distant
  // columns a free one is popped first, which ends the search early on
  // cost matrices with many repeated values.
  using Item = std::tuple<double, bool, int>;

  for (int root = 0; root < n; ++root) {
    std::fill(dist.begin(), dist.end(), kInfeasible);
    std::fill(done.begin(), done.end(), 0);
    scanned_cols.clear();
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;

    auto relax_row = [&](int row, double base) {
      const std::span<const double> costs = cost.row(row);
      const double ui = u[row];
      for (int j = 0; j < m; ++j) {
        if (done[j] || costs[j] == kInfeasible) continue;
        const double d = base + (costs[j] - ui - v[j]);
        if (d < dist[j]) {
          dist[j] = d;
          pred_row[j] = row;
          heap.emplace(d, row_of_col[j] >= 0, j);
        }
      }
    };

    relax_row(root, 0.0);
    int sink = -1;
    double sink_dist = 0.0;
    while (!heap.empty()) {
      const auto [d, matched, j] = heap.top();
      heap.pop();
      if (done[j] || d > dist[j]) continue;
      done[j] = 1;
      scanned_cols.push_back(j);
      if (row_of_col[j] < 0) {
        sink = j;
        sink_dist = d;
        break;
      }
      relax_row(row_of_col[j], d);
    }
    if (sink < 0) {
      throw NoFeasibleAssignment("source row " + std::to_string(root) +
                                 " cannot be augmented");
    }

    // Potential update over the shortest-path tree.
    u[root] += sink_dist;
    for (int j : scanned_cols) {
      if (j == sink) continue;
      const double delta = sink_dist - dist[j];
      v[j] -= delta;
      u[row_of_col[j]] += delta;
    }

    for (int j = sink;;) {
      const int row = pred_row[j];
      const int prev = col_of_row[row];
      row_of_col[j] = row;
      col_of_row[row] = j;
      if (row == root) break;
      j = prev;
    }
  }

  Matching result;
  result.pairs.reserve(n);
  for (int i = 0; i < n; ++i) result.pairs.push_back({i, col_of_row[i]});
  result.total_weight = MatchingWeight(result.pairs, cost);
  return result;
}

double MatchingWeight(std::span<const Assignment> pairs, const CostMatrix& cost) {
  double total = 0.0;
  for (const Assignment& a : pairs) {
    if (a.source < 0 || a.source >= cost.rows() || a.target < 0 ||
        a.target >= cost.cols()) {
      throw IndexError("pair (" + std::to_string(a.source) + "," +
                       std::to_string(a.target) + ") outside " +
                       std::to_string(cost.rows()) + "x" +
                       std::to_string(cost.cols()));
    }
    if (!cost.feasible(a.source, a.target)) {
      throw InfeasiblePair("pair (" + std::to_string(a.source) + "," +
                           std::to_string(a.target) + ") is infeasible");
    }
    total += cost(a.source, a.target);
  }
  return total;
}

bool IsValidMatching(const Matching& matching, const CostMatrix& cost) {
  std::vector<char> src(cost.rows(), 0);
  std::vector<char> dst(cost.cols(), 0);
  for (const Assignment& a : matching.pairs) {
    if (a.source < 0 || a.source >= cost.rows() || a.target < 0 ||
        a.target >= cost.cols()) {
      return false;
    }
    if (src[a.source]++ || dst[a.target]++) return false;
    if (!cost.feasible(a.source, a.target)) return false;
  }
  return true;
}

CostMatrix GraphToCost(const BipartiteGraph& graph) {
  CostMatrix cost(graph.num_sources(), graph.num_targets(), kInfeasible);
  for (const Edge& e : graph.edges()) cost.set(e.source, e.target, e.weight);
  return cost;
}

BipartiteGraph CostToGraph(const CostMatrix& cost,
                           std::vector<std::string> source_words,
                           std::vector<std::string> target_words) {
  if (source_words.empty()) {
    for (int i = 0; i < cost.rows(); ++i) source_words.push_back("s" + std::to_string(i));
  }
  if (target_words.empty()) {
    for (int j = 0; j < cost.cols(); ++j) target_words.push_back("t" + std::to_string(j));
  }
  if (static_cast<int>(source_words.size()) != cost.rows() ||
      static_cast<int>(target_words.size()) != cost.cols()) {
    throw ShapeError("word lists do not match the cost matrix shape");
  }
  std::vector<Edge> edges;
  for (int i = 0; i < cost.rows(); ++i) {
    for (int j = 0; j < cost.cols(); ++j) {
      if (cost.feasible(i, j)) edges.push_back({i, j, cost(i, j)});
    }
  }
  return BipartiteGraph(std::move(source_words), std::move(target_words),
                        std::move(edges));
}

void WriteCostMatrix(std::ostream& out, const CostMatrix& cost) {
  out << cost.rows() << ' ' << cost.cols() << '\n';
  for (int i = 0; i < cost.rows(); ++i) {
    for (int j = 0; j < cost.cols(); ++j) {
      if (j) out << ' ';
      out << FormatCost(cost(i, j));
    }
    out << '\n';
  }
}

CostMatrix ReadCostMatrix(std::istream& in) {
  int n = 0;
  int m = 0;
  if (!(in >> n >> m) || n < 0 || m < 0) {
    throw ParseError("cost matrix header must be 'n m'");
  }
  std::vector<double> values;
  values.reserve(static_cast<size_t>(n) * m);
  std::string token;
  for (long k = 0; k < static_cast<long>(n) * m; ++k) {
    if (!(in >> token)) throw ParseError("cost matrix truncated");
    values.push_back(ParseCost(token));
  }
  try {
    return CostMatrix(n, m, std::move(values));
  } catch (const InvalidGraph& e) {
    throw ParseError(e.what());
  }
}

void WriteMatching(std::ostream& out, const Matching& matching,
                   const CostMatrix& cost) {
  for (const Assignment& a : matching.pairs) {
    out << a.source << ' ' << a.target << ' '
        << FormatCost(cost(a.source, a.target)) << '\n';
  }
}

Matching ReadMatching(std::istream& in, int num_pairs) {
  Matching result;
  std::string line;
  while (num_pairs < 0 || result.size() < num_pairs) {
    if (!std::getline(in, line)) {
      if (num_pairs < 0) break;
      throw ParseError("matching truncated");
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    Assignment a;
    std::string weight;
    if (!(fields >> a.source >> a.target >> weight)) {
      throw ParseError("bad matching line '" + line + "'");
    }
    result.pairs.push_back(a);
    result.total_weight += ParseCost(weight);
  }
  std::sort(result.pairs.begin(), result.pairs.end());
  return result;
}

}  // namespace cfedit
