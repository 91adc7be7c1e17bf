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

// Rectangular linear assignment: cost matrices, bipartite substitution
// graphs, matchings, and two exact solvers (exhaustive enumeration for tiny
// instances, shortest augmenting paths for everything else).

#ifndef CFEDIT_ASSIGNMENT_H_
#define CFEDIT_ASSIGNMENT_H_

#include <compare>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace cfedit {

// Marks a forbidden (source, target) pair. Solvers test for it with
// CostMatrix::feasible() and never add it to a finite cost.
inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

// Guards for SolveExhaustive; m!/(m-n)! at the limit is 9!/1! = 362880.
inline constexpr int kExhaustiveMaxSources = 8;
inline constexpr int kExhaustiveMaxTargets = 9;

// Dense n x m cost matrix, row-major. Rows are sources, columns targets.
// Entries are finite and nonnegative, or kInfeasible.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(int rows, int cols, double fill = kInfeasible);
  CostMatrix(int rows, int cols, std::vector<double> values);

  static CostMatrix FromRows(const std::vector<std::vector<double>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double operator()(int i, int j) const { return values_[Index(i, j)]; }
  bool feasible(int i, int j) const { return values_[Index(i, j)] != kInfeasible; }
  std::span<const double> row(int i) const {
    return {values_.data() + static_cast<size_t>(i) * cols_,
            static_cast<size_t>(cols_)};
  }
  std::span<const double> values() const { return values_; }

  // Throws InvalidGraph for negative, NaN or -inf entries.
  void set(int i, int j, double cost);

  bool operator==(const CostMatrix&) const = default;

 private:
  size_t Index(int i, int j) const {
    return static_cast<size_t>(i) * cols_ + static_cast<size_t>(j);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> values_;
};

struct Edge {
  int source = 0;
  int target = 0;
  double weight = 0.0;

  auto operator<=>(const Edge&) const = default;
};

// Source and target word nodes joined by weighted feasibility edges. The
// smaller side must be the source side. Edges are kept sorted by
// (source, target); an absent edge means the substitution is infeasible.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  // Validates every invariant and throws InvalidGraph on violation.
  BipartiteGraph(std::vector<std::string> source_words,
                 std::vector<std::string> target_words, std::vector<Edge> edges);

  int num_sources() const { return static_cast<int>(source_words_.size()); }
  int num_targets() const { return static_cast<int>(target_words_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<std::string>& source_words() const { return source_words_; }
  const std::vector<std::string>& target_words() const { return target_words_; }
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  std::vector<std::string> source_words_;
  std::vector<std::string> target_words_;
  std::vector<Edge> edges_;
};

struct Assignment {
  int source = 0;
  int target = 0;

  auto operator<=>(const Assignment&) const = default;
};

// One-to-one source->target pairs, sorted by source index.
struct Matching {
  std::vector<Assignment> pairs;
  double total_weight = 0.0;

  int size() const { return static_cast<int>(pairs.size()); }
  // Target assigned to each of `num_sources` rows, -1 where unmatched.
  std::vector<int> TargetsBySource(int num_sources) const;
};

// Minimum-weight complete matching by enumerating all injective assignments
// in lexicographic order; among equal totals the first one found wins.
// Throws InstanceTooLarge above the guards, ShapeError if rows > cols and
// NoFeasibleAssignment if every assignment touches an infeasible entry.
Matching SolveExhaustive(const CostMatrix& cost);

// Minimum-weight complete matching via Dijkstra-based shortest augmenting
// paths with row/column potentials (one augmentation per source row).
// Throws ShapeError if rows > cols, NoFeasibleAssignment when no complete
// matching exists.
Matching SolveRlap(const CostMatrix& cost);

// Sum of the matched entries. Throws IndexError / InfeasiblePair.
double MatchingWeight(std::span<const Assignment> pairs, const CostMatrix& cost);

// Checks one-to-one use of sources and targets and index bounds.
bool IsValidMatching(const Matching& matching, const CostMatrix& cost);

CostMatrix GraphToCost(const BipartiteGraph& graph);
// Inverse of GraphToCost. Word payloads default to "s<i>" / "t<j>".
BipartiteGraph CostToGraph(const CostMatrix& cost,
                           std::vector<std::string> source_words = {},
                           std::vector<std::string> target_words = {});

// Text format: "n m" then n lines of m values, "inf" for infeasible.
void WriteCostMatrix(std::ostream& out, const CostMatrix& cost);
CostMatrix ReadCostMatrix(std::istream& in);
// One "i j cost" line per pair.
void WriteMatching(std::ostream& out, const Matching& matching,
                   const CostMatrix& cost);
// Reads `num_pairs` lines, or until end of stream when negative.
Matching ReadMatching(std::istream& in, int num_pairs = -1);

}  // namespace cfedit

#endif  // CFEDIT_ASSIGNMENT_H_
