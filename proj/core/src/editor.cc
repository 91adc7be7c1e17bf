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

#include "cfedit/editor.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <utility>

#include "cfedit/errors.h"
#include "json.hpp"

namespace cfedit {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// A plan word present in the document, with the token positions it covers.
struct Move {
  int plan_index = 0;
  std::vector<int> positions;
};

struct State {
  std::vector<int> moves;  // sorted indices into the document's move list
  int changed = 0;         // number of substituted positions
  std::vector<std::string> keys;
  double score = 0.0;
  bool flipped = false;
  int label = 0;
};

bool BetterState(const State& a, const State& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.moves < b.moves;
}

bool NeedsScorer(Heuristic h) { return h != Heuristic::kContrastive; }

void MinMaxNormalize(std::vector<double>& v) {
  if (v.empty()) return;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double min = *lo;
  const double span = *hi - *lo;
  for (double& x : v) x = span > 0.0 ? (x - min) / span : 1.0;
}

}  // namespace

std::string_view HeuristicName(Heuristic h) {
  switch (h) {
    case Heuristic::kFluency:
      return "fluency";
    case Heuristic::kContrastive:
      return "contrastive";
    case Heuristic::kFluencyContrastive:
      return "fluency_contrastive";
  }
  return "fluency";
}

Heuristic ParseHeuristic(std::string_view name) {
  const std::string lower = Lowercase(name);
  if (lower == "fluency") return Heuristic::kFluency;
  if (lower == "contrastive") return Heuristic::kContrastive;
  if (lower == "fluency_contrastive" || lower == "fluency-contrastive") {
    return Heuristic::kFluencyContrastive;
  }
  throw ParseError("unknown heuristic '" + std::string(name) + "'");
}

ThresholdMode ParseThreshold(std::string_view text) {
  const size_t colon = text.find(':');
  const std::string kind = Lowercase(text.substr(0, colon));
  const std::string value =
      colon == std::string_view::npos ? "" : std::string(text.substr(colon + 1));
  try {
    size_t used = 0;
    if (kind == "static") {
      if (value.empty()) return ThresholdMode::Static(10);
      const int k = std::stoi(value, &used);
      if (used == value.size()) return ThresholdMode::Static(k);
    } else if (kind == "dynamic") {
      if (value.empty()) return ThresholdMode::Dynamic(0.20);
      const double f = std::stod(value, &used);
      if (used == value.size()) return ThresholdMode::Dynamic(f);
    }
  } catch (const std::exception&) {
  }
  throw ParseError("bad threshold '" + std::string(text) +
                   "' (expected static:<k> or dynamic:<fraction>)");
}

std::string FormatThreshold(const ThresholdMode& mode) {
  if (mode.kind == ThresholdMode::Kind::kStatic) {
    return "static:" + std::to_string(mode.count);
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "dynamic:%g", mode.fraction);
  return buf;
}

void EditConfig::Validate() const {
  if (beam_width < 1) throw InvalidConfig("beam_width must be >= 1");
  if (threshold.kind == ThresholdMode::Kind::kStatic && threshold.count < 1) {
    throw InvalidConfig("static threshold must be >= 1");
  }
  if (threshold.kind == ThresholdMode::Kind::kDynamic &&
      !(threshold.fraction > 0.0 && threshold.fraction <= 1.0)) {
    throw InvalidConfig("dynamic threshold must lie in (0, 1]");
  }
}

SubstitutionPlan::SubstitutionPlan(std::vector<PlannedSubstitution> pairs)
    : pairs_(std::move(pairs)) {
  for (int i = 0; i < static_cast<int>(pairs_.size()); ++i) {
    if (!index_.emplace(pairs_[i].source, i).second) {
      throw InvalidConfig("duplicate source '" + pairs_[i].source + "' in plan");
    }
  }
}

SubstitutionPlan SubstitutionPlan::FromMatching(const SubstitutionGraph& graph,
                                                const Matching& matching) {
  const CostMatrix cost = GraphToCost(graph.graph);
  std::vector<PlannedSubstitution> pairs;
  pairs.reserve(matching.pairs.size());
  for (const Assignment& a : matching.pairs) {
    if (a.source < 0 || a.source >= cost.rows() || a.target < 0 ||
        a.target >= cost.cols()) {
      throw IndexError("matching pair outside the graph");
    }
    pairs.push_back({graph.graph.source_words()[a.source],
                     graph.graph.target_words()[a.target], cost(a.source, a.target)});
  }
  SubstitutionPlan plan(std::move(pairs));
  for (const Assignment& a : matching.pairs) {
    if (a.source < static_cast<int>(graph.provenance.size())) {
      plan.provenance_[graph.graph.source_words()[a.source]] = graph.provenance[a.source];
    }
  }
  return plan;
}

const PlannedSubstitution* SubstitutionPlan::Find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? nullptr : &pairs_[it->second];
}

int SubstitutionLimit(std::span<const Token> tokens, const EditConfig& config) {
  if (config.threshold.kind == ThresholdMode::Kind::kStatic) return config.threshold.count;
  const int words = static_cast<int>(
      std::count_if(tokens.begin(), tokens.end(), [](const Token& t) { return t.is_word; }));
  // The epsilon keeps products like 0.2 * 10 from flooring to 1.
  const int k = static_cast<int>(std::floor(config.threshold.fraction * words + 1e-9));
  return std::max(1, k);
}

int SubstitutionLimit(std::string_view text, const EditConfig& config) {
  return SubstitutionLimit(Tokenize(text), config);
}

double FluencyScore(std::span<const std::string> candidate,
                    std::span<const std::string> original, const LanguageScorer* scorer) {
  if (scorer == nullptr) throw ScorerUnavailable("fluency needs a language model");
  const double base = scorer->Loss(original);
  if (!(base > 0.0)) throw DegenerateLoss("original text has zero language-model loss");
  return -std::abs(1.0 - scorer->Loss(candidate) / base);
}

double ContrastiveScore(std::span<const std::string> candidate,
                        std::span<const std::string> original, int label,
                        const TextClassifier* classifier) {
  if (classifier == nullptr) throw ScorerUnavailable("contrastive scoring needs a classifier");
  return classifier->PredictProba(original)[label] - classifier->PredictProba(candidate)[label];
}

std::vector<double> ScoreCandidates(std::span<const std::vector<std::string>> candidates,
                                    std::span<const std::string> original, Heuristic mode,
                                    const LanguageScorer* scorer,
                                    const TextClassifier* classifier, int label) {
  std::vector<double> fluency;
  std::vector<double> contrast;
  if (mode != Heuristic::kContrastive) {
    if (scorer == nullptr) throw ScorerUnavailable("fluency needs a language model");
    const double base = scorer->Loss(original);
    if (!(base > 0.0)) throw DegenerateLoss("original text has zero language-model loss");
    for (const auto& c : candidates) fluency.push_back(-std::abs(1.0 - scorer->Loss(c) / base));
  }
  if (mode != Heuristic::kFluency) {
    if (classifier == nullptr) {
      throw ScorerUnavailable("contrastive scoring needs a classifier");
    }
    const double base = classifier->PredictProba(original)[label];
    for (const auto& c : candidates) contrast.push_back(base - classifier->PredictProba(c)[label]);
  }
  if (mode == Heuristic::kFluency) return fluency;
  if (mode == Heuristic::kContrastive) return contrast;
  MinMaxNormalize(fluency);
  MinMaxNormalize(contrast);
  std::vector<double> out(candidates.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (fluency[i] + contrast[i]);
  return out;
}

double HeuristicScore(std::span<const std::string> candidate,
                      std::span<const std::string> original, Heuristic mode,
                      const LanguageScorer* scorer, const TextClassifier* classifier) {
  if (classifier == nullptr && mode != Heuristic::kFluency) {
    throw ScorerUnavailable("contrastive scoring needs a classifier");
  }
  const int label = classifier != nullptr ? classifier->PredictIndex(original) : 0;
  const std::vector<std::string> one(candidate.begin(), candidate.end());
  return ScoreCandidates(std::span(&one, 1), original, mode, scorer, classifier, label)[0];
}

EditResult BeamSearchEdit(const Document& document, const SubstitutionPlan& plan,
                          const EditConfig& config, const LanguageScorer* scorer,
                          const TextClassifier* classifier) {
  config.Validate();
  if (classifier == nullptr) throw ScorerUnavailable("beam search needs a classifier");
  if (NeedsScorer(config.heuristic) && scorer == nullptr) {
    throw ScorerUnavailable("the fluency heuristic needs a language model");
  }

  const std::vector<Token> tokens = Tokenize(document.text);
  const std::vector<std::string> original = TokenKeys(tokens);
  const int limit = SubstitutionLimit(tokens, config);
  const int original_label = classifier->PredictIndex(original);

  EditResult result;
  result.id = document.id;
  result.original_text = document.text;
  result.edited_text = document.text;
  result.substitution_limit = limit;
  result.original_label = classifier->labels()[original_label];
  result.original_probability = classifier->PredictProba(original)[original_label];
  result.edited_label = result.original_label;
  result.edited_probability = result.original_probability;

  // Moves in order of first occurrence.
  std::vector<Move> moves;
  std::map<int, int> move_of_plan;
  for (int t = 0; t < static_cast<int>(tokens.size()); ++t) {
    if (!tokens[t].is_word) continue;
    const PlannedSubstitution* p = plan.Find(tokens[t].key);
    if (p == nullptr) continue;
    const int plan_index = static_cast<int>(p - plan.pairs().data());
    auto [it, inserted] = move_of_plan.emplace(plan_index, static_cast<int>(moves.size()));
    if (inserted) moves.push_back({plan_index, {}});
    moves[it->second].positions.push_back(t);
  }
  if (moves.empty()) {
    result.controllability_exception = true;
    return result;
  }

  // When every plan word occurs more often than the limit allows, the first
  // step may substitute a prefix of its occurrences so that the document
  // still receives an edit.
  const bool any_fits = std::any_of(moves.begin(), moves.end(), [&](const Move& m) {
    return static_cast<int>(m.positions.size()) <= limit;
  });
  if (!any_fits) {
    for (Move& m : moves) m.positions.resize(limit);
  }

  auto apply = [&](const std::vector<int>& chosen) {
    std::vector<std::string> keys = original;
    for (int mi : chosen) {
      const std::string& target = plan.pairs()[moves[mi].plan_index].target;
      for (int pos : moves[mi].positions) keys[pos] = target;
    }
    return keys;
  };

  std::vector<State> beam(1);
  beam[0].keys = original;
  beam[0].label = original_label;
  // Best state seen so far: flipped states first, then by score.
  State best;
  bool have_best = false;
  auto consider = [&](const State& s) {
    if (!have_best || (s.flipped && !best.flipped) ||
        (s.flipped == best.flipped && BetterState(s, best))) {
      best = s;
      have_best = true;
    }
  };

  while (true) {
    std::set<std::vector<int>> seen;
    std::vector<State> candidates;
    for (const State& s : beam) {
      for (int mi = 0; mi < static_cast<int>(moves.size()); ++mi) {
        if (std::binary_search(s.moves.begin(), s.moves.end(), mi)) continue;
        const int changed = s.changed + static_cast<int>(moves[mi].positions.size());
        if (changed > limit) continue;
        std::vector<int> next = s.moves;
        next.insert(std::upper_bound(next.begin(), next.end(), mi), mi);
        if (!seen.insert(next).second) continue;
        State c;
        c.moves = std::move(next);
        c.changed = changed;
        candidates.push_back(std::move(c));
      }
    }
    if (candidates.empty()) break;

    std::sort(candidates.begin(), candidates.end(),
              [](const State& a, const State& b) { return a.moves < b.moves; });
    std::vector<std::vector<std::string>> texts;
    texts.reserve(candidates.size());
    for (State& c : candidates) {
      c.keys = apply(c.moves);
      texts.push_back(c.keys);
    }
    const std::vector<double> scores = ScoreCandidates(texts, original, config.heuristic,
                                                       scorer, classifier, original_label);
    for (size_t i = 0; i < candidates.size(); ++i) candidates[i].score = scores[i];
    std::sort(candidates.begin(), candidates.end(), BetterState);
    if (static_cast<int>(candidates.size()) > config.beam_width) {
      candidates.resize(config.beam_width);
    }
    for (State& c : candidates) {
      c.label = classifier->PredictIndex(c.keys);
      c.flipped = c.label != original_label;
    }
    result.heuristic_trace.push_back(candidates.front().score);
    beam = std::move(candidates);
    for (const State& s : beam) consider(s);
    if (config.stop_on_flip && best.flipped) break;
  }
  if (!have_best) return result;
  const State* chosen = &best;

  std::vector<Token> edited = tokens;
  for (int mi : chosen->moves) {
    const PlannedSubstitution& p = plan.pairs()[moves[mi].plan_index];
    for (int pos : moves[mi].positions) {
      edited[pos].text = MatchCase(tokens[pos].text, p.target);
      edited[pos].key = p.target;
      result.applied.push_back({pos, p.source, p.target});
    }
  }
  std::sort(result.applied.begin(), result.applied.end(),
            [](const AppliedSubstitution& a, const AppliedSubstitution& b) {
              return a.position < b.position;
            });
  result.edited_text = Detokenize(edited);
  result.edited_label = classifier->labels()[chosen->label];
  result.edited_probability = classifier->PredictProba(chosen->keys)[chosen->label];
  result.flipped = chosen->flipped;
  return result;
}

BigramLanguageModel TrainCorpusLanguageModel(std::span<const Document> documents) {
  std::vector<std::vector<std::string>> sentences;
  sentences.reserve(documents.size());
  for (const Document& d : documents) sentences.push_back(TokenKeys(Tokenize(d.text)));
  return BigramLanguageModel::Train(sentences);
}

Matching SolveSubstitutionGraph(const SubstitutionGraph& graph, const SolverChoice& solver) {
  const CostMatrix cost = GraphToCost(graph.graph);
  if (solver.kind == SolverKind::kDeterministic) return SolveRlap(cost);
  if (solver.model == nullptr || solver.config == nullptr) {
    throw InvalidConfig("the GNN solver needs a trained model");
  }
  return DecodeAssignment(Forward(graph.graph, *solver.model, *solver.config), cost);
}

DatasetEdit EditDataset(std::span<const Document> documents,
                        const GraphBuildConfig& graph_config, const SolverChoice& solver,
                        const EditConfig& edit_config, const Providers& providers,
                        const TextClassifier& classifier, const LanguageScorer* scorer,
                        int jobs) {
  edit_config.Validate();
  DatasetEdit out;
  if (documents.empty()) return out;

  auto start = Clock::now();
  const SubstitutionGraph graph = BuildGraph(documents, graph_config, providers, jobs);
  out.times.graph_s = Seconds(start);
  out.graph_sources = graph.graph.num_sources();
  out.graph_targets = graph.graph.num_targets();

  start = Clock::now();
  const Matching matching = SolveSubstitutionGraph(graph, solver);
  out.times.solve_s = Seconds(start);
  out.matching_weight = matching.total_weight;
  out.plan = SubstitutionPlan::FromMatching(graph, matching);

  start = Clock::now();
  BigramLanguageModel corpus_lm;
  if (scorer == nullptr && NeedsScorer(edit_config.heuristic)) {
    corpus_lm = TrainCorpusLanguageModel(documents);
    scorer = &corpus_lm;
  }
  out.results.resize(documents.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < documents.size(); i = next++) {
      try {
        out.results[i] =
            BeamSearchEdit(documents[i], out.plan, edit_config, scorer, &classifier);
      } catch (const std::exception& e) {
        EditResult failed;
        failed.id = documents[i].id;
        failed.original_text = documents[i].text;
        failed.edited_text = documents[i].text;
        failed.error = e.what();
        out.results[i] = std::move(failed);
      }
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(documents.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  out.times.edit_s = Seconds(start);
  for (const EditResult& r : out.results) out.failures += r.error.empty() ? 0 : 1;
  return out;
}

namespace {

nlohmann::json NumberOrNull(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

double NumberOrNan(const nlohmann::json& row, const char* key) {
  if (!row.contains(key) || row[key].is_null()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return row[key].get<double>();
}

}  // namespace

void WriteEditResult(std::ostream& out, const EditResult& r) {
  nlohmann::json applied = nlohmann::json::array();
  for (const AppliedSubstitution& a : r.applied) {
    applied.push_back({{"position", a.position}, {"source", a.source}, {"target", a.target}});
  }
  nlohmann::ordered_json row;
  row["id"] = r.id;
  row["original_text"] = r.original_text;
  row["edited_text"] = r.edited_text;
  row["applied_substitutions"] = applied;
  row["original_label"] = r.original_label;
  row["original_probability"] = r.original_probability;
  row["edited_label"] = r.edited_label;
  row["edited_probability"] = r.edited_probability;
  row["flipped"] = r.flipped;
  row["heuristic_trace"] = r.heuristic_trace;
  row["substitution_limit"] = r.substitution_limit;
  row["controllability_exception"] = r.controllability_exception;
  row["minimality"] = NumberOrNull(r.minimality);
  row["closeness"] = NumberOrNull(r.closeness);
  row["fluency"] = NumberOrNull(r.fluency);
  if (!r.error.empty()) row["error"] = r.error;
  out << row.dump() << '\n';
}

std::vector<EditResult> ReadEditResults(std::istream& in) {
  std::vector<EditResult> results;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    try {
      const nlohmann::json row = nlohmann::json::parse(line);
      EditResult r;
      r.id = row.at("id").get<std::string>();
      r.original_text = row.at("original_text").get<std::string>();
      r.edited_text = row.at("edited_text").get<std::string>();
      for (const auto& a : row.value("applied_substitutions", nlohmann::json::array())) {
        r.applied.push_back({a.at("position").get<int>(), a.at("source").get<std::string>(),
                             a.at("target").get<std::string>()});
      }
      r.original_label = row.value("original_label", "");
      r.original_probability = row.value("original_probability", 0.0);
      r.edited_label = row.value("edited_label", "");
      r.edited_probability = row.value("edited_probability", 0.0);
      r.flipped = row.value("flipped", false);
      r.heuristic_trace = row.value("heuristic_trace", std::vector<double>{});
      r.substitution_limit = row.value("substitution_limit", 0);
      r.controllability_exception = row.value("controllability_exception", false);
      r.minimality = NumberOrNan(row, "minimality");
      r.closeness = NumberOrNan(row, "closeness");
      r.fluency = NumberOrNan(row, "fluency");
      r.error = row.value("error", "");
      results.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("edit results line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return results;
}

}  // namespace cfedit
