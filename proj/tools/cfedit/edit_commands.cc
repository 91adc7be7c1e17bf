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

// build-graph, edit and evaluate.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "cfedit/assignment.h"
#include "cfedit/classifier.h"
#include "cfedit/editor.h"
#include "cfedit/errors.h"
#include "cfedit/gnn.h"
#include "cfedit/language_model.h"
#include "cfedit/lexicon.h"
#include "cfedit/metrics.h"
#include "commands.h"

namespace cfedit::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr const char* kEditsFile = "edits.jsonl";
constexpr const char* kReportCsv = "report.csv";
constexpr const char* kReportJson = "report.json";
constexpr const char* kPlanFile = "plan.tsv";

// A solver choice plus the checkpoint it may point into.
struct LoadedSolver {
  Checkpoint checkpoint;
  SolverChoice choice;
};

void LoadSolver(const std::string& solver, const std::string& model, LoadedSolver* out) {
  if (solver == "gnn") {
    out->checkpoint = LoadModel(model);
    out->choice.kind = SolverKind::kGnn;
    out->choice.model = &out->checkpoint.model;
    out->choice.config = &out->checkpoint.config;
  } else {
    out->choice.kind = SolverKind::kDeterministic;
  }
}

nlohmann::ordered_json TimesJson(const StageTimes& t) {
  return {{"graph_s", t.graph_s}, {"solve_s", t.solve_s}, {"edit_s", t.edit_s}};
}

// ------------------------------------------------------------- build-graph

struct BuildGraphOptions {
  CorpusOptions corpus;
  std::string solver = "none";
  std::string model;
  std::string out;
};

void RunBuildGraph(const CLI::App& cmd, const GlobalOptions& global,
                   const BuildGraphOptions& o) {
  LoadedSolver solver;
  if (o.solver != "none") LoadSolver(o.solver, o.model, &solver);
  const LoadedCorpus corpus = LoadCorpus(global, o.corpus);
  const SubstitutionGraph g =
      BuildGraph(corpus.documents, corpus.graph_config, corpus.providers(), global.jobs);
  const std::string manifest = ManifestComment(BuildManifest(cmd));
  const fs::path dir(o.out);
  const CostMatrix cost = GraphToCost(g.graph);
  {
    std::ofstream out = OpenOutput(dir / "cost.txt");
    out << manifest;
    WriteCostMatrix(out, cost);
  }
  {
    std::ofstream out = OpenOutput(dir / "nodes.tsv");
    out << manifest << "side\tindex\tword\tpos\toccurrences\n";
    for (int i = 0; i < g.graph.num_sources(); ++i) {
      out << "source\t" << i << '\t' << g.graph.source_words()[i] << '\t'
          << PosTagName(g.source_pos[i]) << '\t' << g.provenance[i].size() << '\n';
    }
    for (int j = 0; j < g.graph.num_targets(); ++j) {
      out << "target\t" << j << '\t' << g.graph.target_words()[j] << '\t'
          << PosTagName(g.target_pos[j]) << "\t0\n";
    }
  }
  std::printf("sources %d targets %d edges %d penalized %d skipped %zu\n",
              g.graph.num_sources(), g.graph.num_targets(), g.graph.num_edges(),
              g.penalized_edges, g.skipped_words.size());
  if (o.solver != "none") {
    const Matching m = SolveSubstitutionGraph(g, solver.choice);
    std::ofstream out = OpenOutput(dir / "matching.tsv");
    out << manifest << "source\ttarget\tcost\n";
    for (const Assignment& a : m.pairs) {
      char w[32];
      std::snprintf(w, sizeof(w), "%.10g", cost(a.source, a.target));
      out << g.graph.source_words()[a.source] << '\t' << g.graph.target_words()[a.target]
          << '\t' << w << '\n';
    }
    std::printf("matching weight %.10g\n", m.total_weight);
  }
  Log(global, "wrote graph files to " + dir.string());
}

// -------------------------------------------------------------------- edit

struct EditOptions {
  CorpusOptions corpus;
  std::string solver = "deterministic";
  std::string model;
  std::string heuristic = "fluency";
  std::string threshold = "static:10";
  int beam_width = 5;
  bool no_stop_on_flip = false;
  std::string classifier;
  double smoothing = 1.0;
  std::string name;
  std::string out;
};

void RunEdit(const CLI::App& cmd, const GlobalOptions& global, const EditOptions& o) {
  EditConfig config;
  config.heuristic = ParseHeuristic(o.heuristic);
  config.threshold = ParseThreshold(o.threshold);
  config.beam_width = o.beam_width;
  config.stop_on_flip = !o.no_stop_on_flip;
  config.Validate();
  LoadedSolver solver;
  LoadSolver(o.solver, o.model, &solver);
  if (!o.classifier.empty()) RequireFiles({o.classifier});
  const LoadedCorpus corpus = LoadCorpus(global, o.corpus);

  TextClassifier classifier;
  if (!o.classifier.empty()) {
    std::ifstream in(o.classifier);
    classifier = TextClassifier::Load(in);
  } else {
    classifier = TextClassifier::Train(corpus.dataset, o.smoothing);
  }
  const BigramLanguageModel lm = TrainCorpusLanguageModel(corpus.documents);
  DatasetEdit run = EditDataset(corpus.documents, corpus.graph_config, solver.choice, config,
                                corpus.providers(), classifier, &lm, global.jobs);
  if (!run.results.empty() && run.failures == static_cast<int>(run.results.size())) {
    throw Error("every document failed; first error: " + run.results.front().error);
  }
  const EmbeddingCloseness closeness(corpus.embeddings);
  for (EditResult& r : run.results) {
    if (!r.error.empty()) continue;
    ScoreResult(r, closeness, lm);
  }
  const std::string name = o.name.empty() ? o.solver + "-" + o.heuristic + "-" + o.threshold
                                          : o.name;
  const MetricReport report = Aggregate(run.results, closeness, lm, run.times, name);

  nlohmann::ordered_json manifest = BuildManifest(cmd);
  manifest["name"] = name;
  manifest["runtime"] = TimesJson(run.times);
  manifest["plan"] = {{"sources", run.graph_sources},
                      {"targets", run.graph_targets},
                      {"pairs", run.plan.size()},
                      {"matching_weight", run.matching_weight}};
  const std::string header = ManifestComment(manifest);
  const fs::path dir(o.out);
  {
    std::ofstream out = OpenOutput(dir / kEditsFile);
    out << header;
    for (const EditResult& r : run.results) WriteEditResult(out, r);
  }
  {
    std::ofstream out = OpenOutput(dir / kPlanFile);
    out << header << "source\ttarget\tcost\n";
    for (const PlannedSubstitution& p : run.plan.pairs()) {
      char w[32];
      std::snprintf(w, sizeof(w), "%.10g", p.cost);
      out << p.source << '\t' << p.target << '\t' << w << '\n';
    }
  }
  const std::vector<MetricReport> reports = {report};
  {
    std::ofstream out = OpenOutput(dir / kReportCsv);
    out << header;
    WriteReportCsv(out, reports);
  }
  {
    nlohmann::ordered_json doc;
    std::ostringstream rows;
    WriteReportJson(rows, reports);
    doc["manifest"] = manifest;
    doc["reports"] = nlohmann::ordered_json::parse(rows.str());
    std::ofstream out = OpenOutput(dir / kReportJson);
    out << doc.dump(2) << '\n';
  }
  WriteReportCsv(std::cout, reports);
  Log(global, std::to_string(run.results.size()) + " documents, " +
                  std::to_string(run.failures) + " failures, plan of " +
                  std::to_string(run.plan.size()) + " pairs; outputs in " + dir.string());
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
  std::string edits;
  std::string embeddings;
  std::string lm_corpus;
  std::string name;
  std::string out;
  std::string json;
};

void RunEvaluate(const CLI::App& cmd, const GlobalOptions& global,
                 const EvaluateOptions& o) {
  const fs::path embeddings_path = DataFile(global, o.embeddings, "embeddings.txt");
  RequireFiles({o.edits, embeddings_path});
  if (!o.lm_corpus.empty()) RequireFiles({o.lm_corpus});

  const nlohmann::ordered_json source_manifest = ReadManifestComment(o.edits);
  std::ifstream in(o.edits);
  std::vector<EditResult> results = ReadEditResults(in);
  if (results.empty()) throw EmptyInput("no edit results in " + o.edits);
  for (EditResult& r : results) {
    r.minimality = r.closeness = r.fluency = std::numeric_limits<double>::quiet_NaN();
  }

  std::vector<Document> corpus;
  if (!o.lm_corpus.empty()) {
    for (const LabeledInstance& inst : ReadJsonLinesFile(o.lm_corpus).instances) {
      corpus.push_back({inst.id, inst.text});
    }
  } else {
    for (const EditResult& r : results) corpus.push_back({r.id, r.original_text});
  }
  const BigramLanguageModel lm = TrainCorpusLanguageModel(corpus);
  const EmbeddingTable table = EmbeddingTable::LoadFile(embeddings_path);
  const EmbeddingCloseness closeness(table);

  StageTimes times;
  std::string name = o.name;
  if (source_manifest.is_object()) {
    if (source_manifest.contains("runtime")) {
      const auto& t = source_manifest["runtime"];
      times = {t.value("graph_s", 0.0), t.value("solve_s", 0.0), t.value("edit_s", 0.0)};
    }
    if (name.empty()) name = source_manifest.value("name", "");
  }
  if (name.empty()) name = fs::path(o.edits).stem().string();
  const std::vector<MetricReport> reports = {Aggregate(results, closeness, lm, times, name)};

  nlohmann::ordered_json manifest = BuildManifest(cmd);
  if (source_manifest.is_object()) manifest["source_manifest"] = source_manifest;
  if (o.out.empty()) {
    WriteReportCsv(std::cout, reports);
  } else {
    std::ofstream out = OpenOutput(o.out);
    out << ManifestComment(manifest);
    WriteReportCsv(out, reports);
  }
  if (!o.json.empty()) {
    nlohmann::ordered_json doc;
    std::ostringstream rows;
    WriteReportJson(rows, reports);
    doc["manifest"] = manifest;
    doc["reports"] = nlohmann::ordered_json::parse(rows.str());
    std::ofstream out = OpenOutput(o.json);
    out << doc.dump(2) << '\n';
  }
  Log(global, "evaluated " + std::to_string(reports[0].instances) + " results (" +
                  std::to_string(reports[0].failures) + " failed)");
}

void AddSolverOptions(CLI::App* cmd, std::string* solver, std::string* model,
                      std::vector<std::string> choices) {
  cmd->add_option("--solver", *solver, "Assignment solver")->check(CLI::IsMember(choices));
  cmd->add_option("--model", *model, "GNN checkpoint (needed with --solver gnn)");
}

}  // namespace

void RegisterBuildGraph(CLI::App& app, const GlobalOptions& global) {
  auto o = std::make_shared<BuildGraphOptions>();
  CLI::App* cmd = app.add_subcommand("build-graph", "Build the substitution graph of a corpus");
  AddCorpusOptions(cmd, &o->corpus);
  AddSolverOptions(cmd, &o->solver, &o->model, {"none", "deterministic", "gnn"});
  cmd->add_option("--out", o->out, "Output directory")->required();
  cmd->callback([cmd, &global, o] { RunBuildGraph(*cmd, global, *o); });
}

void RegisterEdit(CLI::App& app, const GlobalOptions& global) {
  auto o = std::make_shared<EditOptions>();
  CLI::App* cmd = app.add_subcommand("edit", "Generate counterfactual edits for a corpus");
  AddCorpusOptions(cmd, &o->corpus);
  AddSolverOptions(cmd, &o->solver, &o->model, {"deterministic", "gnn"});
  cmd->add_option("--heuristic", o->heuristic, "Beam-search heuristic")
      ->check(CLI::IsMember({"fluency", "contrastive", "fluency_contrastive"}));
  cmd->add_option("--threshold", o->threshold, "static:<k> or dynamic:<fraction>")
      ->check(CLI::Validator(
          [](std::string& value) {
            try {
              EditConfig c;
              c.threshold = ParseThreshold(value);
              c.Validate();
            } catch (const std::exception& e) {
              return std::string(e.what());
            }
            return std::string();
          },
          "THRESHOLD"));
  cmd->add_option("--beam-width", o->beam_width, "Beam width")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-stop-on-flip", o->no_stop_on_flip,
                "Keep searching after the first label flip");
  cmd->add_option("--classifier", o->classifier,
                  "Saved naive Bayes model (default: train on --dataset)");
  cmd->add_option("--smoothing", o->smoothing, "Additive smoothing for a trained classifier")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--name", o->name, "Report row name (default: solver-heuristic-threshold)");
  cmd->add_option("--out", o->out, "Output directory")->required();
  cmd->callback([cmd, &global, o] { RunEdit(*cmd, global, *o); });
}

void RegisterEvaluate(CLI::App& app, const GlobalOptions& global) {
  auto o = std::make_shared<EvaluateOptions>();
  CLI::App* cmd = app.add_subcommand("evaluate", "Recompute the metric report of an edit set");
  cmd->add_option("--edits", o->edits, "Edit results (JSON lines)")->required();
  cmd->add_option("--embeddings", o->embeddings,
                  "Embedding table for closeness (default: <data-dir>/embeddings.txt)");
  cmd->add_option("--lm-corpus", o->lm_corpus,
                  "Corpus for the fluency language model (default: the original texts)");
  cmd->add_option("--name", o->name, "Report row name (default: from the edit manifest)");
  cmd->add_option("--out", o->out, "Report CSV (default: stdout)");
  cmd->add_option("--json", o->json, "Also write the report as JSON");
  cmd->callback([cmd, &global, o] { RunEvaluate(*cmd, global, *o); });
}

}  // namespace cfedit::cli
