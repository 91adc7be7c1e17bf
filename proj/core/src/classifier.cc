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

#include "cfedit/classifier.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "cfedit/errors.h"
#include "cfedit/text.h"
#include "json.hpp"

namespace cfedit {
namespace {

constexpr char kModelHeader[] = "cfedit-nb";
constexpr int kModelVersion = 1;

bool IsWordKey(const std::string& key) {
  for (char c : key) {
    if (std::isalnum(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80) {
      return true;
    }
  }
  return false;
}

std::string FormatDouble(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, len);
}

}  // namespace

void LabeledDataset::Validate() const {
  std::unordered_set<std::string> ids;
  for (const LabeledInstance& inst : instances) {
    if (!ids.insert(inst.id).second) throw DegenerateDataset("duplicate id " + inst.id);
    if (inst.text.empty()) throw DegenerateDataset("empty text for id " + inst.id);
    if (std::find(label_set.begin(), label_set.end(), inst.label) == label_set.end()) {
      throw DegenerateDataset("label '" + inst.label + "' not in label set");
    }
  }
}

LabeledDataset ReadJsonLines(std::istream& in) {
  LabeledDataset data;
  std::set<std::string> labels;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const nlohmann::json row = nlohmann::json::parse(line);
      LabeledInstance inst;
      inst.id = row.at("id").is_string() ? row.at("id").get<std::string>()
                                         : row.at("id").dump();
      inst.text = row.at("text").get<std::string>();
      inst.label = row.at("label").is_string() ? row.at("label").get<std::string>()
                                               : row.at("label").dump();
      labels.insert(inst.label);
      data.instances.push_back(std::move(inst));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  data.label_set.assign(labels.begin(), labels.end());
  return data;
}

LabeledDataset ReadJsonLinesFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return ReadJsonLines(in);
}

TextClassifier TextClassifier::Train(const LabeledDataset& data, double smoothing) {
  if (!(smoothing > 0.0)) throw InvalidConfig("smoothing must be positive");
  data.Validate();
  const int k = static_cast<int>(data.label_set.size());
  std::vector<int> doc_counts(k, 0);
  for (const LabeledInstance& inst : data.instances) {
    const auto it = std::find(data.label_set.begin(), data.label_set.end(), inst.label);
    ++doc_counts[it - data.label_set.begin()];
  }
  const int populated = static_cast<int>(
      std::count_if(doc_counts.begin(), doc_counts.end(), [](int c) { return c > 0; }));
  if (k < 2 || populated < k) {
    throw DegenerateDataset("need at least two classes, each with an instance");
  }

  TextClassifier model;
  model.labels_ = data.label_set;
  model.smoothing_ = smoothing;
  model.class_totals_.assign(k, 0.0);
  for (const LabeledInstance& inst : data.instances) {
    const int label = static_cast<int>(
        std::find(data.label_set.begin(), data.label_set.end(), inst.label) -
        data.label_set.begin());
    for (const std::string& key : WordKeys(Tokenize(inst.text))) {
      auto& counts = model.vocab_[key];
      if (counts.empty()) counts.assign(k, 0.0);
      counts[label] += 1.0;
      model.class_totals_[label] += 1.0;
    }
  }
  const double total_docs = static_cast<double>(data.instances.size());
  for (int c = 0; c < k; ++c) model.log_priors_.push_back(std::log(doc_counts[c] / total_docs));
  return model;
}

double TextClassifier::LogLikelihood(int label, std::string_view word) const {
  const double denom = class_totals_[label] + smoothing_ * static_cast<double>(vocab_.size());
  const auto it = vocab_.find(std::string(word));
  const double count = it == vocab_.end() ? 0.0 : it->second[label];
  return std::log((count + smoothing_) / denom);
}

std::vector<double> TextClassifier::PredictProba(std::span<const std::string> keys) const {
  const int k = num_labels();
  std::vector<double> logp(log_priors_);
  for (const std::string& key : keys) {
    if (!IsWordKey(key)) continue;
    for (int c = 0; c < k; ++c) logp[c] += LogLikelihood(c, key);
  }
  const double peak = *std::max_element(logp.begin(), logp.end());
  double z = 0.0;
  for (double& v : logp) {
    v = std::exp(v - peak);
    z += v;
  }
  for (double& v : logp) v /= z;
  return logp;
}

std::vector<double> TextClassifier::PredictProba(std::string_view text) const {
  return PredictProba(TokenKeys(Tokenize(text)));
}

int TextClassifier::PredictIndex(std::span<const std::string> keys) const {
  const std::vector<double> p = PredictProba(keys);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

const std::string& TextClassifier::PredictLabel(std::string_view text) const {
  return labels_[PredictIndex(TokenKeys(Tokenize(text)))];
}

void TextClassifier::Save(std::ostream& out) const {
  out << kModelHeader << ' ' << kModelVersion << '\n';
  out << "smoothing " << FormatDouble(smoothing_) << '\n';
  out << "labels " << labels_.size();
  for (const std::string& l : labels_) out << ' ' << l;
  out << '\n';
  out << "log_priors";
  for (double p : log_priors_) out << ' ' << FormatDouble(p);
  out << '\n';
  out << "class_totals";
  for (double t : class_totals_) out << ' ' << FormatDouble(t);
  out << '\n';
  out << "vocab " << vocab_.size() << '\n';
  // Sorted for byte-stable files.
  std::map<std::string, std::vector<double>> sorted(vocab_.begin(), vocab_.end());
  for (const auto& [word, counts] : sorted) {
    out << word;
    for (double c : counts) out << ' ' << FormatDouble(c);
    out << '\n';
  }
}

TextClassifier TextClassifier::Load(std::istream& in) {
  TextClassifier model;
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != kModelHeader) {
    throw ParseError("not a naive Bayes model file");
  }
  if (version != kModelVersion) {
    throw ParseError("unsupported model version " + std::to_string(version));
  }
  size_t k = 0;
  size_t v = 0;
  auto expect = [&](const char* key) {
    if (!(in >> tag) || tag != key) throw ParseError(std::string("expected ") + key);
  };
  expect("smoothing");
  in >> model.smoothing_;
  expect("labels");
  in >> k;
  model.labels_.resize(k);
  for (auto& l : model.labels_) in >> l;
  expect("log_priors");
  model.log_priors_.resize(k);
  for (auto& p : model.log_priors_) in >> p;
  expect("class_totals");
  model.class_totals_.resize(k);
  for (auto& t : model.class_totals_) in >> t;
  expect("vocab");
  in >> v;
  for (size_t i = 0; i < v; ++i) {
    std::string word;
    std::vector<double> counts(k);
    in >> word;
    for (auto& c : counts) in >> c;
    model.vocab_.emplace(std::move(word), std::move(counts));
  }
  if (!in || k < 2) throw ParseError("truncated naive Bayes model");
  return model;
}

}  // namespace cfedit
