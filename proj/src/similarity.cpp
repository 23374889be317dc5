// Copyright 2026 The socsec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "socsec/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "socsec/errors.hpp"
#include "socsec/text_util.hpp"

namespace socsec {

Stopwords Stopwords::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword list: " + path);
  Stopwords sw;
  std::string line;
  while (std::getline(in, line)) {
    std::string word(trim(line));
    if (word.empty() || word[0] == '#') continue;
    sw.words_.insert(to_lower(word));
  }
  return sw;
}

Stopwords Stopwords::from_words(std::vector<std::string> words) {
  Stopwords sw;
  for (auto& w : words) sw.words_.insert(to_lower(w));
  return sw;
}

bool Stopwords::contains(std::string_view token) const {
  return words_.find(token) != words_.end();
}

std::vector<std::string> normalize(std::string_view text, const Stopwords& stopwords) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (char c : text) {
    unsigned char uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc))
      cleaned.push_back(static_cast<char>(std::tolower(uc)));
    else
      cleaned.push_back(' ');
  }
  std::vector<std::string> tokens;
  std::istringstream iss(cleaned);
  std::string tok;
  while (iss >> tok) {
    if (stopwords.contains(tok)) continue;
    tokens.push_back(porter_stem(std::move(tok)));
  }
  return tokens;
}

void CorpusStats::add_doc(const std::vector<std::string>& tokens) {
  ++doc_count;
  std::set<std::string> unique(tokens.begin(), tokens.end());
  for (const auto& t : unique) ++doc_freq[t];
}

TextVector vectorize(const std::vector<std::string>& tokens, const CorpusStats& stats) {
  TextVector v;
  for (const auto& t : tokens) v.weights[t] += 1.0;
  double n = static_cast<double>(stats.doc_count);
  double sum_sq = 0.0;
  for (auto& [term, weight] : v.weights) {
    auto it = stats.doc_freq.find(term);
    double df = it == stats.doc_freq.end() ? 0.0 : static_cast<double>(it->second);
    double idf = std::log((1.0 + n) / (1.0 + df)) + 1.0;
    weight *= idf;
    sum_sq += weight * weight;
  }
  v.norm = std::sqrt(sum_sq);
  return v;
}

double cosine_sim(const TextVector& a, const TextVector& b) {
  if (a.norm == 0.0 || b.norm == 0.0) return 0.0;
  const TextVector& small = a.weights.size() <= b.weights.size() ? a : b;
  const TextVector& large = a.weights.size() <= b.weights.size() ? b : a;
  double dot = 0.0;
  for (const auto& [term, weight] : small.weights) {
    auto it = large.weights.find(term);
    if (it != large.weights.end()) dot += weight * it->second;
  }
  return dot / (a.norm * b.norm);
}

namespace {

// Numeric part of a canonical id, for deterministic tie-breaking.
long cwe_number(const std::string& cwe_id) {
  auto pos = cwe_id.find('-');
  if (pos == std::string::npos || pos + 1 >= cwe_id.size()) return LONG_MAX;
  return std::strtol(cwe_id.c_str() + pos + 1, nullptr, 10);
}

}  // namespace

std::pair<const CweEntry*, double> best_match(std::string_view description,
                                              const Db& db,
                                              const Stopwords& stopwords) {
  if (db.entries().empty()) return {nullptr, 0.0};
  auto query_tokens = normalize(description, stopwords);
  if (query_tokens.empty()) return {nullptr, 0.0};

  std::vector<std::vector<std::string>> docs;
  docs.reserve(db.entries().size());
  CorpusStats stats;
  for (const auto& entry : db.entries()) {
    docs.push_back(normalize(entry.description, stopwords));
    stats.add_doc(docs.back());
  }
  stats.add_doc(query_tokens);

  TextVector query_vec = vectorize(query_tokens, stats);
  const CweEntry* best = nullptr;
  double best_score = -1.0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    double score = cosine_sim(query_vec, vectorize(docs[i], stats));
    const CweEntry& entry = db.entries()[i];
    bool better = score > best_score;
    if (!better && best != nullptr && score == best_score)
      better = cwe_number(entry.cwe_id) < cwe_number(best->cwe_id);
    if (better) {
      best = &entry;
      best_score = score;
    }
  }
  return {best, best_score};
}

}  // namespace socsec
