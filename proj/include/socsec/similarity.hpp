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
//
// Token-level text similarity used to map free-form weakness descriptions
// onto database entries.  Descriptions are lowercased, punctuation-stripped,
// stopword-filtered and stemmed, then compared by cosine over smoothed
// tf-idf weights (idf = ln((1+N)/(1+df)) + 1).  Scores depend on the corpus
// handed to vectorize(); only the induced ranking is treated as meaningful
// by callers.

#ifndef SOCSEC_SIMILARITY_HPP_
#define SOCSEC_SIMILARITY_HPP_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "socsec/cwe_db.hpp"

namespace socsec {

// Porter's suffix-stripping algorithm (the classic 1980 formulation).
// Lowercase input expected; inputs of length <= 2 pass through unchanged.
std::string porter_stem(std::string word);

class Stopwords {
 public:
  // One word per line; '#' lines are comments.  Matching is on the
  // lowercased token before stemming.
  static Stopwords load(const std::string& path);
  static Stopwords from_words(std::vector<std::string> words);

  bool contains(std::string_view token) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

// lowercase -> strip punctuation -> split -> drop stopwords -> stem.
// Parenthetical clauses contribute their tokens like any other text.
std::vector<std::string> normalize(std::string_view text, const Stopwords& stopwords);

struct CorpusStats {
  std::size_t doc_count = 0;
  std::map<std::string, std::size_t> doc_freq;

  void add_doc(const std::vector<std::string>& tokens);
};

struct TextVector {
  std::map<std::string, double> weights;
  double norm = 0.0;
};

TextVector vectorize(const std::vector<std::string>& tokens, const CorpusStats& stats);

// 0 when either vector is empty; symmetric; 1 for identical non-empty input.
double cosine_sim(const TextVector& a, const TextVector& b);

// Scores `description` against every database entry, with corpus statistics
// built over the database descriptions plus the query text.  Ties are broken
// toward the numerically lowest cwe_id.  Returns {nullptr, 0.0} for an empty
// database or a query that normalizes to nothing.
std::pair<const CweEntry*, double> best_match(std::string_view description,
                                              const Db& db,
                                              const Stopwords& stopwords);

}  // namespace socsec

#endif  // SOCSEC_SIMILARITY_HPP_
