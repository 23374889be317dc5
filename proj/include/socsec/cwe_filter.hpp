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
// Reduces a raw LLM candidate list to the relevant filtered list for a
// given SoC.  Candidates resolve through three routes, tried in order:
// exact id lookup in the database, cosine-similarity description match
// above a threshold (which rewrites the candidate's claimed id to the
// database entry's id), and an optional LLM relevance check that can grow
// the database.  Mapping assigns bus and/or ip placement levels from the
// entry's classification flags and its MISC ip_name/ip_type hints.

#ifndef SOCSEC_CWE_FILTER_HPP_
#define SOCSEC_CWE_FILTER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "socsec/cwe_db.hpp"
#include "socsec/llm_client.hpp"
#include "socsec/query_gen.hpp"
#include "socsec/similarity.hpp"
#include "socsec/soc_spec.hpp"

namespace socsec {

enum class CweLevel { bus, ip };
enum class MatchRoute { exact_id, similarity, llm_confirmed };

std::string to_string(CweLevel level);
std::string to_string(MatchRoute route);

struct FilteredCwe {
  CweEntry entry;  // post-mapping, canonical cwe_id
  std::vector<CweLevel> levels;  // non-empty; bus ordered before ip
  std::vector<std::string> matched_ips;  // spec declaration order, deduped
  MatchRoute match_route = MatchRoute::exact_id;
  std::optional<double> similarity_score;

  bool operator==(const FilteredCwe&) const = default;
};

struct FilterConfig {
  double similarity_threshold = 0.75;
  bool llm_fallback_enabled = false;
  enum class IndeterminatePolicy { drop, keep };
  IndeterminatePolicy indeterminate_policy = IndeterminatePolicy::drop;
  // When set, an ip=yes entry with no MISC hints matches every IP instead
  // of none.  Off by default: the strict reading over-filters but never
  // fabricates placements.
  bool ip_match_fallback_all = false;
};

// One record per candidate processed, for the diagnostics sidecar.
struct FilterDiagnostic {
  std::string candidate_id;  // canonical claimed id
  std::size_t source_rank = 1;
  std::string route;  // exact_id | similarity | llm_confirmed | none
  std::optional<double> similarity_score;
  std::string resolved_id;  // differs from candidate_id on similarity rewrite
  bool included = false;
  std::string skip_reason;  // empty when included
};

std::string diagnostics_to_jsonl(const std::vector<FilterDiagnostic>& diags);

// LLM plumbing for the fallback branch; both members may be null, which
// disables the branch regardless of config.
struct FilterEnv {
  LlmClient* llm = nullptr;
  const TemplateSet* templates = nullptr;
};

struct FilterResult {
  std::vector<FilteredCwe> filtered;
  Db db;  // input database plus any llm_confirmed appends
  std::vector<FilterDiagnostic> diagnostics;
};

// Candidates are processed in source_rank order and the database evolves
// during the run, so a later candidate can exact-match an entry appended by
// an earlier one.  Stopwords feed the similarity route.
FilterResult filter_cwes(const std::vector<CweCandidate>& candidates,
                         const Db& db, const SocSpec& spec,
                         const Stopwords& stopwords, const FilterEnv& env,
                         const FilterConfig& config);

// Placement mapping for one resolved candidate.  bus=yes adds a bus level;
// ip=yes adds an ip level only for IPs whose name/abbreviation appears in
// entry.misc.ip_name or whose operation appears in entry.misc.ip_type
// (case-insensitive).  An id already in `acc` has levels and matched IPs
// merged onto the existing record instead of being duplicated.
std::vector<FilteredCwe> map_cwe(const CweEntry& entry,
                                 const std::vector<IpBlock>& ips,
                                 std::vector<FilteredCwe> acc,
                                 MatchRoute route,
                                 std::optional<double> similarity_score,
                                 bool ip_match_fallback_all);

// Share of relevant CWEs in the LLM response: filtered / total, 0 when
// total is 0.  Throws Error when filtered exceeds total.
double relevance_metric(std::size_t filtered_count, std::size_t total_count);

}  // namespace socsec

#endif  // SOCSEC_CWE_FILTER_HPP_
