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

#include "socsec/cwe_filter.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "socsec/errors.hpp"
#include "socsec/text_util.hpp"

namespace socsec {

std::string to_string(CweLevel level) {
  return level == CweLevel::bus ? "bus" : "ip";
}

std::string to_string(MatchRoute route) {
  switch (route) {
    case MatchRoute::exact_id: return "exact_id";
    case MatchRoute::similarity: return "similarity";
    case MatchRoute::llm_confirmed: return "llm_confirmed";
  }
  return "unknown";
}

std::string diagnostics_to_jsonl(const std::vector<FilterDiagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    nlohmann::json rec;
    rec["candidate_id"] = d.candidate_id;
    rec["source_rank"] = d.source_rank;
    rec["route"] = d.route;
    if (d.similarity_score) rec["similarity_score"] = *d.similarity_score;
    rec["resolved_id"] = d.resolved_id;
    rec["included"] = d.included;
    if (!d.skip_reason.empty()) rec["skip_reason"] = d.skip_reason;
    out += rec.dump() + "\n";
  }
  return out;
}

namespace {

FilteredCwe* find_by_id(std::vector<FilteredCwe>& acc, const std::string& id) {
  for (auto& f : acc)
    if (f.entry.cwe_id == id) return &f;
  return nullptr;
}

void add_level(FilteredCwe& f, CweLevel level) {
  if (std::find(f.levels.begin(), f.levels.end(), level) != f.levels.end())
    return;
  f.levels.push_back(level);
  std::sort(f.levels.begin(), f.levels.end());  // bus before ip
}

bool contains_ci(const std::vector<std::string>& haystack,
                 const std::string& needle) {
  for (const auto& h : haystack)
    if (equals_ci(h, needle)) return true;
  return false;
}

}  // namespace

std::vector<FilteredCwe> map_cwe(const CweEntry& entry,
                                 const std::vector<IpBlock>& ips,
                                 std::vector<FilteredCwe> acc,
                                 MatchRoute route,
                                 std::optional<double> similarity_score,
                                 bool ip_match_fallback_all) {
  // Which IPs this entry's hints select, in declaration order.
  std::vector<std::string> matched;
  if (entry.ip == YesNo::yes) {
    bool fallback = ip_match_fallback_all && entry.misc.ip_name.empty() &&
                    entry.misc.ip_type.empty();
    for (const IpBlock& ip : ips) {
      bool hit = fallback || contains_ci(entry.misc.ip_name, ip.name) ||
                 (ip.abbreviation &&
                  contains_ci(entry.misc.ip_name, *ip.abbreviation)) ||
                 contains_ci(entry.misc.ip_type, ip.operation);
      if (hit) matched.push_back(ip.name);
    }
  }

  bool wants_bus = entry.bus == YesNo::yes;
  bool wants_ip = entry.ip == YesNo::yes && !matched.empty();
  if (!wants_bus && !wants_ip) return acc;

  FilteredCwe* existing = find_by_id(acc, entry.cwe_id);
  if (existing == nullptr) {
    acc.push_back(FilteredCwe{entry, {}, {}, route, similarity_score});
    existing = &acc.back();
  }
  if (wants_bus) add_level(*existing, CweLevel::bus);
  if (wants_ip) {
    add_level(*existing, CweLevel::ip);
    for (const auto& name : matched)
      if (std::find(existing->matched_ips.begin(), existing->matched_ips.end(),
                    name) == existing->matched_ips.end())
        existing->matched_ips.push_back(name);
  }
  return acc;
}

FilterResult filter_cwes(const std::vector<CweCandidate>& candidates,
                         const Db& db, const SocSpec& spec,
                         const Stopwords& stopwords, const FilterEnv& env,
                         const FilterConfig& config) {
  if (db.size() == 0) throw Error("filter_cwes requires a non-empty database");

  std::vector<CweCandidate> ordered = candidates;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const CweCandidate& a, const CweCandidate& b) {
                     return a.source_rank < b.source_rank;
                   });

  FilterResult result;
  result.db = db;
  for (const CweCandidate& raw : ordered) {
    CweCandidate candidate = raw;
    candidate.id = canonical_cwe_id(candidate.id);
    FilterDiagnostic diag;
    diag.candidate_id = candidate.id;
    diag.source_rank = candidate.source_rank;
    diag.resolved_id = candidate.id;

    if (candidate.id.empty()) {
      diag.route = "none";
      diag.skip_reason = "unparseable cwe id";
      result.diagnostics.push_back(std::move(diag));
      continue;
    }

    if (const CweEntry* entry = result.db.lookup(candidate.id)) {
      diag.route = to_string(MatchRoute::exact_id);
      bool merged_onto =
          find_by_id(result.filtered, entry->cwe_id) != nullptr;
      result.filtered = map_cwe(*entry, spec.ips, std::move(result.filtered),
                                MatchRoute::exact_id, std::nullopt,
                                config.ip_match_fallback_all);
      diag.resolved_id = entry->cwe_id;
      diag.included = find_by_id(result.filtered, entry->cwe_id) != nullptr;
      if (!diag.included)
        diag.skip_reason = "no bus or ip level matched for this design";
      else if (merged_onto)
        diag.skip_reason = "duplicate cwe_id; levels merged";
      result.diagnostics.push_back(std::move(diag));
      continue;
    }

    auto [match, score] = best_match(candidate.description, result.db, stopwords);
    if (match != nullptr && score > config.similarity_threshold) {
      CweEntry entry = *match;  // copy before the db can reallocate
      diag.route = to_string(MatchRoute::similarity);
      diag.similarity_score = score;
      diag.resolved_id = entry.cwe_id;
      bool merged_onto = find_by_id(result.filtered, entry.cwe_id) != nullptr;
      result.filtered = map_cwe(entry, spec.ips, std::move(result.filtered),
                                MatchRoute::similarity, score,
                                config.ip_match_fallback_all);
      diag.included = find_by_id(result.filtered, entry.cwe_id) != nullptr;
      if (!diag.included)
        diag.skip_reason = "no bus or ip level matched for this design";
      else if (merged_onto)
        diag.skip_reason = "duplicate cwe_id; levels merged";
      result.diagnostics.push_back(std::move(diag));
      continue;
    }

    if (config.llm_fallback_enabled && env.llm != nullptr &&
        env.templates != nullptr) {
      diag.route = to_string(MatchRoute::llm_confirmed);
      QueryText query = relevance_query(candidate, spec, *env.templates);
      std::string response = env.llm->send(query);
      RelevanceVerdict verdict = parse_relevance(response);
      bool keep = verdict == RelevanceVerdict::relevant ||
                  (verdict == RelevanceVerdict::indeterminate &&
                   config.indeterminate_policy ==
                       FilterConfig::IndeterminatePolicy::keep);
      if (keep) {
        // Classified bus-level pending curation: the relevance question is
        // asked about a bus-based SoC, and filtered records need a level.
        CweEntry entry;
        entry.cwe_id = candidate.id;
        entry.description = candidate.description;
        entry.bus = YesNo::yes;
        entry.ip = YesNo::no;
        entry.sync = SyncClass::not_applicable;
        entry.violation_type = ViolationType::not_applicable;
        entry.provenance = "llm_confirmed";
        result.db.append(entry);
        result.filtered.push_back(FilteredCwe{
            entry, {CweLevel::bus}, {}, MatchRoute::llm_confirmed,
            std::nullopt});
        diag.included = true;
      } else {
        diag.skip_reason = verdict == RelevanceVerdict::not_relevant
                               ? "llm judged not relevant"
                               : "llm verdict indeterminate";
      }
      result.diagnostics.push_back(std::move(diag));
      continue;
    }

    diag.route = "none";
    diag.skip_reason = config.llm_fallback_enabled
                           ? "llm fallback enabled but no client configured"
                           : "no id or similarity match; llm fallback disabled";
    result.diagnostics.push_back(std::move(diag));
  }
  return result;
}

double relevance_metric(std::size_t filtered_count, std::size_t total_count) {
  if (filtered_count > total_count)
    throw Error("relevance_metric: filtered count " +
                std::to_string(filtered_count) + " exceeds total " +
                std::to_string(total_count));
  if (total_count == 0) return 0.0;
  return static_cast<double>(filtered_count) /
         static_cast<double>(total_count);
}

}  // namespace socsec
