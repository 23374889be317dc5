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
// Deterministic construction of LLM prompt texts from a design spec, user
// assumptions, weakness entries and pipeline stage.  Prompt skeletons live
// in external template files so they can be tuned without recompiling.

#ifndef SOCSEC_QUERY_GEN_HPP_
#define SOCSEC_QUERY_GEN_HPP_

#include <map>
#include <string>
#include <vector>

#include "socsec/cwe_db.hpp"
#include "socsec/soc_spec.hpp"

namespace socsec {

struct CweCandidate;  // llm_client.hpp

struct Assumption {
  std::string id;
  std::string text;

  bool operator==(const Assumption&) const = default;
};

// TSV with columns id, text; '#' lines are comments.
std::vector<Assumption> load_assumptions(const std::string& path);

enum class QueryKind { cwe_enumeration, relevance_check, sva_generation };

std::string to_string(QueryKind kind);

struct QueryText {
  QueryKind kind = QueryKind::cwe_enumeration;
  std::string body;
  // Digest of the rendered SoC configuration the query was built from, so
  // cached or mocked responses can be tied to a specific design.
  std::string context_digest;

  bool operator==(const QueryText&) const = default;
};

// Loads <dir>/cwe_enumeration.txt, <dir>/relevance_check.txt and
// <dir>/sva_generation.txt.  Placeholders are written {{name}}; rendering
// with a placeholder left unbound is a ConfigError.
class TemplateSet {
 public:
  static TemplateSet load(const std::string& dir);
  static TemplateSet from_strings(std::map<QueryKind, std::string> templates);

  std::string render(QueryKind kind,
                     const std::map<std::string, std::string>& values) const;

 private:
  std::map<QueryKind, std::string> templates_;
};

// Multi-line listing of SoC name, bus protocol and each IP with its role,
// operation and address ranges.  Byte-identical for equal specs.
std::string render_soc_config(const SocSpec& spec);

QueryText cwe_enumeration_query(const SocSpec& spec,
                                const std::vector<Assumption>& assumptions,
                                const TemplateSet& templates);

QueryText relevance_query(const CweCandidate& candidate, const SocSpec& spec,
                          const TemplateSet& templates);

// `ip` may be null for bus-level entries.  Throws MissingIpError when the
// entry is IP-level only (ip=yes, bus=no) and no IP is supplied.
QueryText sva_generation_query(const CweEntry& entry, const SocSpec& spec,
                               const IpBlock* ip, const TemplateSet& templates);

}  // namespace socsec

#endif  // SOCSEC_QUERY_GEN_HPP_
