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

#include "socsec/query_gen.hpp"

#include <fstream>
#include <sstream>

#include "socsec/errors.hpp"
#include "socsec/llm_client.hpp"
#include "socsec/text_util.hpp"

namespace socsec {

std::vector<Assumption> load_assumptions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open assumption list: " + path);
  std::vector<Assumption> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw SchemaError("assumption row " + std::to_string(row) +
                        ": expected <id>\\t<text>");
    Assumption a{trim(line.substr(0, tab)), trim(line.substr(tab + 1))};
    if (a.id.empty() || a.text.empty())
      throw SchemaError("assumption row " + std::to_string(row) +
                        ": id and text must be non-empty");
    out.push_back(std::move(a));
  }
  return out;
}

std::string to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::cwe_enumeration: return "cwe_enumeration";
    case QueryKind::relevance_check: return "relevance_check";
    case QueryKind::sva_generation: return "sva_generation";
  }
  return "unknown";
}

TemplateSet TemplateSet::load(const std::string& dir) {
  TemplateSet set;
  for (QueryKind kind : {QueryKind::cwe_enumeration, QueryKind::relevance_check,
                         QueryKind::sva_generation})
    set.templates_[kind] = read_file(dir + "/" + to_string(kind) + ".txt");
  return set;
}

TemplateSet TemplateSet::from_strings(std::map<QueryKind, std::string> templates) {
  TemplateSet set;
  set.templates_ = std::move(templates);
  return set;
}

std::string TemplateSet::render(
    QueryKind kind, const std::map<std::string, std::string>& values) const {
  auto it = templates_.find(kind);
  if (it == templates_.end())
    throw ConfigError("no template loaded for kind " + to_string(kind));
  const std::string& tpl = it->second;
  std::string out;
  out.reserve(tpl.size());
  std::size_t pos = 0;
  while (pos < tpl.size()) {
    auto open = tpl.find("{{", pos);
    if (open == std::string::npos) {
      out.append(tpl, pos, std::string::npos);
      break;
    }
    out.append(tpl, pos, open - pos);
    auto close = tpl.find("}}", open + 2);
    if (close == std::string::npos)
      throw ConfigError("template " + to_string(kind) +
                        ": unterminated placeholder");
    std::string name = tpl.substr(open + 2, close - open - 2);
    auto val = values.find(name);
    if (val == values.end())
      throw ConfigError("template " + to_string(kind) +
                        ": unbound placeholder {{" + name + "}}");
    out += val->second;
    pos = close + 2;
  }
  return out;
}

std::string render_soc_config(const SocSpec& spec) {
  std::ostringstream out;
  out << "SoC Name: " << spec.name << "\n";
  out << "SoC Type: " << spec.type << "\n";
  out << "Usage: " << spec.usage << "\n";
  out << "Bus Protocol: " << spec.bus_protocol << "\n";
  out << "Masters: " << spec.num_masters << "\n";
  out << "Slaves: " << spec.num_slaves << "\n";
  out << "Bus Interface: " << spec.bus_interface.interface_name << " with "
      << spec.bus_interface.num_ports << " ports\n";
  out << "Bus Signals: " << join(spec.bus_interface.signal_names, ", ") << "\n";
  for (const IpBlock& ip : spec.ips) {
    out << (ip.role == IpRole::master ? "MASTER " : "SLAVE ") << ip.name;
    if (ip.abbreviation) out << " (" << *ip.abbreviation << ")";
    out << ": operation " << ip.operation << ", address range "
        << format_hex32(ip.address_range.low) << "-"
        << format_hex32(ip.address_range.high) << ", base "
        << format_hex32(ip.base_address);
    if (ip.protected_range)
      out << ", protected " << format_hex32(ip.protected_range->low) << ":"
          << format_hex32(ip.protected_range->high);
    out << "\n";
  }
  return out.str();
}

QueryText cwe_enumeration_query(const SocSpec& spec,
                                const std::vector<Assumption>& assumptions,
                                const TemplateSet& templates) {
  std::string config = render_soc_config(spec);
  std::string block;
  if (!assumptions.empty()) {
    block = "Assumptions:\n";
    for (const Assumption& a : assumptions) block += "- " + a.text + "\n";
  }
  QueryText q;
  q.kind = QueryKind::cwe_enumeration;
  q.body = templates.render(QueryKind::cwe_enumeration,
                            {{"soc_config", config}, {"assumptions", block}});
  q.context_digest = fnv1a64_hex(config);
  return q;
}

QueryText relevance_query(const CweCandidate& candidate, const SocSpec& spec,
                          const TemplateSet& templates) {
  std::string config = render_soc_config(spec);
  // Description slot carries its own ", " so an empty description leaves
  // "<CWE-352>" rather than "<CWE-352, >".
  std::string desc =
      candidate.description.empty() ? "" : ", " + candidate.description;
  QueryText q;
  q.kind = QueryKind::relevance_check;
  q.body = templates.render(QueryKind::relevance_check,
                            {{"cwe_id", candidate.id},
                             {"cwe_desc", desc},
                             {"soc_config", config}});
  q.context_digest = fnv1a64_hex(config);
  return q;
}

QueryText sva_generation_query(const CweEntry& entry, const SocSpec& spec,
                               const IpBlock* ip,
                               const TemplateSet& templates) {
  if (ip == nullptr && entry.ip == YesNo::yes && entry.bus == YesNo::no)
    throw MissingIpError("entry " + entry.cwe_id +
                         " is IP-level only; an IP block must be supplied");
  std::string ip_context;
  if (ip != nullptr) {
    std::ostringstream out;
    out << "\nTarget IP: " << ip->name;
    if (ip->abbreviation) out << " (" << *ip->abbreviation << ")";
    out << ", operation " << ip->operation << ".";
    out << "\nBus signal names: " << join(spec.bus_interface.signal_names, ", ")
        << ".";
    if (ip->protected_range)
      out << "\nProtected address range: "
          << format_hex32(ip->protected_range->low) << ":"
          << format_hex32(ip->protected_range->high) << ".";
    ip_context = out.str();
  }
  QueryText q;
  q.kind = QueryKind::sva_generation;
  q.body = templates.render(QueryKind::sva_generation,
                            {{"cwe_id", entry.cwe_id},
                             {"bus_protocol", spec.bus_protocol},
                             {"ip_context", ip_context}});
  q.context_digest = fnv1a64_hex(render_soc_config(spec));
  return q;
}

}  // namespace socsec
