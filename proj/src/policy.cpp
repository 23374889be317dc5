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

#include "socsec/policy.hpp"

#include <cctype>
#include <cstring>
#include <set>

#include "nlohmann/json.hpp"
#include "socsec/errors.hpp"
#include "socsec/text_util.hpp"

namespace socsec {
namespace {

using Json = nlohmann::ordered_json;

bool is_bare_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!is_ident_char(c)) return false;
  return true;
}

// Qualified reference: slave['Name'].signal or master['Name'].signal.
// Returns (role-keyword, name, signal) when s matches exactly.
struct QualifiedRef {
  std::string role;
  std::string name;
  std::string signal;
};

std::optional<QualifiedRef> parse_qualified(const std::string& s) {
  QualifiedRef ref;
  std::size_t pos = 0;
  for (const char* role : {"slave", "master"}) {
    std::string r = role;
    if (s.rfind(r + "['", 0) == 0) {
      ref.role = r;
      pos = r.size() + 2;
      break;
    }
  }
  if (ref.role.empty()) return std::nullopt;
  std::size_t quote = s.find('\'', pos);
  if (quote == std::string::npos || quote == pos) return std::nullopt;
  ref.name = s.substr(pos, quote - pos);
  if (s.compare(quote, 2, "']") != 0) return std::nullopt;
  std::size_t dot = quote + 2;
  if (dot >= s.size() || s[dot] != '.') return std::nullopt;
  ref.signal = s.substr(dot + 1);
  if (!is_bare_identifier(ref.signal)) return std::nullopt;
  return ref;
}

void check_target(const std::string& target, const std::string& statement) {
  if (is_bare_identifier(target)) return;
  if (parse_qualified(target)) return;
  throw ActionParseError("invalid assignment target \"" + target +
                         "\" in \"" + statement +
                         "\"; expected an identifier or slave['Name'].signal");
}

std::string edge_to_string(ClockEdge edge) {
  return edge == ClockEdge::posedge ? "posedge" : "negedge";
}

ClockEdge edge_from_string(const std::string& s) {
  if (s == "posedge") return ClockEdge::posedge;
  if (s == "negedge") return ClockEdge::negedge;
  throw SchemaError("invalid clock edge \"" + s + "\" in policy document");
}

}  // namespace

std::vector<SignalAssignment> parse_actions(const std::string& input) {
  std::vector<SignalAssignment> out;
  for (const std::string& piece : split(input, ';')) {
    std::string statement = trim(piece);
    if (statement.empty()) continue;
    std::size_t eq = statement.find('=');
    if (eq == std::string::npos)
      throw ActionParseError("action statement \"" + statement +
                             "\" has no '='; expected target = value");
    if (eq + 1 < statement.size() && statement[eq + 1] == '=')
      throw ActionParseError("action statement \"" + statement +
                             "\" uses '==' where an assignment was expected");
    std::string target = trim(statement.substr(0, eq));
    std::string value = trim(statement.substr(eq + 1));
    if (target.empty() || value.empty())
      throw ActionParseError("action statement \"" + statement +
                             "\" is missing a " +
                             (target.empty() ? "target" : "value"));
    check_target(target, statement);
    out.push_back({std::move(target), std::move(value)});
  }
  if (out.empty())
    throw ActionParseError("action input contains no assignments");
  return out;
}

namespace {

// Appends an expression atom, fusing with the previous expression when the
// two were separated by an explicit ##0 (same-cycle conjunction).
void emit_expression(std::vector<PredicateAtom>& atoms, const std::string& expr) {
  if (!atoms.empty() && atoms.back().kind == AtomKind::expression) {
    atoms.back().expr += " && " + expr;
    return;
  }
  atoms.push_back(PredicateAtom::expression(expr));
}

void emit_side(std::vector<PredicateAtom>& atoms,
               const std::vector<SeqItem>& items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    emit_expression(atoms, items[i].expr);
    if (i + 1 < items.size() && items[i].following_delay > 0)
      atoms.push_back(PredicateAtom::delay(items[i].following_delay));
  }
}

}  // namespace

SecurityPolicy assertion_to_policy(const AssertionUnit& unit,
                                   const std::string& action_input,
                                   const SocSpec& spec) {
  (void)spec;  // reference resolution happens in classify_placement
  SecurityPolicy policy;
  if (unit.clocking) {
    policy.timing.clock = {unit.clocking->edge, unit.clocking->signal};
    if (unit.clocking->reset) policy.timing.reset = *unit.clocking->reset;
  }
  policy.timing.mode = 0;

  const PropertyExpr& body = unit.property_body;
  if (body.is_implication) {
    if (body.antecedent.empty() || body.consequent.empty())
      throw Error("assertion property has an empty implication side");
    emit_side(policy.predicate, body.antecedent);
    // Absent antecedent-to-consequent delay defaults to one cycle; the
    // non-overlapped operator contributes one more.
    std::uint32_t gap = body.antecedent.back().following_delay;
    if (body.op == ImplOp::non_overlapped) gap += 1;
    else if (gap == 0) gap = 1;
    policy.predicate.push_back(PredicateAtom::delay(gap));
    emit_side(policy.predicate, body.consequent);
  } else {
    if (trim(body.boolean_expr).empty())
      throw Error("assertion property has an empty boolean expression");
    policy.predicate.push_back(PredicateAtom::expression(body.boolean_expr));
  }

  policy.action = parse_actions(action_input);
  return policy;
}

std::vector<QualifiedSignalRef> find_qualified_refs(const std::string& text) {
  std::vector<QualifiedSignalRef> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = std::string::npos;
    std::string role;
    for (const char* candidate : {"slave['", "master['"}) {
      std::size_t hit = text.find(candidate, pos);
      while (hit != std::string::npos && hit > 0 &&
             is_ident_char(text[hit - 1]))
        hit = text.find(candidate, hit + 1);
      if (hit != std::string::npos && hit < next) {
        next = hit;
        role = std::string(candidate, std::strlen(candidate) - 2);
      }
    }
    if (next == std::string::npos) break;
    std::size_t end = text.find("']", next + role.size() + 2);
    if (end == std::string::npos) {
      pos = next + role.size();
      continue;
    }
    std::size_t sig_end = end + 2;
    if (sig_end < text.size() && text[sig_end] == '.') {
      ++sig_end;
      while (sig_end < text.size() && is_ident_char(text[sig_end])) ++sig_end;
    }
    auto parsed = parse_qualified(text.substr(next, sig_end - next));
    if (parsed) {
      out.push_back({parsed->role, parsed->name, parsed->signal, next, sig_end});
      pos = sig_end;
    } else {
      pos = next + role.size();
    }
  }
  return out;
}

namespace {

// Signal references of one expression or target string: qualified
// slave['X'].sig / master['X'].sig occurrences plus leftover bare
// identifiers.  Qualified regions are blanked before the bare scan.
void collect_refs(const std::string& text,
                  std::vector<QualifiedSignalRef>& qualified,
                  std::vector<std::string>& bare) {
  std::string s = text;
  for (const QualifiedSignalRef& ref : find_qualified_refs(text)) {
    qualified.push_back(ref);
    for (std::size_t k = ref.begin; k < ref.end; ++k) s[k] = ' ';
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) continue;
    if (i > 0 && is_ident_char(s[i - 1])) continue;
    std::size_t end = i;
    while (end < s.size() && is_ident_char(s[end])) ++end;
    bare.push_back(s.substr(i, end - i));
    i = end - 1;
  }
}

bool is_clock_like(const std::string& ident) {
  std::string low = to_lower(ident);
  for (const char* prefix : {"clk", "rst", "clock", "reset"})
    if (low.rfind(prefix, 0) == 0) return true;
  return false;
}

bool misc_matches(const CweEntry& entry, const IpBlock& ip) {
  for (const std::string& hint : entry.misc.ip_name) {
    if (equals_ci(hint, ip.name)) return true;
    if (ip.abbreviation && equals_ci(hint, *ip.abbreviation)) return true;
  }
  for (const std::string& hint : entry.misc.ip_type)
    if (equals_ci(hint, ip.operation)) return true;
  return false;
}

}  // namespace

SecurityPolicy classify_placement(SecurityPolicy policy, const CweEntry* entry,
                                  const SocSpec& spec) {
  std::vector<QualifiedSignalRef> qualified;
  std::vector<std::string> bare;
  for (const PredicateAtom& atom : policy.predicate)
    if (atom.kind == AtomKind::expression)
      collect_refs(atom.expr, qualified, bare);
  for (const SignalAssignment& assignment : policy.action)
    collect_refs(assignment.target, qualified, bare);

  std::set<std::string> ip_names;
  for (const QualifiedSignalRef& ref : qualified) {
    const IpBlock* ip = spec.find_ip_loose(ref.ip_name);
    if (ip == nullptr)
      throw UnresolvableSignalError(
          "'" + ref.role + "[\'" + ref.ip_name + "\']." + ref.signal +
          "' matches no IP in the specification");
    ip_names.insert(ip->name);
  }

  bool bus_ref = false;
  std::vector<std::string> unresolved;
  for (const std::string& ident : bare) {
    bool is_bus = false;
    for (const std::string& sig : spec.bus_interface.signal_names)
      if (equals_ci(ident, sig)) is_bus = true;
    if (is_bus) bus_ref = true;
    else if (!is_clock_like(ident)) unresolved.push_back(ident);
  }

  if (bus_ref || ip_names.size() > 1) {
    policy.placement = Placement{PlacementLevel::bus, {}};
    return policy;
  }
  if (ip_names.size() == 1) {
    if (entry != nullptr && entry->bus == YesNo::yes && entry->ip == YesNo::no)
      policy.placement = Placement{PlacementLevel::bus, {}};
    else
      policy.placement = Placement{PlacementLevel::ip, *ip_names.begin()};
    return policy;
  }

  // No resolvable reference; fall back to the CWE classification.
  if (entry != nullptr) {
    if (entry->ip == YesNo::yes) {
      for (const IpBlock& ip : spec.ips) {
        if (misc_matches(*entry, ip)) {
          policy.placement = Placement{PlacementLevel::ip, ip.name};
          return policy;
        }
      }
    }
    if (entry->bus == YesNo::yes) {
      policy.placement = Placement{PlacementLevel::bus, {}};
      return policy;
    }
  }
  std::string detail;
  for (const std::string& ident : unresolved)
    detail += (detail.empty() ? "" : ", ") + ident;
  throw UnresolvableSignalError(
      "policy references resolve to no bus signal or IP" +
      (detail.empty() ? std::string() : " (unresolved: " + detail + ")"));
}

namespace {

Json policy_to_json(const SecurityPolicy& policy) {
  Json doc;
  Json predicate = Json::array();
  for (const PredicateAtom& atom : policy.predicate) {
    if (atom.kind == AtomKind::expression)
      predicate.push_back({{"expr", atom.expr}});
    else
      predicate.push_back({{"delay_cycles", atom.cycles}});
  }
  doc["predicate"] = std::move(predicate);

  Json timing;
  if (policy.timing.clock) {
    timing["clock_edge"] = edge_to_string(policy.timing.clock->first);
    timing["clock_signal"] = policy.timing.clock->second;
  }
  if (policy.timing.reset) {
    timing["reset_edge"] = edge_to_string(policy.timing.reset->first);
    timing["reset_signal"] = policy.timing.reset->second;
  }
  timing["mode"] = policy.timing.mode;
  doc["timing"] = std::move(timing);

  Json action = Json::array();
  for (const SignalAssignment& assignment : policy.action)
    action.push_back({{"target", assignment.target},
                      {"value", assignment.value}});
  doc["action"] = std::move(action);

  if (policy.source_cwe) doc["source_cwe"] = *policy.source_cwe;
  if (policy.placement) {
    Json placement;
    if (policy.placement->level == PlacementLevel::bus) {
      placement["level"] = "bus";
    } else {
      placement["level"] = "ip";
      placement["ip"] = policy.placement->ip_name;
    }
    doc["placement"] = std::move(placement);
  }
  return doc;
}

SecurityPolicy policy_from_json(const Json& doc) {
  if (!doc.is_object())
    throw SchemaError("policy document must be a JSON object");
  SecurityPolicy policy;

  auto pred_it = doc.find("predicate");
  if (pred_it == doc.end() || !pred_it->is_array() || pred_it->empty())
    throw SchemaError("policy document needs a non-empty \"predicate\" array");
  for (const Json& item : *pred_it) {
    if (item.contains("expr")) {
      std::string expr = item.at("expr").get<std::string>();
      if (trim(expr).empty())
        throw SchemaError("policy predicate has an empty expression");
      policy.predicate.push_back(PredicateAtom::expression(std::move(expr)));
    } else if (item.contains("delay_cycles")) {
      std::uint32_t cycles = item.at("delay_cycles").get<std::uint32_t>();
      if (cycles == 0)
        throw SchemaError("policy delay markers must be at least one cycle");
      policy.predicate.push_back(PredicateAtom::delay(cycles));
    } else {
      throw SchemaError("policy predicate atoms need \"expr\" or \"delay_cycles\"");
    }
  }
  for (std::size_t i = 0; i < policy.predicate.size(); ++i) {
    bool is_delay = policy.predicate[i].kind == AtomKind::delay;
    bool boundary = i == 0 || i + 1 == policy.predicate.size();
    if (is_delay && boundary)
      throw SchemaError("policy predicate cannot start or end with a delay");
    if (i > 0 && policy.predicate[i].kind == policy.predicate[i - 1].kind)
      throw SchemaError("policy predicate must alternate expressions and delays");
  }

  auto timing_it = doc.find("timing");
  if (timing_it == doc.end() || !timing_it->is_object())
    throw SchemaError("policy document needs a \"timing\" object");
  const Json& timing = *timing_it;
  if (timing.contains("clock_signal") != timing.contains("clock_edge"))
    throw SchemaError("policy timing clock needs both edge and signal");
  if (timing.contains("clock_signal"))
    policy.timing.clock = {
        edge_from_string(timing.at("clock_edge").get<std::string>()),
        timing.at("clock_signal").get<std::string>()};
  if (timing.contains("reset_signal") != timing.contains("reset_edge"))
    throw SchemaError("policy timing reset needs both edge and signal");
  if (timing.contains("reset_signal"))
    policy.timing.reset = {
        edge_from_string(timing.at("reset_edge").get<std::string>()),
        timing.at("reset_signal").get<std::string>()};
  policy.timing.mode = timing.value("mode", 0);
  if (policy.timing.mode < 0)
    throw SchemaError("policy timing mode must be non-negative");

  auto action_it = doc.find("action");
  if (action_it == doc.end() || !action_it->is_array())
    throw SchemaError("policy document needs an \"action\" array");
  for (const Json& item : *action_it) {
    SignalAssignment assignment{item.at("target").get<std::string>(),
                                item.at("value").get<std::string>()};
    if (assignment.target.empty() || assignment.value.empty())
      throw SchemaError("policy actions need non-empty target and value");
    check_target(assignment.target, assignment.target);
    policy.action.push_back(std::move(assignment));
  }

  if (doc.contains("source_cwe"))
    policy.source_cwe = doc.at("source_cwe").get<std::string>();
  if (doc.contains("placement")) {
    const Json& placement = doc.at("placement");
    std::string level = placement.at("level").get<std::string>();
    if (level == "bus") {
      policy.placement = Placement{PlacementLevel::bus, {}};
    } else if (level == "ip") {
      policy.placement =
          Placement{PlacementLevel::ip, placement.at("ip").get<std::string>()};
    } else {
      throw SchemaError("policy placement level must be \"bus\" or \"ip\"");
    }
  }
  return policy;
}

Json parse_json_or_throw(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid ") + what + ": " + e.what());
  }
}

}  // namespace

std::string serialize_policy(const SecurityPolicy& policy) {
  return policy_to_json(policy).dump(2) + "\n";
}

SecurityPolicy parse_policy(const std::string& text) {
  try {
    return policy_from_json(parse_json_or_throw(text, "policy document"));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid policy document: ") + e.what());
  }
}

std::string serialize_policies(const std::vector<SecurityPolicy>& policies) {
  Json arr = Json::array();
  for (const SecurityPolicy& policy : policies)
    arr.push_back(policy_to_json(policy));
  return arr.dump(2) + "\n";
}

std::vector<SecurityPolicy> parse_policies(const std::string& text) {
  Json doc = parse_json_or_throw(text, "policy list");
  if (!doc.is_array()) throw SchemaError("policy list must be a JSON array");
  std::vector<SecurityPolicy> out;
  try {
    for (const Json& item : doc) out.push_back(policy_from_json(item));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid policy list: ") + e.what());
  }
  return out;
}

}  // namespace socsec
