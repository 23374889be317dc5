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

#include "socsec/codegen.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <regex>
#include <set>

#include "socsec/errors.hpp"
#include "socsec/text_util.hpp"

namespace socsec {
namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += is_ident_char(c) ? c : '_';
  return out;
}

std::string flat_name(const QualifiedSignalRef& ref) {
  return ref.role + "_" + sanitize(ref.ip_name) + "_" + ref.signal;
}

// Strips redundant outermost parentheses: "((a && b))" -> "a && b".
std::string strip_outer_parens(std::string s) {
  s = trim(s);
  while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    int depth = 0;
    bool outer = true;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      else if (s[i] == ')' && --depth == 0) { outer = false; break; }
    }
    if (!outer) break;
    s = trim(s.substr(1, s.size() - 2));
  }
  return s;
}

// Width of a sized literal ("32'h0" -> 32); 0 when unsized.
unsigned literal_width(const std::string& value) {
  static const std::regex sized(R"(^\s*(\d+)\s*')");
  std::smatch m;
  if (std::regex_search(value, m, sized)) return std::stoul(m[1]);
  return 0;
}

// Records widths implied by comparisons against sized literals.
void infer_widths(const std::string& expr, std::map<std::string, unsigned>& w) {
  static const std::regex lhs(
      R"(([A-Za-z_][A-Za-z0-9_$]*)\s*(===|!==|==|!=|<=|>=|<|>)\s*(\d+)')");
  static const std::regex rhs(
      R"((\d+)'[A-Za-z][0-9a-fA-FxXzZ_]*\s*(===|!==|==|!=|<=|>=|<|>)\s*([A-Za-z_][A-Za-z0-9_$]*))");
  for (auto it = std::sregex_iterator(expr.begin(), expr.end(), lhs);
       it != std::sregex_iterator(); ++it) {
    unsigned bits = std::stoul((*it)[3]);
    unsigned& slot = w[(*it)[1]];
    slot = std::max(slot, bits);
  }
  for (auto it = std::sregex_iterator(expr.begin(), expr.end(), rhs);
       it != std::sregex_iterator(); ++it) {
    unsigned bits = std::stoul((*it)[1]);
    unsigned& slot = w[(*it)[3]];
    slot = std::max(slot, bits);
  }
}

void collect_idents(const std::string& expr, std::set<std::string>& out) {
  for (std::size_t i = 0; i < expr.size(); ++i) {
    char c = expr[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < expr.size() &&
             (std::isdigit(static_cast<unsigned char>(expr[j])) || expr[j] == '_'))
        ++j;
      if (j < expr.size() && expr[j] == '\'') {
        ++j;
        if (j < expr.size()) ++j;  // base letter
        while (j < expr.size() && (std::isalnum(static_cast<unsigned char>(expr[j])) ||
                                   expr[j] == '_'))
          ++j;
      }
      i = j - 1;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      std::size_t j = i;
      while (j < expr.size() && is_ident_char(expr[j])) ++j;
      if (c != '$') out.insert(expr.substr(i, j - i));  // $… is never a net
      i = j - 1;
    }
  }
}

struct SampleReg {
  std::string name;
  std::string arg;  // sampled expression
};

// Lowered form of one policy, ready for fragment or module rendering.
struct PolicyLogic {
  std::string prefix;
  std::string label;  // source CWE or positional tag
  bool sequential = false;
  std::optional<std::pair<ClockEdge, std::string>> clock;
  std::optional<std::pair<ClockEdge, std::string>> reset;
  std::vector<SampleReg> samples;        // previous-cycle samplers
  std::vector<std::string> tracker_decls;
  std::vector<std::string> tracker_updates;
  std::vector<std::string> tracker_resets;
  std::string pred;  // boolean policies: guard expression
  std::string fire;  // sequential policies: trigger expression
  std::vector<std::pair<std::string, std::string>> assigns;
  std::set<std::string> reads;   // signals the logic observes
  std::set<std::string> locals;  // names declared by this policy's logic
  std::map<std::string, unsigned> widths;
  std::vector<std::string> warnings;
};

// Replaces $rose/$fell/$stable/$past calls with synthesizable
// previous-cycle comparisons backed by sample registers.
std::string rewrite_sampled_functions(const std::string& expr,
                                      PolicyLogic& logic) {
  std::string out = expr;
  for (;;) {
    std::size_t best = std::string::npos;
    std::string fn;
    for (const char* name : {"$rose", "$fell", "$stable", "$past"}) {
      std::size_t hit = out.find(name);
      if (hit != std::string::npos && hit < best) {
        best = hit;
        fn = name;
      }
    }
    if (best == std::string::npos) break;
    std::size_t open = out.find('(', best + fn.size());
    if (open == std::string::npos)
      throw Error("malformed " + fn + " in policy expression: " + expr);
    int depth = 0;
    std::size_t close = open;
    for (; close < out.size(); ++close) {
      if (out[close] == '(') ++depth;
      else if (out[close] == ')' && --depth == 0) break;
    }
    if (depth != 0)
      throw Error("malformed " + fn + " in policy expression: " + expr);
    std::string arg = strip_outer_parens(out.substr(open + 1, close - open - 1));
    if (!logic.clock)
      throw Error("policy uses " + fn + " but declares no clock");
    std::string reg = logic.prefix + "_smp" + std::to_string(logic.samples.size());
    logic.samples.push_back({reg, arg});
    logic.locals.insert(reg);
    std::string replacement;
    if (fn == "$rose") replacement = "((" + arg + ") && !" + reg + ")";
    else if (fn == "$fell") replacement = "(!(" + arg + ") && " + reg + ")";
    else if (fn == "$stable") replacement = "((" + arg + ") == " + reg + ")";
    else replacement = reg;  // $past
    out.replace(best, close + 1 - best, replacement);
  }
  return out;
}

std::string cwe_label(const SecurityPolicy& policy, std::size_t idx) {
  if (policy.source_cwe && !policy.source_cwe->empty())
    return *policy.source_cwe;
  return "policy-" + std::to_string(idx + 1);
}

// Sort key for deterministic composition order: numeric CWE id when
// parseable, then the raw label.
std::pair<unsigned long, std::string> cwe_sort_key(const SecurityPolicy& p) {
  std::string id = p.source_cwe.value_or("");
  std::size_t dash = id.find_last_of('-');
  std::string digits = dash == std::string::npos ? id : id.substr(dash + 1);
  if (!digits.empty() &&
      std::all_of(digits.begin(), digits.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return {std::stoul(digits), id};
  return {~0ul, id};
}

PolicyLogic lower_policy(const SecurityPolicy& policy, const SocSpec* spec,
                         const std::string& prefix, const std::string& label,
                         std::vector<SignalMapEntry>* map) {
  PolicyLogic logic;
  logic.prefix = prefix;
  logic.label = label;
  logic.clock = policy.timing.clock;
  logic.reset = policy.timing.reset;

  std::vector<SignalMapEntry> local_map;
  auto flatten = [&](const std::string& text) {
    if (spec != nullptr)
      for (const QualifiedSignalRef& ref : find_qualified_refs(text))
        if (spec->find_ip_loose(ref.ip_name) == nullptr)
          throw UnresolvableSignalError("'" + text.substr(ref.begin, ref.end - ref.begin) +
                                        "' matches no IP in the specification");
    return flatten_references(text, local_map);
  };

  std::vector<std::string> exprs;
  std::vector<std::uint32_t> delays;
  for (const PredicateAtom& atom : policy.predicate) {
    if (atom.kind == AtomKind::expression) {
      std::string e = strip_outer_parens(flatten(atom.expr));
      e = rewrite_sampled_functions(e, logic);
      exprs.push_back(std::move(e));
    } else {
      delays.push_back(atom.cycles);
    }
  }
  if (exprs.empty()) throw Error("policy predicate has no expressions");
  if (!delays.empty() && exprs.size() != delays.size() + 1)
    throw Error("policy predicate must alternate expressions and delays");

  logic.sequential = !delays.empty();
  if (!logic.sequential) {
    logic.pred = exprs.front();
  } else {
    if (!logic.clock)
      throw Error("sequential policy (" + label + ") declares no clock");
    std::uint32_t total =
        std::accumulate(delays.begin(), delays.end(), std::uint32_t{0});
    std::string trk = prefix + "_trk";
    logic.locals.insert(trk);
    logic.tracker_decls.push_back("reg [" + std::to_string(total - 1) + ":0] " +
                                  trk + ";");
    logic.tracker_resets.push_back(trk + " <= " + std::to_string(total) +
                                   "'b0;");
    std::uint32_t flop = 0;
    for (std::size_t run = 0; run < delays.size(); ++run) {
      std::string feed = run == 0
                             ? "(" + exprs[run] + ")"
                             : trk + "[" + std::to_string(flop - 1) + "] && (" +
                                   exprs[run] + ")";
      logic.tracker_updates.push_back(trk + "[" + std::to_string(flop) +
                                      "] <= " + feed + ";");
      ++flop;
      for (std::uint32_t i = 1; i < delays[run]; ++i, ++flop)
        logic.tracker_updates.push_back(trk + "[" + std::to_string(flop) +
                                        "] <= " + trk + "[" +
                                        std::to_string(flop - 1) + "];");
    }
    logic.fire = trk + "[" + std::to_string(total - 1) + "] && (" +
                 exprs.back() + ")";
  }

  std::map<std::string, unsigned> pred_widths;
  for (const std::string& e : exprs) {
    infer_widths(e, pred_widths);
    collect_idents(e, logic.reads);
  }
  for (const SampleReg& sample : logic.samples)
    collect_idents(sample.arg, logic.reads);

  for (const SignalAssignment& assignment : policy.action) {
    std::string target = flatten(assignment.target);
    std::string value = flatten(assignment.value);
    collect_idents(value, logic.reads);
    unsigned lit = literal_width(value);
    auto inferred = pred_widths.find(target);
    if (lit > 0 && inferred != pred_widths.end() && inferred->second != lit)
      logic.warnings.push_back("width mismatch on " + target + ": assigned " +
                               std::to_string(lit) +
                               "-bit literal but compared as " +
                               std::to_string(inferred->second) + "-bit");
    unsigned& slot = pred_widths[target];
    slot = std::max(slot, lit);
    logic.assigns.emplace_back(std::move(target), std::move(value));
  }
  if (logic.assigns.empty()) throw Error("policy (" + label + ") has no action");

  logic.widths = std::move(pred_widths);
  for (const std::string& local : logic.locals) logic.reads.erase(local);
  for (auto& [target, value] : logic.assigns) logic.widths[target] = std::max(
      logic.widths[target], 1u);

  if (map != nullptr)
    map->insert(map->end(), local_map.begin(), local_map.end());
  return logic;
}

std::string edge_word(ClockEdge e) {
  return e == ClockEdge::posedge ? "posedge" : "negedge";
}

std::string reset_active(const std::pair<ClockEdge, std::string>& reset) {
  return reset.first == ClockEdge::negedge ? "!" + reset.second : reset.second;
}

std::string sensitivity(const PolicyLogic& logic) {
  std::string s = "@(" + edge_word(logic.clock->first) + " " +
                  logic.clock->second;
  if (logic.reset)
    s += " or " + edge_word(logic.reset->first) + " " + logic.reset->second;
  return s + ")";
}

// Clocked state block: samplers, trackers, and any extra update lines,
// with a reset branch when the policy declares a reset.
std::string state_block(const PolicyLogic& logic,
                        const std::vector<std::string>& extra_updates,
                        const std::vector<std::string>& extra_resets,
                        const std::string& indent) {
  std::vector<std::string> updates;
  std::vector<std::string> resets;
  for (const SampleReg& sample : logic.samples) {
    updates.push_back(sample.name + " <= (" + sample.arg + ");");
    resets.push_back(sample.name + " <= 1'b0;");
  }
  updates.insert(updates.end(), logic.tracker_updates.begin(),
                 logic.tracker_updates.end());
  resets.insert(resets.end(), logic.tracker_resets.begin(),
                logic.tracker_resets.end());
  updates.insert(updates.end(), extra_updates.begin(), extra_updates.end());
  resets.insert(resets.end(), extra_resets.begin(), extra_resets.end());

  std::string out = indent + "always " + sensitivity(logic) + " begin\n";
  if (logic.reset) {
    out += indent + "  if (" + reset_active(*logic.reset) + ") begin\n";
    for (const std::string& line : resets) out += indent + "    " + line + "\n";
    out += indent + "  end else begin\n";
    for (const std::string& line : updates) out += indent + "    " + line + "\n";
    out += indent + "  end\n";
  } else {
    for (const std::string& line : updates) out += indent + "  " + line + "\n";
  }
  out += indent + "end\n";
  return out;
}

std::string range_of(unsigned width) {
  return width > 1 ? "[" + std::to_string(width - 1) + ":0] " : "";
}

std::string decl_lines(const PolicyLogic& logic, const std::string& indent) {
  std::string out;
  for (const SampleReg& sample : logic.samples) {
    unsigned width = 1;
    auto it = logic.widths.find(sample.arg);
    if (it != logic.widths.end()) width = it->second;
    out += indent + "reg " + range_of(width) + sample.name + ";\n";
  }
  for (const std::string& decl : logic.tracker_decls)
    out += indent + decl + "\n";
  return out;
}

}  // namespace

std::string flatten_references(const std::string& text,
                               std::vector<SignalMapEntry>& map) {
  std::vector<QualifiedSignalRef> refs = find_qualified_refs(text);
  std::string out = text;
  for (auto it = refs.rbegin(); it != refs.rend(); ++it) {
    std::string flat = flat_name(*it);
    map.push_back({flat, text.substr(it->begin, it->end - it->begin)});
    out.replace(it->begin, it->end - it->begin, flat);
  }
  return out;
}

std::vector<SignalMapEntry> collect_signal_map(
    const std::vector<SecurityPolicy>& policies) {
  std::vector<SignalMapEntry> map;
  for (const SecurityPolicy& policy : policies) {
    for (const PredicateAtom& atom : policy.predicate)
      if (atom.kind == AtomKind::expression) flatten_references(atom.expr, map);
    for (const SignalAssignment& assignment : policy.action) {
      flatten_references(assignment.target, map);
      flatten_references(assignment.value, map);
    }
  }
  std::sort(map.begin(), map.end(), [](const auto& a, const auto& b) {
    return std::tie(a.flattened, a.original) < std::tie(b.flattened, b.original);
  });
  map.erase(std::unique(map.begin(), map.end(),
                        [](const auto& a, const auto& b) {
                          return a.flattened == b.flattened;
                        }),
            map.end());
  return map;
}

std::string policy_to_logic(const SecurityPolicy& policy, const SocSpec& spec) {
  PolicyLogic logic = lower_policy(policy, &spec, "p0",
                                   cwe_label(policy, 0), nullptr);
  std::string out = "// enforcement logic (" + logic.label + ")\n";
  for (const std::string& warning : logic.warnings)
    out += "// warning: " + warning + "\n";
  out += decl_lines(logic, "");

  if (!logic.sequential && logic.clock) {
    // Clocked boolean policy: registered pass-through with the guarded
    // override applied on the clock edge.
    std::vector<std::string> updates;
    std::vector<std::string> resets;
    for (const auto& [target, value] : logic.assigns) {
      updates.push_back(target + " <= " + target + "_in;");
      resets.push_back(target + " <= " + target + "_in;");
    }
    updates.push_back("if (" + logic.pred + ") begin");
    for (const auto& [target, value] : logic.assigns)
      updates.push_back("  " + target + " <= " + value + ";");
    updates.push_back("end");
    out += state_block(logic, updates, resets, "");
    return out;
  }

  if (logic.sequential)
    out += state_block(logic, {}, {}, "");

  std::string guard = logic.sequential ? logic.fire : logic.pred;
  out += "always @* begin\n";
  for (const auto& [target, value] : logic.assigns)
    out += "  " + target + " = " + target + "_in;\n";
  out += "  if (" + guard + ") begin\n";
  for (const auto& [target, value] : logic.assigns)
    out += "    " + target + " = " + value + ";\n";
  out += "  end\n";
  out += "end\n";
  return out;
}

namespace {

// Shared composition: declarations and state blocks per policy, one fire
// condition each, then a single always block applying every action in
// order over the pass-through defaults (last write wins).
struct ComposedLogic {
  std::string decls;        // indented declaration lines
  std::string blocks;       // clocked state blocks
  std::string mux;          // final enforcement block
  std::vector<std::string> warnings;
};

ComposedLogic compose(std::vector<PolicyLogic>& logics,
                      const std::map<std::string, std::string>& lhs_for_target,
                      const std::map<std::string, std::string>& default_for_target) {
  ComposedLogic out;
  for (PolicyLogic& logic : logics) {
    for (const std::string& warning : logic.warnings)
      out.warnings.push_back(logic.label + ": " + warning);
    bool clocked_boolean = !logic.sequential && logic.clock.has_value();
    if (clocked_boolean) {
      logic.fire = logic.prefix + "_fire";
      out.decls += "  reg " + logic.fire + ";\n";
    } else if (!logic.sequential) {
      logic.fire = logic.pred;  // combinational guard used inline
    }
    out.decls += decl_lines(logic, "  ");
    if (logic.clock) {
      std::vector<std::string> updates;
      std::vector<std::string> resets;
      if (clocked_boolean) {
        updates.push_back(logic.fire + " <= 1'b0;");
        updates.push_back("if (" + logic.pred + ") begin");
        updates.push_back("  " + logic.fire + " <= 1'b1;");
        updates.push_back("end");
        resets.push_back(logic.fire + " <= 1'b0;");
      }
      out.blocks += "  // " + logic.label + " trigger\n";
      out.blocks += state_block(logic, updates, resets, "  ");
    }
  }

  out.mux += "  // enforcement: pass-through unless a policy fires\n";
  out.mux += "  always @* begin\n";
  for (const auto& [target, lhs] : lhs_for_target)
    out.mux += "    " + lhs + " = " + default_for_target.at(target) + ";\n";
  for (const PolicyLogic& logic : logics) {
    out.mux += "    // " + logic.label + "\n";
    out.mux += "    if (" + logic.fire + ") begin\n";
    for (const auto& [target, value] : logic.assigns)
      out.mux += "      " + lhs_for_target.at(target) + " = " + value + ";\n";
    out.mux += "    end\n";
  }
  out.mux += "  end\n";
  return out;
}

std::string render_port(const RtlPort& port, bool reg_output) {
  std::string dir = port.direction == PortDirection::input    ? "input"
                    : port.direction == PortDirection::output ? "output"
                                                              : "inout";
  std::string out = dir;
  if (port.direction == PortDirection::output && reg_output) out += " reg";
  out += " " + range_of(port.width) + port.name;
  return out;
}

std::string render_module(const std::string& header_comment,
                          const std::string& name,
                          const std::vector<std::pair<RtlPort, bool>>& ports,
                          const std::string& body) {
  std::string out = header_comment;
  out += "module " + name + " (\n";
  for (std::size_t i = 0; i < ports.size(); ++i)
    out += "  " + render_port(ports[i].first, ports[i].second) +
           (i + 1 < ports.size() ? ",\n" : "\n");
  out += ");\n";
  out += body;
  out += "endmodule\n";
  return out;
}

std::vector<std::size_t> composition_order(
    const std::vector<SecurityPolicy>& policies) {
  std::vector<std::size_t> order(policies.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return cwe_sort_key(policies[a]) < cwe_sort_key(policies[b]);
                   });
  return order;
}

}  // namespace

RtlArtifact build_central_module(const std::vector<SecurityPolicy>& policies,
                                 const SocSpec& spec) {
  for (const SecurityPolicy& policy : policies)
    if (!policy.placement || policy.placement->level != PlacementLevel::bus)
      throw Error("central module accepts only bus-level policies");

  RtlArtifact artifact;
  artifact.kind = ArtifactKind::central_module;
  artifact.module_name = "security_module";

  std::vector<std::size_t> order = composition_order(policies);
  std::vector<PolicyLogic> logics;
  std::vector<SignalMapEntry> map_sink;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const SecurityPolicy& policy = policies[order[k]];
    std::string label = cwe_label(policy, order[k]);
    logics.push_back(lower_policy(policy, &spec, "p" + std::to_string(k),
                                  label, &map_sink));
    artifact.policies_included.push_back(label);
  }

  // Ports: fixed clock/reset, per-policy clock signals, observed inputs,
  // then an input/output pair per overridden signal.
  std::set<std::string> port_names;
  std::vector<std::pair<RtlPort, bool>> ports;
  auto add_port = [&](PortDirection dir, unsigned width, const std::string& name,
                      bool reg_output = false) {
    if (!port_names.insert(name).second) return;
    ports.push_back({{dir, width, name}, reg_output});
  };
  add_port(PortDirection::input, 1, "clk");
  add_port(PortDirection::input, 1, "rst");
  for (const PolicyLogic& logic : logics) {
    if (logic.clock) add_port(PortDirection::input, 1, logic.clock->second);
    if (logic.reset) add_port(PortDirection::input, 1, logic.reset->second);
  }

  std::vector<std::string> overrides;  // first-seen order
  std::set<std::string> override_set;
  std::map<std::string, unsigned> widths;
  for (const PolicyLogic& logic : logics) {
    for (const auto& [name, width] : logic.widths) {
      unsigned& slot = widths[name];
      slot = std::max(slot, width);
    }
    for (const auto& [target, value] : logic.assigns)
      if (override_set.insert(target).second) overrides.push_back(target);
  }
  for (const PolicyLogic& logic : logics)
    for (const std::string& target : override_set)
      if ((logic.clock && logic.clock->second == target) ||
          (logic.reset && logic.reset->second == target))
        throw Error("port-direction conflict: " + target +
                    " is both a clock/reset input and an overridden output");

  std::set<std::string> observed;
  for (const PolicyLogic& logic : logics)
    for (const std::string& read : logic.reads)
      if (!override_set.count(read) && !port_names.count(read))
        observed.insert(read);
  for (const std::string& name : observed)
    add_port(PortDirection::input, std::max(widths[name], 1u), name);
  for (const std::string& target : overrides) {
    unsigned width = std::max(widths[target], 1u);
    add_port(PortDirection::input, width, target + "_in");
    add_port(PortDirection::output, width, target, true);
  }

  std::string header =
      "// Centralized bus-level security policy enforcement module.\n";
  if (!logics.empty()) {
    header += "// Policies applied in ascending CWE order; when several"
              " override the\n// same signal the last write wins: ";
    for (std::size_t i = 0; i < artifact.policies_included.size(); ++i)
      header += (i ? ", " : "") + artifact.policies_included[i];
    header += ".\n";
  }

  std::string body;
  if (logics.empty()) {
    body = "  // no bus-level policies\n";
  } else {
    std::map<std::string, std::string> lhs, defaults;
    for (const std::string& target : overrides) {
      lhs[target] = target;
      defaults[target] = target + "_in";
    }
    ComposedLogic composed = compose(logics, lhs, defaults);
    for (const std::string& warning : composed.warnings)
      header += "// warning: " + warning + "\n";
    body = composed.decls;
    body += composed.blocks;
    body += composed.mux;
  }

  artifact.port_list.reserve(ports.size());
  for (const auto& [port, reg_output] : ports) artifact.port_list.push_back(port);
  artifact.body = render_module(header, artifact.module_name, ports, body);
  return artifact;
}

RtlArtifact build_ip_wrapper(const IpBlock& ip,
                             const std::vector<SecurityPolicy>& policies,
                             const std::vector<RtlPort>& inner_ports) {
  for (const SecurityPolicy& policy : policies) {
    if (!policy.placement || policy.placement->level != PlacementLevel::ip ||
        policy.placement->ip_name != ip.name)
      throw Error("wrapper for " + ip.name +
                  " accepts only this IP's ip-level policies");
  }

  std::string inner = sanitize(ip.ident());
  RtlArtifact artifact;
  artifact.kind = ArtifactKind::ip_wrapper;
  artifact.ip_name = ip.name;
  artifact.module_name = inner + "_wrapper";

  std::map<std::string, RtlPort> port_by_name;
  for (const RtlPort& port : inner_ports) port_by_name[port.name] = port;

  // Within the wrapper, qualified references must name this IP; they
  // collapse to the bare inner port name.
  auto localize = [&](const std::string& text) {
    std::string out = text;
    std::vector<QualifiedSignalRef> refs = find_qualified_refs(text);
    for (auto it = refs.rbegin(); it != refs.rend(); ++it) {
      bool ours = equals_ci(it->ip_name, ip.name) ||
                  equals_ci(it->ip_name, ip.ident()) ||
                  (ip.abbreviation && equals_ci(it->ip_name, *ip.abbreviation));
      if (!ours)
        throw UnresolvableSignalError(
            "'" + text.substr(it->begin, it->end - it->begin) +
            "' does not name " + ip.name + " inside its wrapper");
      out.replace(it->begin, it->end - it->begin, it->signal);
    }
    return out;
  };

  std::vector<std::size_t> order = composition_order(policies);
  std::vector<PolicyLogic> logics;
  for (std::size_t k = 0; k < order.size(); ++k) {
    SecurityPolicy local = policies[order[k]];
    for (PredicateAtom& atom : local.predicate)
      if (atom.kind == AtomKind::expression) atom.expr = localize(atom.expr);
    for (SignalAssignment& assignment : local.action) {
      assignment.target = localize(assignment.target);
      assignment.value = localize(assignment.value);
    }
    std::string label = cwe_label(local, order[k]);
    logics.push_back(lower_policy(local, nullptr, "p" + std::to_string(k),
                                  label, nullptr));
    artifact.policies_included.push_back(label);
  }

  // Every referenced signal must be an inner port; clock-like extras
  // become wrapper-only inputs.
  std::set<std::string> extra_inputs;
  auto is_clock_like = [](const std::string& name) {
    std::string low = to_lower(name);
    for (const char* prefix : {"clk", "rst", "clock", "reset"})
      if (low.rfind(prefix, 0) == 0) return true;
    return false;
  };
  for (const PolicyLogic& logic : logics) {
    for (const std::string& read : logic.reads) {
      if (port_by_name.count(read)) continue;
      if (is_clock_like(read)) {
        extra_inputs.insert(read);
        continue;
      }
      throw UnresolvableSignalError("policy (" + logic.label + ") references '" +
                                    read + "' which is not a port of " + inner);
    }
    if (logic.clock && !port_by_name.count(logic.clock->second))
      extra_inputs.insert(logic.clock->second);
    if (logic.reset && !port_by_name.count(logic.reset->second))
      extra_inputs.insert(logic.reset->second);
    for (const auto& [target, value] : logic.assigns) {
      auto it = port_by_name.find(target);
      if (it == port_by_name.end())
        throw UnresolvableSignalError("policy (" + logic.label +
                                      ") overrides '" + target +
                                      "' which is not a port of " + inner);
      if (it->second.direction == PortDirection::inout)
        throw Error("cannot interpose on inout port " + target);
    }
  }

  std::vector<std::string> overrides;
  std::set<std::string> override_set;
  for (const PolicyLogic& logic : logics)
    for (const auto& [target, value] : logic.assigns)
      if (override_set.insert(target).second) overrides.push_back(target);

  std::string header = "// Security policy enforcement wrapper for " +
                       ip.name + ".\n";
  if (!logics.empty()) {
    header += "// Policies applied in ascending CWE order; when several"
              " override the\n// same signal the last write wins: ";
    for (std::size_t i = 0; i < artifact.policies_included.size(); ++i)
      header += (i ? ", " : "") + artifact.policies_included[i];
    header += ".\n";
  }

  // Wrapper ports mirror the inner ports; overridden outputs become regs.
  std::vector<std::pair<RtlPort, bool>> ports;
  for (const RtlPort& port : inner_ports) {
    bool reg_output = port.direction == PortDirection::output &&
                      override_set.count(port.name) > 0;
    ports.push_back({port, reg_output});
  }
  for (const std::string& name : extra_inputs)
    ports.push_back({{PortDirection::input, 1, name}, false});

  std::string body;
  std::map<std::string, std::string> lhs, defaults;
  for (const std::string& target : overrides) {
    const RtlPort& port = port_by_name.at(target);
    if (port.direction == PortDirection::input) {
      body += "  reg " + range_of(port.width) + target + "_gated;\n";
      lhs[target] = target + "_gated";
      defaults[target] = target;
    } else {
      body += "  wire " + range_of(port.width) + target + "_raw;\n";
      lhs[target] = target;
      defaults[target] = target + "_raw";
    }
  }

  if (!logics.empty()) {
    ComposedLogic composed = compose(logics, lhs, defaults);
    for (const std::string& warning : composed.warnings)
      header += "// warning: " + warning + "\n";
    body += composed.decls;
    body += composed.blocks;
    body += composed.mux;
  }

  body += "  " + inner + " u_" + inner + " (\n";
  for (std::size_t i = 0; i < inner_ports.size(); ++i) {
    const RtlPort& port = inner_ports[i];
    std::string net = port.name;
    if (override_set.count(port.name))
      net = port.direction == PortDirection::input ? port.name + "_gated"
                                                   : port.name + "_raw";
    body += "    ." + port.name + "(" + net + ")" +
            (i + 1 < inner_ports.size() ? ",\n" : "\n");
  }
  body += "  );\n";

  artifact.port_list.reserve(ports.size());
  for (const auto& [port, reg_output] : ports) artifact.port_list.push_back(port);
  artifact.body = render_module(header, artifact.module_name, ports, body);
  return artifact;
}

std::vector<RtlPort> derive_inner_ports(
    const IpBlock& ip, const std::vector<SecurityPolicy>& policies) {
  auto localize = [&](const std::string& text) {
    std::string out = text;
    std::vector<QualifiedSignalRef> refs = find_qualified_refs(text);
    for (auto it = refs.rbegin(); it != refs.rend(); ++it) {
      bool ours = equals_ci(it->ip_name, ip.name) ||
                  equals_ci(it->ip_name, ip.ident()) ||
                  (ip.abbreviation && equals_ci(it->ip_name, *ip.abbreviation));
      if (!ours)
        throw UnresolvableSignalError(
            "'" + text.substr(it->begin, it->end - it->begin) +
            "' does not name " + ip.name + " inside its wrapper");
      out.replace(it->begin, it->end - it->begin, it->signal);
    }
    return out;
  };
  auto is_clock_like = [](const std::string& name) {
    std::string low = to_lower(name);
    for (const char* prefix : {"clk", "rst", "clock", "reset"})
      if (low.rfind(prefix, 0) == 0) return true;
    return false;
  };

  std::vector<std::string> order;        // first-seen port order
  std::map<std::string, RtlPort> ports;  // name -> direction/width
  auto note = [&](const std::string& name, PortDirection dir, unsigned width) {
    auto [it, inserted] = ports.insert({name, {dir, width, name}});
    if (inserted) {
      order.push_back(name);
      return;
    }
    it->second.width = std::max(it->second.width, width);
    // A signal both read and overridden is a port we must interpose on.
    if (dir == PortDirection::output) it->second.direction = dir;
  };

  for (std::size_t k = 0; k < policies.size(); ++k) {
    SecurityPolicy local = policies[k];
    for (PredicateAtom& atom : local.predicate)
      if (atom.kind == AtomKind::expression) atom.expr = localize(atom.expr);
    for (SignalAssignment& assignment : local.action) {
      assignment.target = localize(assignment.target);
      assignment.value = localize(assignment.value);
    }
    PolicyLogic logic = lower_policy(local, nullptr, "p" + std::to_string(k),
                                     cwe_label(local, k), nullptr);
    for (const std::string& read : logic.reads) {
      if (is_clock_like(read)) continue;  // wrapper-only inputs
      auto it = logic.widths.find(read);
      note(read, PortDirection::input,
           it != logic.widths.end() ? it->second : 1);
    }
    for (const auto& [target, value] : logic.assigns) {
      unsigned width = 1;
      auto it = logic.widths.find(target);
      if (it != logic.widths.end()) width = it->second;
      if (unsigned lit = literal_width(value); lit > width) width = lit;
      note(target, PortDirection::output, width);
    }
  }

  std::vector<RtlPort> out;
  out.reserve(order.size());
  for (const std::string& name : order) out.push_back(ports.at(name));
  return out;
}

}  // namespace socsec
