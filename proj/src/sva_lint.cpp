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
// Lint rules for the assertion subset.  R1, R2 and R4 are textual scans
// that work on unparseable input; R3, R5, R6 and R7 inspect the parsed
// unit.  Spans index the original text (the comment stripper is
// length-preserving), so fixes splice directly into it.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "socsec/errors.hpp"
#include "socsec/similarity.hpp"
#include "socsec/sva.hpp"
#include "socsec/text_util.hpp"

namespace socsec {
namespace {

// Same blanking as the parser uses; offsets stay aligned with the input.
std::string blank_comments(const std::string& text) {
  std::string out = text;
  bool in_string = false;
  for (std::size_t i = 0; i < out.size(); ++i) {
    char c = out[i];
    if (in_string) {
      if (c == '\\' && i + 1 < out.size()) ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = true;
      continue;
    }
    if (c == '/' && i + 1 < out.size() && out[i + 1] == '/') {
      while (i < out.size() && out[i] != '\n') out[i++] = ' ';
      --i;
    } else if (c == '/' && i + 1 < out.size() && out[i + 1] == '*') {
      std::size_t end = out.find("*/", i + 2);
      end = end == std::string::npos ? out.size() : end + 2;
      for (std::size_t k = i; k < end; ++k)
        if (out[k] != '\n') out[k] = ' ';
      i = end - 1;
    }
  }
  return out;
}

bool token_at(const std::string& s, std::size_t pos, std::string_view tok) {
  if (pos + tok.size() > s.size()) return false;
  if (s.compare(pos, tok.size(), tok) != 0) return false;
  if (pos > 0 && is_ident_char(s[pos - 1])) return false;
  std::size_t after = pos + tok.size();
  return after >= s.size() || !is_ident_char(s[after]);
}

std::size_t skip_ws_back(const std::string& s, std::size_t pos) {
  while (pos > 0 && std::isspace(static_cast<unsigned char>(s[pos - 1])))
    --pos;
  return pos;
}

std::size_t skip_ws_fwd(const std::string& s, std::size_t pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
    ++pos;
  return pos;
}

// Identifier tokens of an expression, with a crude textual polarity: an
// identifier is "negated" when an odd number of '!' immediately precedes it
// (whitespace and opening parens skipped).  $-prefixed system functions are
// not identifiers here.
std::vector<std::pair<std::string, bool>> ident_polarities(
    const std::string& expr) {
  std::vector<std::pair<std::string, bool>> out;
  for (std::size_t i = 0; i < expr.size(); ++i) {
    char c = expr[i];
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) continue;
    if (i > 0 && is_ident_char(expr[i - 1])) continue;
    std::size_t end = i;
    while (end < expr.size() && is_ident_char(expr[end])) ++end;
    std::string ident = expr.substr(i, end - i);
    int bangs = 0;
    std::size_t back = i;
    while (back > 0) {
      char prev = expr[back - 1];
      if (std::isspace(static_cast<unsigned char>(prev)) || prev == '(') {
        --back;
      } else if (prev == '!') {
        ++bangs;
        --back;
      } else {
        break;
      }
    }
    out.emplace_back(std::move(ident), bangs % 2 == 1);
    i = end - 1;
  }
  return out;
}

std::vector<std::string> idents_only(const std::string& expr) {
  std::vector<std::string> out;
  for (auto& [ident, neg] : ident_polarities(expr)) out.push_back(ident);
  return out;
}

const std::set<std::string>& sv_keywords() {
  static const std::set<std::string> kw = {
      "module", "endmodule", "input", "output", "inout", "wire", "reg",
      "logic", "property", "endproperty", "assert", "else", "disable",
      "iff", "posedge", "negedge", "or", "and", "not", "localparam",
      "parameter", "default", "clocking", "endclocking", "if", "begin",
      "end", "assign"};
  return kw;
}

void rule_r1(const std::string& s, const KeywordFixes& fixes,
             std::vector<LintFinding>& out) {
  for (const auto& [wrong, correct] : fixes.pairs()) {
    for (std::size_t pos = s.find(wrong); pos != std::string::npos;
         pos = s.find(wrong, pos + 1)) {
      bool lead_ok = pos == 0 || !is_ident_char(s[pos - 1]);
      std::size_t after = pos + wrong.size();
      bool tail_ok = after >= s.size() || !is_ident_char(s[after]);
      if (!lead_ok || !tail_ok) continue;
      out.push_back({"R1",
                     {pos, after},
                     "'" + wrong + "' is not a SystemVerilog keyword; did "
                     "you mean '" + correct + "'?",
                     correct});
    }
  }
}

void rule_r2(const std::string& s, std::vector<LintFinding>& out) {
  // The trailing-ident-char check below keeps "disable if" from matching a
  // correct "disable iff" and "disable_if" from matching "disable_iff".
  for (const char* text : {"disable_iff", "disable_if", "disable if"}) {
    std::string pat = text;
    for (std::size_t pos = s.find(pat); pos != std::string::npos;
         pos = s.find(pat, pos + 1)) {
      if (pos > 0 && is_ident_char(s[pos - 1])) continue;
      std::size_t after = pos + pat.size();
      if (after < s.size() && is_ident_char(s[after])) continue;
      std::size_t open = skip_ws_fwd(s, after);
      std::size_t end = after;
      std::string inner;
      if (open < s.size() && s[open] == '(') {
        int depth = 0;
        std::size_t k = open;
        for (; k < s.size(); ++k) {
          if (s[k] == '(') ++depth;
          else if (s[k] == ')' && --depth == 0) break;
        }
        if (k < s.size()) {
          inner = collapse_ws(s.substr(open + 1, k - open - 1));
          end = k + 1;
        }
      }
      std::string fix = inner.empty() ? std::string("disable iff")
                                      : "disable iff (" + inner + ")";
      out.push_back({"R2",
                     {pos, end},
                     "malformed disable clause '" + pat +
                         "'; the correct form is 'disable iff (...)'",
                     fix});
    }
  }
}

void rule_r4(const std::string& s, std::vector<LintFinding>& out) {
  for (const char* edge : {"posedge", "negedge"}) {
    for (std::size_t pos = s.find(edge); pos != std::string::npos;
         pos = s.find(edge, pos + 1)) {
      if (!token_at(s, pos, edge)) continue;
      std::size_t before = skip_ws_back(s, pos);
      if (before == 0 || s[before - 1] != '(') continue;
      std::size_t outer = before - 1;
      std::size_t at = skip_ws_back(s, outer);
      if (at > 0 && s[at - 1] == '@') continue;  // properly clocked
      std::size_t args = skip_ws_fwd(s, pos + std::string_view(edge).size());
      if (args >= s.size() || s[args] != '(') continue;
      out.push_back({"R4",
                     {outer, outer},
                     std::string("edge expression '(") + edge +
                         "(…))' is missing the leading '@'",
                     "@"});
    }
  }
}

struct ParsedView {
  bool ok = false;
  AssertionUnit unit;
  std::string error;
};

ParsedView try_parse(const std::string& text) {
  ParsedView view;
  try {
    view.unit = parse_assertion(text);
    view.ok = true;
  } catch (const SyntaxError& e) {
    view.error = e.what();
  }
  return view;
}

void rule_r3(const std::string& s, const AssertionUnit& unit,
             std::vector<LintFinding>& out) {
  if (!unit.disable_expr || !unit.property_body.is_implication) return;
  std::map<std::string, std::set<bool>> disable_pol;
  for (auto& [ident, neg] : ident_polarities(*unit.disable_expr))
    disable_pol[ident].insert(neg);
  std::set<std::string> offenders;
  for (const SeqItem& item : unit.property_body.antecedent)
    for (auto& [ident, neg] : ident_polarities(item.expr)) {
      auto it = disable_pol.find(ident);
      if (it != disable_pol.end() && it->second.count(neg))
        offenders.insert(ident);
    }
  if (offenders.empty()) return;
  std::size_t pos = s.find("disable");
  Span span{pos == std::string::npos ? 0 : pos,
            pos == std::string::npos ? 0 : pos + 7};
  std::string names;
  for (const auto& ident : offenders)
    names += (names.empty() ? "" : ", ") + ident;
  out.push_back(
      {"R3", span,
       "disable iff shares " + names +
           " with the antecedent at the same polarity, so the assertion is "
           "disabled exactly when it would be checked",
       std::nullopt});
}

void rule_r5(const std::string& s, const AssertionUnit& unit,
             std::vector<LintFinding>& out) {
  if (!unit.property_body.is_implication) return;
  static const std::set<std::string> handshake = {"ready", "valid", "ack"};
  static const std::set<std::string> initiators = {
      "start", "req", "request", "strobe", "stb", "en", "enable"};
  std::string hit;
  bool has_initiator = false;
  for (const SeqItem& item : unit.property_body.antecedent)
    for (const std::string& ident : idents_only(item.expr)) {
      std::string low = to_lower(ident);
      if (handshake.count(low) && hit.empty()) hit = ident;
      if (initiators.count(low)) has_initiator = true;
    }
  if (hit.empty() || has_initiator) return;
  std::size_t pos = s.find(hit);
  out.push_back({"R5",
                 {pos == std::string::npos ? 0 : pos,
                  pos == std::string::npos ? 0 : pos + hit.size()},
                 "antecedent checks handshake signal '" + hit +
                     "' without any initiating event (start/req/enable); "
                     "the sequence may never be evaluated",
                 std::nullopt});
}

bool violation_wording(const std::string& message) {
  std::string low = to_lower(message);
  for (const char* cue : {"error", "violat", "breach", "fail", "illegal",
                          "unauthoriz"})
    if (low.find(cue) != std::string::npos) return true;
  return false;
}

void rule_r6(const std::string& s, const AssertionUnit& unit,
             std::vector<LintFinding>& out) {
  // Severity tasks inside the property expression itself.
  auto scan_expr = [&](const std::string& expr) {
    for (const char* task : {"$info", "$display", "$warning"}) {
      auto inexpr = expr.find(task);
      if (inexpr == std::string::npos) continue;
      std::size_t pos = s.find(task);
      if (pos == std::string::npos) continue;
      out.push_back({"R6",
                     {pos, pos + std::string_view(task).size()},
                     std::string("severity task '") + task +
                         "' used inside a property expression where a "
                         "checker action belongs; use $error",
                     "$error"});
      return;
    }
  };
  if (unit.property_body.is_implication) {
    for (const SeqItem& item : unit.property_body.consequent)
      scan_expr(item.expr);
  } else {
    scan_expr(unit.property_body.boolean_expr);
  }

  // Else-branch with a violation-wording message but a non-error task.
  if (unit.action &&
      (unit.action->severity == Severity::info ||
       unit.action->severity == Severity::display) &&
      violation_wording(unit.action->message)) {
    std::string task = "$" + to_string(unit.action->severity);
    std::size_t else_pos = s.rfind("else");
    std::size_t pos =
        else_pos == std::string::npos ? s.rfind(task) : s.find(task, else_pos);
    if (pos != std::string::npos)
      out.push_back({"R6",
                     {pos, pos + task.size()},
                     "violation message reported through " + task +
                         "; use $error so simulation flags the failure",
                     "$error"});
  }
}

void rule_r7(const std::string& s, const AssertionUnit& unit,
             std::vector<LintFinding>& out) {
  std::string inverted = "!" + unit.property_name;
  std::string target = unit.assert_target;
  target.erase(std::remove_if(target.begin(), target.end(),
                              [](char c) { return std::isspace(
                                    static_cast<unsigned char>(c)); }),
               target.end());
  if (target != inverted) return;
  std::size_t assert_pos = s.find("assert");
  std::size_t bang = assert_pos == std::string::npos
                         ? std::string::npos
                         : s.find('!', assert_pos);
  if (bang == std::string::npos) return;
  out.push_back({"R7",
                 {bang, bang + 1},
                 "assert target negates the declared property '" +
                     unit.property_name +
                     "', so passes and failures are swapped",
                 ""});
}

}  // namespace

KeywordFixes KeywordFixes::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open keyword fix list: " + path);
  KeywordFixes fixes;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw SchemaError("keyword fix row " + std::to_string(row) +
                        ": expected <wrong>\\t<correct>");
    std::string wrong = trim(line.substr(0, tab));
    std::string correct = trim(line.substr(tab + 1));
    if (wrong.empty() || correct.empty())
      throw SchemaError("keyword fix row " + std::to_string(row) +
                        ": both columns must be non-empty");
    fixes.pairs_.emplace_back(std::move(wrong), std::move(correct));
  }
  return fixes;
}

KeywordFixes KeywordFixes::from_pairs(
    std::vector<std::pair<std::string, std::string>> pairs) {
  KeywordFixes fixes;
  fixes.pairs_ = std::move(pairs);
  return fixes;
}

std::vector<LintFinding> lint(const std::string& text,
                              const KeywordFixes& fixes) {
  std::string s = blank_comments(text);
  std::vector<LintFinding> out;
  rule_r1(s, fixes, out);
  rule_r2(s, out);
  rule_r4(s, out);

  ParsedView view = try_parse(text);
  if (view.ok) {
    rule_r3(s, view.unit, out);
    rule_r5(s, view.unit, out);
    rule_r6(s, view.unit, out);
    rule_r7(s, view.unit, out);
  } else if (out.empty()) {
    // No repairable textual finding explains the failure; surface it.
    out.push_back({"R0", {0, 0}, "text does not parse: " + view.error,
                   std::nullopt});
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const LintFinding& a, const LintFinding& b) {
                     return a.span.begin < b.span.begin;
                   });
  return out;
}

namespace {

// Applies non-overlapping fixes back-to-front so earlier spans stay valid.
std::string apply_fixes(const std::string& text,
                        std::vector<LintFinding> fixable,
                        std::vector<LintFinding>* applied) {
  std::stable_sort(fixable.begin(), fixable.end(),
                   [](const LintFinding& a, const LintFinding& b) {
                     return a.span.begin > b.span.begin;
                   });
  std::string out = text;
  std::size_t low_watermark = std::string::npos;
  for (const LintFinding& f : fixable) {
    if (f.span.end > out.size()) continue;
    if (low_watermark != std::string::npos && f.span.end > low_watermark) continue;
    out = out.substr(0, f.span.begin) + *f.fix + out.substr(f.span.end);
    low_watermark = f.span.begin;
    if (applied) applied->push_back(f);
  }
  return out;
}

std::vector<std::string> bigrams(const std::string& word) {
  std::vector<std::string> out;
  if (word.size() < 2) {
    out.push_back(word);
    return out;
  }
  for (std::size_t i = 0; i + 1 < word.size(); ++i)
    out.push_back(word.substr(i, 2));
  return out;
}

double bigram_cosine(const std::string& a, const std::string& b) {
  std::map<std::string, double> va, vb;
  for (auto& g : bigrams(to_lower(a))) va[g] += 1.0;
  for (auto& g : bigrams(to_lower(b))) vb[g] += 1.0;
  double dot = 0, na = 0, nb = 0;
  for (auto& [g, w] : va) {
    na += w * w;
    auto it = vb.find(g);
    if (it != vb.end()) dot += w * it->second;
  }
  for (auto& [g, w] : vb) nb += w * w;
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Replaces whole-token occurrences; returns the first replacement span.
std::string replace_token(const std::string& text, const std::string& from,
                          const std::string& to, Span* first) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  bool seen = false;
  while (pos < text.size()) {
    std::size_t hit = text.find(from, pos);
    if (hit == std::string::npos) {
      out += text.substr(pos);
      break;
    }
    bool lead = hit == 0 || !is_ident_char(text[hit - 1]);
    std::size_t after = hit + from.size();
    bool tail = after >= text.size() || !is_ident_char(text[after]);
    out += text.substr(pos, hit - pos);
    if (lead && tail) {
      if (!seen && first != nullptr) *first = {hit, after};
      seen = true;
      out += to;
    } else {
      out += from;
    }
    pos = after;
  }
  return out;
}

bool addressish_name(const std::string& name) {
  std::string low = to_lower(name);
  for (const char* cue : {"addr", "mem", "region", "range"})
    if (low.find(cue) != std::string::npos) return true;
  return false;
}

bool inside_any_spec_range(std::uint32_t value, const SocSpec& spec) {
  for (const IpBlock& ip : spec.ips) {
    if (ip.address_range.contains(value)) return true;
    if (ip.protected_range && ip.protected_range->contains(value)) return true;
  }
  return false;
}

// Rewrites localparam hex constants with address-suggesting names whose
// value lies outside every spec range.  START/LOW/BASE names bind to the
// protected low bound, END/HIGH to the high bound, anything else to low.
std::string bind_addresses(const std::string& text, const SocSpec& spec,
                           const IpBlock& ip,
                           std::vector<LintFinding>* applied) {
  if (!ip.protected_range) return text;
  std::string s = blank_comments(text);
  std::string out = text;
  std::size_t search = 0;
  while (true) {
    std::size_t lp = s.find("localparam", search);
    if (lp == std::string::npos) break;
    search = lp + 10;
    if (!token_at(s, lp, "localparam")) continue;
    std::size_t semi = s.find(';', lp);
    if (semi == std::string::npos) break;
    std::string stmt = s.substr(lp, semi - lp);
    auto eq = stmt.find('=');
    if (eq == std::string::npos) continue;
    std::string name = trim(stmt.substr(10, eq - 10));
    auto tick = stmt.find("'h", eq);
    if (tick == std::string::npos || !addressish_name(name)) continue;
    std::size_t hex_begin = tick + 2;
    std::size_t hex_end = hex_begin;
    while (hex_end < stmt.size() &&
           std::isxdigit(static_cast<unsigned char>(stmt[hex_end])))
      ++hex_end;
    if (hex_end == hex_begin) continue;
    std::uint32_t value;
    try {
      value = parse_hex32(stmt.substr(hex_begin, hex_end - hex_begin));
    } catch (const AddressError&) {
      continue;
    }
    if (inside_any_spec_range(value, spec)) continue;
    std::string up = to_upper(name);
    bool wants_high = up.find("END") != std::string::npos ||
                      up.find("HIGH") != std::string::npos;
    std::uint32_t bound =
        wants_high ? ip.protected_range->high : ip.protected_range->low;
    std::string replacement = format_hex32(bound);
    std::size_t abs_begin = lp + hex_begin;
    std::size_t abs_end = lp + hex_end;
    out = out.substr(0, abs_begin) + replacement + out.substr(abs_end);
    s = s.substr(0, abs_begin) + replacement + s.substr(abs_end);
    if (applied)
      applied->push_back({"BIND_ADDRESS",
                          {abs_begin, abs_begin + replacement.size()},
                          "address constant " + name +
                              " bound to the protected range of " + ip.name,
                          replacement});
    search = abs_begin + replacement.size();
  }
  return out;
}

// Maps identifiers that resolve to nothing in the unit or the spec onto the
// closest bus signal name by character-bigram cosine (floor 0.5).
std::string bind_signals(const std::string& text, const SocSpec& spec,
                         std::vector<LintFinding>* applied) {
  ParsedView view = try_parse(text);
  if (!view.ok) return text;
  const AssertionUnit& unit = view.unit;

  std::set<std::string> known;
  for (const Port& p : unit.ports) known.insert(to_lower(p.name));
  for (const std::string& line : unit.preamble) {
    if (line.rfind("localparam", 0) == 0) {
      std::string rest = trim(line.substr(10));
      std::size_t end = 0;
      while (end < rest.size() && is_ident_char(rest[end])) ++end;
      known.insert(to_lower(rest.substr(0, end)));
    }
  }
  known.insert(to_lower(unit.property_name));
  known.insert(to_lower(unit.assert_label));
  if (unit.clocking) {
    known.insert(to_lower(unit.clocking->signal));
    if (unit.clocking->reset) known.insert(to_lower(unit.clocking->reset->second));
  }
  for (const IpBlock& ip : spec.ips) {
    known.insert(to_lower(ip.name));
    if (ip.abbreviation) known.insert(to_lower(*ip.abbreviation));
    known.insert(to_lower(ip.ident()));
  }
  std::set<std::string> signals_ci;
  for (const std::string& sig : spec.bus_interface.signal_names)
    signals_ci.insert(to_lower(sig));

  auto is_known = [&](const std::string& ident) {
    std::string low = to_lower(ident);
    if (sv_keywords().count(low)) return true;
    if (known.count(low)) return true;
    if (signals_ci.count(low)) return true;
    // Clock/reset conventions are never rebound.
    for (const char* prefix : {"clk", "rst", "clock", "reset"})
      if (low.rfind(prefix, 0) == 0) return true;
    return false;
  };

  std::vector<std::string> exprs;
  if (unit.disable_expr) exprs.push_back(*unit.disable_expr);
  if (unit.property_body.is_implication) {
    for (const SeqItem& item : unit.property_body.antecedent)
      exprs.push_back(item.expr);
    for (const SeqItem& item : unit.property_body.consequent)
      exprs.push_back(item.expr);
  } else {
    exprs.push_back(unit.property_body.boolean_expr);
  }

  std::vector<std::string> unknown;
  std::set<std::string> seen;
  for (const std::string& expr : exprs)
    for (const std::string& ident : idents_only(expr))
      if (!is_known(ident) && seen.insert(ident).second)
        unknown.push_back(ident);

  std::string out = text;
  for (const std::string& ident : unknown) {
    const std::string* best = nullptr;
    double best_score = 0.0;
    for (const std::string& sig : spec.bus_interface.signal_names) {
      double score = bigram_cosine(ident, sig);
      if (score > best_score) {
        best_score = score;
        best = &sig;
      }
    }
    if (best == nullptr || best_score < 0.5) continue;
    Span first{0, 0};
    std::string next = replace_token(out, ident, *best, &first);
    if (next == out) continue;
    out = std::move(next);
    if (applied)
      applied->push_back({"BIND_SIGNAL",
                          first,
                          "identifier '" + ident +
                              "' resolved to bus signal '" + *best + "'",
                          *best});
  }
  return out;
}

}  // namespace

CorrectionResult correct(const std::string& text, const SocSpec& spec,
                         const IpBlock* target_ip, const KeywordFixes& fixes) {
  CorrectionResult result;
  result.text = text;

  for (int pass = 0; pass < 10; ++pass) {
    std::vector<LintFinding> findings = lint(result.text, fixes);
    std::vector<LintFinding> fixable;
    for (const LintFinding& f : findings)
      if (f.fix) fixable.push_back(f);
    if (fixable.empty()) break;
    result.text = apply_fixes(result.text, std::move(fixable), &result.applied);
  }

  if (target_ip != nullptr) {
    result.text = bind_addresses(result.text, spec, *target_ip, &result.applied);
    result.text = bind_signals(result.text, spec, &result.applied);
  }

  try {
    parse_assertion(result.text);
  } catch (const SyntaxError& e) {
    throw UncorrectableError(
        std::string("assertion text does not parse after applying fixes: ") +
        e.what());
  }
  return result;
}

}  // namespace socsec
