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

#include "socsec/sva.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "socsec/errors.hpp"
#include "socsec/text_util.hpp"

namespace socsec {

std::string to_string(ClockEdge edge) {
  return edge == ClockEdge::posedge ? "posedge" : "negedge";
}

std::string to_string(Severity severity) {
  switch (severity) {
    case Severity::error: return "error";
    case Severity::display: return "display";
    case Severity::info: return "info";
    case Severity::warning: return "warning";
  }
  return "error";
}

namespace {

// Blanks out // and /* */ comments, preserving newlines so error positions
// keep pointing at the original text.  String literals are left intact.
std::string strip_comments(const std::string& text) {
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
      if (end == std::string::npos) end = out.size();
      else end += 2;
      for (std::size_t k = i; k < end; ++k)
        if (out[k] != '\n') out[k] = ' ';
      i = end - 1;
    }
  }
  return out;
}

bool word_at(const std::string& s, std::size_t pos, std::string_view word) {
  if (pos + word.size() > s.size()) return false;
  if (s.compare(pos, word.size(), word) != 0) return false;
  if (pos > 0 && is_ident_char(s[pos - 1])) return false;
  std::size_t after = pos + word.size();
  return after >= s.size() || !is_ident_char(s[after]);
}

// First word-boundary occurrence outside string literals.
std::size_t find_keyword(const std::string& s, std::string_view word,
                         std::size_t from) {
  bool in_string = false;
  for (std::size_t i = from; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = true;
      continue;
    }
    if (c == word[0] && word_at(s, i, word)) return i;
  }
  return std::string::npos;
}

class Parser {
 public:
  explicit Parser(std::string text)
      : raw_(std::move(text)), s_(strip_comments(raw_)) {}

  AssertionUnit parse() {
    reject_uvm();
    AssertionUnit unit;
    skip_ws();
    if (peek_word("module")) parse_module_header(unit);

    std::size_t prop = find_keyword(s_, "property", pos_);
    if (prop == std::string::npos)
      fail("expected a property declaration");
    collect_preamble(unit, prop);
    pos_ = prop;

    parse_property(unit);
    parse_assert(unit);

    skip_ws();
    if (unit.module_name) {
      expect_word("endmodule", "endmodule (module wrapper is open)");
      skip_ws();
    }
    if (pos_ != s_.size()) fail("unexpected trailing text");
    return unit;
  }

 private:
  std::string raw_;
  std::string s_;
  std::size_t pos_ = 0;
  std::map<std::string, ClockSpec> named_clocking_;

  [[noreturn]] void fail(const std::string& msg) { fail_at(msg, pos_); }

  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(msg, line, col);
  }

  void reject_uvm() {
    bool in_string = false;
    for (std::size_t i = 0; i < s_.size(); ++i) {
      char c = s_[i];
      if (in_string) {
        if (c == '\\') ++i;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') {
        in_string = true;
        continue;
      }
      if ((c == 'c' && word_at(s_, i, "class")) ||
          (c == 'u' && word_at(s_, i, "uvm_pkg")) ||
          (c == 'u' && s_.compare(i, 4, "uvm_") == 0 &&
           (i == 0 || !is_ident_char(s_[i - 1])))) {
        pos_ = i;
        fail("UVM class-based assertion text is not supported; expected a "
             "module/property template");
      }
    }
  }

  void skip_ws() {
    while (pos_ < s_.size() &&
           std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool peek_word(std::string_view word) {
    skip_ws();
    return word_at(s_, pos_, word);
  }

  bool accept_word(std::string_view word) {
    if (!peek_word(word)) return false;
    pos_ += word.size();
    return true;
  }

  void expect_word(std::string_view word, const std::string& what) {
    if (!accept_word(word)) fail("expected " + what);
  }

  bool accept_char(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_char(char c, const std::string& what) {
    if (!accept_char(c)) fail("expected '" + std::string(1, c) + "' " + what);
  }

  std::string parse_ident(const std::string& what) {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() &&
        (std::isalpha(static_cast<unsigned char>(s_[pos_])) ||
         s_[pos_] == '_')) {
      ++pos_;
      while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
      return s_.substr(start, pos_ - start);
    }
    fail("expected identifier for " + what);
  }

  unsigned parse_number(const std::string& what) {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (pos_ == start) fail("expected number for " + what);
    return static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start)));
  }

  void parse_module_header(AssertionUnit& unit) {
    expect_word("module", "module");
    unit.module_name = parse_ident("module name");
    expect_char('(', "to open the port list");
    skip_ws();
    if (!accept_char(')')) {
      while (true) {
        unit.ports.push_back(parse_port());
        if (accept_char(')')) break;
        expect_char(',', "between ports");
        // LLM output frequently leaves a trailing comma on the last port.
        skip_ws();
        if (accept_char(')')) break;
      }
    }
    expect_char(';', "after the module header");
  }

  Port parse_port() {
    Port port;
    if (accept_word("input")) port.direction = PortDirection::input;
    else if (accept_word("output")) port.direction = PortDirection::output;
    else if (accept_word("inout")) port.direction = PortDirection::inout;
    else fail("expected port direction (input, output or inout)");
    for (const char* net : {"wire", "reg", "logic"})
      if (accept_word(net)) {
        port.net_type = net;
        break;
      }
    if (accept_char('[')) {
      unsigned msb = parse_number("port width msb");
      expect_char(':', "in port range");
      unsigned lsb = parse_number("port width lsb");
      if (lsb != 0) fail("only [msb:0] port ranges are supported");
      expect_char(']', "to close port range");
      port.width_msb = msb;
    }
    port.name = parse_ident("port name");
    return port;
  }

  void collect_preamble(AssertionUnit& unit, std::size_t until) {
    std::string region = s_.substr(pos_, until - pos_);
    std::istringstream in(region);
    std::string line;
    while (std::getline(in, line)) {
      std::string t = collapse_ws(line);
      if (!t.empty()) unit.preamble.push_back(t);
    }
    // Resolve `default clocking <id> @(<edge> <sig>);` declarations so the
    // property may reference the block by name.
    for (const std::string& p : unit.preamble) {
      if (p.rfind("default clocking ", 0) != 0) continue;
      std::istringstream ps(p.substr(17));
      std::string name, at;
      ps >> name >> at;
      ClockSpec spec;
      std::string rest;
      std::getline(ps, rest);
      std::string ev = at + rest;  // "@(posedge clk);"
      auto open = ev.find('(');
      auto close = ev.rfind(')');
      if (ev.empty() || ev[0] != '@' || open == std::string::npos ||
          close == std::string::npos || close < open)
        continue;
      std::string inner = collapse_ws(ev.substr(open + 1, close - open - 1));
      std::istringstream es(inner);
      std::string edge, sig;
      es >> edge >> sig;
      if (edge == "posedge") spec.edge = ClockEdge::posedge;
      else if (edge == "negedge") spec.edge = ClockEdge::negedge;
      else continue;
      if (sig.empty()) continue;
      named_clocking_[name] = spec;
      named_clocking_[name].signal = sig;
    }
  }

  std::pair<ClockEdge, std::string> parse_edge_event() {
    ClockEdge edge;
    if (accept_word("posedge")) edge = ClockEdge::posedge;
    else if (accept_word("negedge")) edge = ClockEdge::negedge;
    else fail("expected posedge or negedge");
    std::string signal;
    if (accept_char('(')) {
      signal = parse_ident("clock signal");
      expect_char(')', "after clock signal");
    } else {
      signal = parse_ident("clock signal");
    }
    return {edge, signal};
  }

  void parse_clocking(AssertionUnit& unit) {
    // '@' already consumed.
    expect_char('(', "after '@'");
    skip_ws();
    if (peek_word("posedge") || peek_word("negedge")) {
      ClockSpec spec;
      auto [edge, signal] = parse_edge_event();
      spec.edge = edge;
      spec.signal = signal;
      if (accept_word("or")) spec.reset = parse_edge_event();
      expect_char(')', "to close the clock event");
      unit.clocking = spec;
      return;
    }
    std::size_t at = pos_;
    std::string name = parse_ident("clocking block reference");
    expect_char(')', "after clocking block reference");
    auto it = named_clocking_.find(name);
    if (it == named_clocking_.end())
      fail_at("reference to unknown clocking block '" + name + "'", at);
    unit.clocking = it->second;
  }

  // Collects one opaque expression atom: balanced text ending at a depth-0
  // |->, |=>, ##, or ';'.
  std::string parse_expr_atom(const std::string& what) {
    skip_ws();
    std::size_t start = pos_;
    int depth = 0;
    bool in_string = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (in_string) {
        if (c == '\\') ++pos_;
        else if (c == '"') in_string = false;
        ++pos_;
        continue;
      }
      if (c == '"') {
        in_string = true;
        ++pos_;
        continue;
      }
      if (c == '(' || c == '[' || c == '{') ++depth;
      else if (c == ')' || c == ']' || c == '}') {
        if (depth == 0) fail("unbalanced ')' in " + what);
        --depth;
      } else if (depth == 0) {
        if (c == ';') break;
        if (c == '#' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '#') break;
        if (c == '|' && pos_ + 2 < s_.size() && s_[pos_ + 1] == '-' &&
            s_[pos_ + 2] == '>')
          break;
        if (c == '|' && pos_ + 2 < s_.size() && s_[pos_ + 1] == '=' &&
            s_[pos_ + 2] == '>')
          break;
      }
      ++pos_;
    }
    if (depth != 0) fail("unbalanced '(' in " + what);
    std::string atom = collapse_ws(s_.substr(start, pos_ - start));
    if (atom.empty()) fail("empty expression in " + what);
    return atom;
  }

  void parse_property(AssertionUnit& unit) {
    expect_word("property", "property");
    unit.property_name = parse_ident("property name");
    expect_char(';', "after the property name");
    skip_ws();
    if (accept_char('@')) parse_clocking(unit);
    skip_ws();
    if (peek_word("disable")) {
      pos_ += 7;  // "disable"
      expect_word("iff", "iff after disable");
      expect_char('(', "after disable iff");
      std::size_t start = pos_;
      int depth = 1;
      while (pos_ < s_.size() && depth > 0) {
        char c = s_[pos_];
        if (c == '(') ++depth;
        else if (c == ')') --depth;
        if (depth > 0) ++pos_;
      }
      if (depth != 0) fail("unterminated disable iff expression");
      unit.disable_expr = collapse_ws(s_.substr(start, pos_ - start));
      ++pos_;  // ')'
    }

    // Sequence items split at top-level implication and delay markers.
    std::vector<SeqItem> items;
    bool seen_op = false;
    ImplOp op = ImplOp::overlapped;
    std::vector<SeqItem> antecedent;
    while (true) {
      items.push_back({parse_expr_atom("property expression"), 0});
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated property expression");
      if (s_[pos_] == ';') {
        ++pos_;
        break;
      }
      if (s_[pos_] == '#') {
        pos_ += 2;  // "##"
        items.back().following_delay = parse_number("cycle delay");
        continue;
      }
      // |-> or |=>
      bool non_overlapped = s_[pos_ + 1] == '=';
      pos_ += 3;
      if (seen_op) fail("multiple implication operators in one property");
      seen_op = true;
      op = non_overlapped ? ImplOp::non_overlapped : ImplOp::overlapped;
      antecedent = std::move(items);
      items.clear();
      // A delay directly after the operator is the antecedent-to-consequent
      // gap, stored on the last antecedent item.
      skip_ws();
      while (pos_ + 1 < s_.size() && s_[pos_] == '#' && s_[pos_ + 1] == '#') {
        pos_ += 2;
        antecedent.back().following_delay += parse_number("cycle delay");
        skip_ws();
      }
    }

    if (seen_op) {
      unit.property_body.is_implication = true;
      unit.property_body.op = op;
      unit.property_body.antecedent = std::move(antecedent);
      unit.property_body.consequent = std::move(items);
      if (unit.property_body.consequent.back().following_delay != 0)
        fail("trailing cycle delay after the consequent");
    } else {
      if (items.size() != 1 || items[0].following_delay != 0)
        fail("sequence delays require an implication operator");
      unit.property_body.is_implication = false;
      unit.property_body.boolean_expr = items[0].expr;
    }
    expect_word("endproperty", "endproperty");
  }

  void parse_assert(AssertionUnit& unit) {
    unit.assert_label = parse_ident("assert label");
    expect_char(':', "after the assert label");
    expect_word("assert", "assert");
    expect_word("property", "property after assert");
    expect_char('(', "after assert property");
    std::size_t start = pos_;
    int depth = 1;
    while (pos_ < s_.size() && depth > 0) {
      char c = s_[pos_];
      if (c == '(') ++depth;
      else if (c == ')') --depth;
      if (depth > 0) ++pos_;
    }
    if (depth != 0) fail("unterminated assert property target");
    unit.assert_target = collapse_ws(s_.substr(start, pos_ - start));
    if (unit.assert_target.empty()) fail("empty assert property target");
    ++pos_;  // ')'
    skip_ws();
    if (accept_word("else")) {
      skip_ws();
      expect_char('$', "severity task after else");
      std::string sev = parse_ident("severity task");
      SeverityAction action;
      if (sev == "error") action.severity = Severity::error;
      else if (sev == "display") action.severity = Severity::display;
      else if (sev == "info") action.severity = Severity::info;
      else if (sev == "warning") action.severity = Severity::warning;
      else fail("unsupported severity task $" + sev +
                " (expected error, display, info or warning)");
      expect_char('(', "after severity task");
      skip_ws();
      expect_char('"', "to open the severity message");
      std::string message;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) {
          message += s_[pos_];
          ++pos_;
        }
        message += s_[pos_];
        ++pos_;
      }
      expect_char('"', "to close the severity message");
      expect_char(')', "after the severity message");
      action.message = std::move(message);
      unit.action = action;
    }
    expect_char(';', "to end the assert statement");
  }
};

}  // namespace

AssertionUnit parse_assertion(const std::string& text) {
  return Parser(text).parse();
}

namespace {

std::string render_sequence(const std::vector<SeqItem>& items,
                            bool print_last_delay) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += " ";
    out += items[i].expr;
    bool last = i + 1 == items.size();
    if (!last)
      out += " ##" + std::to_string(items[i].following_delay);
    else if (print_last_delay && items[i].following_delay > 0)
      out += " ##" + std::to_string(items[i].following_delay);
  }
  return out;
}

std::string render_property_expr(const PropertyExpr& body) {
  if (!body.is_implication) return body.boolean_expr;
  std::string out = render_sequence(body.antecedent, false);
  out += body.op == ImplOp::overlapped ? " |-> " : " |=> ";
  unsigned gap = body.antecedent.back().following_delay;
  if (gap > 0) out += "##" + std::to_string(gap) + " ";
  out += render_sequence(body.consequent, false);
  return out;
}

}  // namespace

std::string render_assertion(const AssertionUnit& unit) {
  std::ostringstream out;
  std::string indent;
  if (unit.module_name) {
    out << "module " << *unit.module_name << " (";
    for (std::size_t i = 0; i < unit.ports.size(); ++i) {
      const Port& p = unit.ports[i];
      out << "\n    ";
      switch (p.direction) {
        case PortDirection::input: out << "input"; break;
        case PortDirection::output: out << "output"; break;
        case PortDirection::inout: out << "inout"; break;
      }
      if (!p.net_type.empty()) out << " " << p.net_type;
      if (p.width_msb) out << " [" << *p.width_msb << ":0]";
      out << " " << p.name;
      if (i + 1 < unit.ports.size()) out << ",";
    }
    out << "\n);\n\n";
    indent = "    ";
  }
  for (const std::string& line : unit.preamble) out << indent << line << "\n";
  if (!unit.preamble.empty()) out << "\n";

  out << indent << "property " << unit.property_name << ";\n";
  out << indent << "    ";
  if (unit.clocking) {
    out << "@(" << to_string(unit.clocking->edge) << "("
        << unit.clocking->signal << ")";
    if (unit.clocking->reset)
      out << " or " << to_string(unit.clocking->reset->first) << "("
          << unit.clocking->reset->second << ")";
    out << ") ";
  }
  if (unit.disable_expr) out << "disable iff (" << *unit.disable_expr << ") ";
  out << render_property_expr(unit.property_body) << ";\n";
  out << indent << "endproperty\n\n";

  out << indent << unit.assert_label << ": assert property ("
      << unit.assert_target << ")";
  if (unit.action)
    out << "\n" << indent << "    else $" << to_string(unit.action->severity)
        << "(\"" << unit.action->message << "\")";
  out << ";\n";

  if (unit.module_name) out << "\nendmodule\n";
  return out.str();
}

}  // namespace socsec
