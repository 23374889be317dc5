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
// Parser, renderer, linter and corrector for the SystemVerilog-assertion
// subset produced by LLM responses: an optional module wrapper, opaque
// preamble statements (localparams, default clocking blocks), a single
// property with clocking / disable iff / implication or boolean body, and a
// labeled assert with an optional else-severity action.  Expressions are
// opaque balanced-paren text; the grammar splits them only at top-level
// |->, |=> and ##N markers.  Full SVA (sequences, multi-clock, throughout,
// until) is deliberately out of scope and rejected with a syntax error.

#ifndef SOCSEC_SVA_HPP_
#define SOCSEC_SVA_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "socsec/cwe_db.hpp"
#include "socsec/soc_spec.hpp"

namespace socsec {

enum class ClockEdge { posedge, negedge };

std::string to_string(ClockEdge edge);

struct ClockSpec {
  ClockEdge edge = ClockEdge::posedge;
  std::string signal;
  // Secondary "or <edge>(<signal>)" event, conventionally an async reset.
  std::optional<std::pair<ClockEdge, std::string>> reset;

  bool operator==(const ClockSpec&) const = default;
};

enum class PortDirection { input, output, inout };

struct Port {
  PortDirection direction = PortDirection::input;
  std::string net_type;  // "wire", "reg", "logic" or empty
  std::optional<unsigned> width_msb;  // [msb:0]; absent for scalar
  std::string name;

  bool operator==(const Port&) const = default;
};

// One expression in a sequence, with the ##N cycle delay that follows it.
// The delay after the last antecedent item is the gap between antecedent
// and consequent (rendered after the implication operator); the last
// consequent item always carries delay 0.
struct SeqItem {
  std::string expr;  // whitespace-collapsed balanced text
  unsigned following_delay = 0;

  bool operator==(const SeqItem&) const = default;
};

enum class ImplOp { overlapped, non_overlapped };  // |->  vs  |=>

struct PropertyExpr {
  bool is_implication = false;
  std::string boolean_expr;  // when !is_implication
  std::vector<SeqItem> antecedent;
  std::vector<SeqItem> consequent;
  ImplOp op = ImplOp::overlapped;

  bool operator==(const PropertyExpr&) const = default;
};

enum class Severity { error, display, info, warning };

std::string to_string(Severity severity);

struct SeverityAction {
  Severity severity = Severity::error;
  std::string message;

  bool operator==(const SeverityAction&) const = default;
};

struct AssertionUnit {
  std::optional<std::string> module_name;
  std::vector<Port> ports;
  // Statements between the module header and the property, verbatim one
  // trimmed line each.  A `default clocking <id> @(<edge> <sig>);` line here
  // resolves `@(<id>)` property clocking at parse time.
  std::vector<std::string> preamble;
  std::optional<ClockSpec> clocking;
  std::optional<std::string> disable_expr;
  std::string property_name;
  PropertyExpr property_body;
  std::string assert_label;
  std::string assert_target;  // verbatim, e.g. "p_foo" or "!p_foo"
  std::optional<SeverityAction> action;

  bool operator==(const AssertionUnit&) const = default;
};

// Throws SyntaxError with position for out-of-subset input; UVM class-based
// text gets a dedicated "UVM" diagnostic.
AssertionUnit parse_assertion(const std::string& text);

// Deterministic template-shaped rendering; parse(render(u)) == u.
std::string render_assertion(const AssertionUnit& unit);

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  bool operator==(const Span&) const = default;
};

// rule_id: R0 unparseable, R1 near-miss keyword, R2 fused disable,
// R3 contradictory disable (advisory), R4 missing '@' on edge expression,
// R5 suspicious handshake ordering (advisory), R6 severity misuse,
// R7 inverted assert target.  correct() additionally emits BIND_ADDRESS and
// BIND_SIGNAL records for spec-binding rewrites.
struct LintFinding {
  std::string rule_id;
  Span span;
  std::string message;
  std::optional<std::string> fix;  // replacement for span when auto-fixable

  bool operator==(const LintFinding&) const = default;
};

// (misspelling, correction) pairs for R1, whole-token matched.
class KeywordFixes {
 public:
  // TSV columns: wrong, correct; '#' lines are comments.
  static KeywordFixes load(const std::string& path);
  static KeywordFixes from_pairs(
      std::vector<std::pair<std::string, std::string>> pairs);

  const std::vector<std::pair<std::string, std::string>>& pairs() const {
    return pairs_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> pairs_;
};

std::vector<LintFinding> lint(const std::string& text,
                              const KeywordFixes& fixes);

struct CorrectionResult {
  std::string text;
  std::vector<LintFinding> applied;
};

// Applies auto-fixes to a fixpoint (at most 10 passes), then, when
// target_ip is given, rewrites localparam address constants that fall
// outside every spec range to the IP's protected bounds and maps unknown
// free identifiers onto the nearest bus signal name.  The result is
// guaranteed to parse; otherwise UncorrectableError.
CorrectionResult correct(const std::string& text, const SocSpec& spec,
                         const IpBlock* target_ip, const KeywordFixes& fixes);

// Offline assertion generation from the violation-type pattern catalogue
// (access_control, information_flow, liveness, toctou).  Throws
// NoTemplateError for types without a pattern and MissingIpError when
// access_control is requested without an IP carrying a protected range.
AssertionUnit instantiate_template(const CweEntry& entry, const IpBlock* ip,
                                   const SocSpec& spec);

}  // namespace socsec

#endif  // SOCSEC_SVA_HPP_
