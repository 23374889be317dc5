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
// Security policies as <predicate, timing, action> 3-tuples, translated
// from parsed assertions, plus the placement classification that decides
// whether a policy is enforced centrally (bus) or in an IP wrapper.

#ifndef SOCSEC_POLICY_HPP_
#define SOCSEC_POLICY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "socsec/cwe_db.hpp"
#include "socsec/soc_spec.hpp"
#include "socsec/sva.hpp"

namespace socsec {

enum class AtomKind { expression, delay };

// One element of a policy predicate: either an expression over design
// signals or a cycle-delay marker separating two expressions.
struct PredicateAtom {
  AtomKind kind = AtomKind::expression;
  std::string expr;            // kind == expression
  std::uint32_t cycles = 0;    // kind == delay; always >= 1

  static PredicateAtom expression(std::string text) {
    return {AtomKind::expression, std::move(text), 0};
  }
  static PredicateAtom delay(std::uint32_t cycles) {
    return {AtomKind::delay, {}, cycles};
  }

  bool operator==(const PredicateAtom&) const = default;
};

struct TimingSpec {
  std::optional<std::pair<ClockEdge, std::string>> clock;
  std::optional<std::pair<ClockEdge, std::string>> reset;
  int mode = 0;  // operating mode; 0 = user/default

  bool operator==(const TimingSpec&) const = default;
};

// `target = value;` from the action mini-language.  Targets are kept in
// their written form: either a bare identifier or a qualified reference
// like slave['SPI'].w_data; codegen flattens and resolves them.
struct SignalAssignment {
  std::string target;
  std::string value;

  bool operator==(const SignalAssignment&) const = default;
};

enum class PlacementLevel { bus, ip };

struct Placement {
  PlacementLevel level = PlacementLevel::bus;
  std::string ip_name;  // level == ip

  bool operator==(const Placement&) const = default;
};

struct SecurityPolicy {
  std::vector<PredicateAtom> predicate;  // expression/delay alternating
  TimingSpec timing;
  std::vector<SignalAssignment> action;
  std::optional<std::string> source_cwe;
  std::optional<Placement> placement;

  bool operator==(const SecurityPolicy&) const = default;
};

// A slave['Name'].signal / master['Name'].signal occurrence inside an
// expression or action target, with its [begin, end) span in the text.
struct QualifiedSignalRef {
  std::string role;     // "slave" or "master"
  std::string ip_name;  // text between the quotes, verbatim
  std::string signal;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const QualifiedSignalRef&) const = default;
};

// Scans text left to right for qualified signal references.  Malformed
// near-matches (no quote, no .signal) are skipped, not errors.
std::vector<QualifiedSignalRef> find_qualified_refs(const std::string& text);

// Parses semicolon-separated `target = value` statements.  Throws
// ActionParseError naming the offending statement.
std::vector<SignalAssignment> parse_actions(const std::string& input);

// Translates a parsed assertion into a policy: clocking becomes timing
// (mode 0 by default), implications split into expression atoms with
// interleaved delay markers (absent antecedent/consequent gap defaults to
// one cycle; |=> adds one), boolean properties become a single atom, and
// the action comes from action_input.  ##0 fuses neighbours with &&.
SecurityPolicy assertion_to_policy(const AssertionUnit& unit,
                                   const std::string& action_input,
                                   const SocSpec& spec);

// Decides enforcement placement from the signals the policy touches:
// more than one IP or any bus-interface signal puts it on the bus, exactly
// one IP puts it in that IP's wrapper, and reference-free policies fall
// back to the CWE entry's classification.  Throws UnresolvableSignalError
// when nothing resolves.
SecurityPolicy classify_placement(SecurityPolicy policy, const CweEntry* entry,
                                  const SocSpec& spec);

// JSON document round-trip.  serialize of a parse is byte-identical.
std::string serialize_policy(const SecurityPolicy& policy);
SecurityPolicy parse_policy(const std::string& text);

// Array-of-policies convenience used for pipeline checkpoints.
std::string serialize_policies(const std::vector<SecurityPolicy>& policies);
std::vector<SecurityPolicy> parse_policies(const std::string& text);

}  // namespace socsec

#endif  // SOCSEC_POLICY_HPP_
