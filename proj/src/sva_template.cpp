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
// Offline assertion generation.  One pattern per violation type, bound to
// the design spec; used when no LLM response is available for a CWE.

#include <cctype>

#include "socsec/errors.hpp"
#include "socsec/sva.hpp"
#include "socsec/text_util.hpp"

namespace socsec {
namespace {

std::string sanitize_ident(const std::string& raw) {
  std::string out;
  for (char c : raw) out.push_back(is_ident_char(c) && c != '$' ? c : '_');
  if (out.empty()) out = "_";
  if (std::isdigit(static_cast<unsigned char>(out[0]))) out.insert(out.begin(), '_');
  return out;
}

std::string cwe_number(const std::string& cwe_id) {
  auto dash = cwe_id.find('-');
  return dash == std::string::npos ? cwe_id : cwe_id.substr(dash + 1);
}

// First bus signal whose name contains the fragment, else the fallback.
std::string pick_signal(const SocSpec& spec, std::string_view fragment,
                        const char* fallback) {
  std::string frag = to_lower(fragment);
  for (const std::string& sig : spec.bus_interface.signal_names)
    if (to_lower(sig).find(frag) != std::string::npos) return sig;
  return fallback;
}

AssertionUnit base_unit(const CweEntry& entry, ViolationType type) {
  AssertionUnit unit;
  std::string stem = "cwe" + cwe_number(entry.cwe_id) + "_" + to_string(type);
  unit.property_name = "p_" + stem;
  unit.assert_label = "a_" + stem;
  unit.assert_target = unit.property_name;
  unit.clocking = ClockSpec{ClockEdge::posedge, "clk_i", std::nullopt};
  return unit;
}

PropertyExpr implication(std::string antecedent, std::string consequent) {
  PropertyExpr body;
  body.is_implication = true;
  body.op = ImplOp::overlapped;
  body.antecedent.push_back({std::move(antecedent), 0});
  body.consequent.push_back({std::move(consequent), 0});
  return body;
}

}  // namespace

AssertionUnit instantiate_template(const CweEntry& entry, const IpBlock* ip,
                                   const SocSpec& spec) {
  switch (entry.violation_type) {
    case ViolationType::access_control: {
      if (ip == nullptr || !ip->protected_range)
        throw MissingIpError("access control template for " + entry.cwe_id +
                             " needs a target IP with a protected range");
      AssertionUnit unit = base_unit(entry, ViolationType::access_control);
      std::string addr = pick_signal(spec, "addr", "addr_i");
      std::string strobe = pick_signal(spec, "valid", "start");
      unit.property_body = implication(
          "$rose(" + strobe + ")",
          "(" + addr + " >= 32'h" + format_hex32(ip->protected_range->low) +
              " && " + addr + " <= 32'h" +
              format_hex32(ip->protected_range->high) + ")");
      unit.action = SeverityAction{Severity::error,
                                   "Violation of access control rule"};
      return unit;
    }
    case ViolationType::information_flow: {
      AssertionUnit unit = base_unit(entry, ViolationType::information_flow);
      unit.property_body =
          implication("$rose(start)", "(key != 32'hABCD1234)");
      unit.action = SeverityAction{Severity::error,
                                   "Key has been left at a default value."};
      return unit;
    }
    case ViolationType::liveness: {
      AssertionUnit unit = base_unit(entry, ViolationType::liveness);
      std::string a = "Slave_A", b = "Slave_B";
      std::vector<std::string> names;
      for (const IpBlock& block : spec.ips) {
        names.push_back(sanitize_ident(block.ident()));
        if (names.size() == 2) break;
      }
      if (names.size() == 2) {
        a = names[0];
        b = names[1];
      }
      unit.property_body = implication(
          "(!rst_i)", "!(" + a + "_access && " + b + "_access)");
      unit.action = SeverityAction{Severity::error,
                                   "Violation of no race condition rule"};
      return unit;
    }
    case ViolationType::toctou: {
      AssertionUnit unit = base_unit(entry, ViolationType::toctou);
      unit.property_body =
          implication("(done && !rst_i)", "(sensitive_register === 32'b0)");
      unit.action = SeverityAction{
          Severity::error, "Violation of sensitive register clear rule"};
      return unit;
    }
    case ViolationType::inadequate_error_handling:
    case ViolationType::not_applicable:
      break;
  }
  throw NoTemplateError("no assertion template for violation type '" +
                        to_string(entry.violation_type) + "' (" +
                        entry.cwe_id + ")");
}

}  // namespace socsec
