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
// Synthesizable Verilog generation from security policies: a centralized
// bus-level enforcement module, per-IP top-level wrappers, and an internal
// subset validator that every generated artifact must pass.

#ifndef SOCSEC_CODEGEN_HPP_
#define SOCSEC_CODEGEN_HPP_

#include <string>
#include <vector>

#include "socsec/policy.hpp"
#include "socsec/soc_spec.hpp"
#include "socsec/sva.hpp"

namespace socsec {

enum class ArtifactKind { central_module, ip_wrapper };

struct RtlPort {
  PortDirection direction = PortDirection::input;
  unsigned width = 1;  // bits; 1 renders without a range
  std::string name;

  bool operator==(const RtlPort&) const = default;
};

struct RtlArtifact {
  ArtifactKind kind = ArtifactKind::central_module;
  std::string ip_name;  // kind == ip_wrapper
  std::string module_name;
  std::vector<RtlPort> port_list;
  std::string body;  // complete module text
  std::vector<std::string> policies_included;  // source CWE ids, in order

  bool operator==(const RtlArtifact&) const = default;
};

struct RtlFinding {
  std::string rule;  // unbalanced_block | undeclared_identifier | subset_violation
  std::string message;

  bool operator==(const RtlFinding&) const = default;
};

// Flattened-identifier record written to signal_map.tsv.
struct SignalMapEntry {
  std::string flattened;
  std::string original;

  bool operator==(const SignalMapEntry&) const = default;
};

// Rewrites qualified references in text to flat identifiers
// (slave['SPI'].w_data -> slave_SPI_w_data), collecting the mapping.
// Non-identifier characters in the IP name become underscores.
std::string flatten_references(const std::string& text,
                               std::vector<SignalMapEntry>& map);

// Sorted, de-duplicated mapping table over everything the policies mention.
std::vector<SignalMapEntry> collect_signal_map(
    const std::vector<SecurityPolicy>& policies);

// One policy's enforcement logic as a standalone Verilog fragment:
// declarations, tracker blocks for sequential predicates, and the guarded
// action assignments.  Combinational when the policy has no clock, clocked
// (with a reset branch when a reset is present) otherwise.  Throws
// UnresolvableSignalError for qualified references naming unknown IPs and
// Error for sequential predicates without a clock.
std::string policy_to_logic(const SecurityPolicy& policy, const SocSpec& spec);

// Centralized bus-level module enforcing all given policies.  Overridden
// signals become output/input pairs (<sig> / <sig>_in) that default to
// pass-through; fragments apply in ascending source-CWE order within one
// always block, so later policies win conflicting writes.  All policies
// must be bus-level.
RtlArtifact build_central_module(const std::vector<SecurityPolicy>& policies,
                                 const SocSpec& spec);

// Wrapper module for one IP: instantiates the inner module by identifier,
// forwards every port, and interposes the policies' logic on overridden
// ports.  Policy references must name inner ports (or clock/reset);
// anything else raises UnresolvableSignalError.  Zero policies produce a
// pure pass-through wrapper.
RtlArtifact build_ip_wrapper(const IpBlock& ip,
                             const std::vector<SecurityPolicy>& policies,
                             const std::vector<RtlPort>& inner_ports);

// Fallback inner-port list for when no assertion module header names the
// real ports: predicate reads become inputs, override targets outputs,
// widths taken from adjacent sized literals.  Clock-like reads are omitted
// because build_ip_wrapper already turns them into wrapper-only inputs.
std::vector<RtlPort> derive_inner_ports(
    const IpBlock& ip, const std::vector<SecurityPolicy>& policies);

// Self-check with an internal Verilog-subset parser: balanced module and
// begin/end structure, every referenced identifier declared, and no
// initial blocks, delays, or system tasks.  Empty result means pass.
std::vector<RtlFinding> validate_rtl(const RtlArtifact& artifact);

}  // namespace socsec

#endif  // SOCSEC_CODEGEN_HPP_
