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
// Data model for a bus-based SoC design specification.  The on-disk format
// is a JSON document with an "SoC" section, a "BUS_INTERFACE" section and
// one "MASTER_n" / "SLAVE_n" section per IP block; every scalar value is a
// string.  Addresses are 32-bit unprefixed hex.

#ifndef SOCSEC_SOC_SPEC_HPP_
#define SOCSEC_SOC_SPEC_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace socsec {

// Closed interval of 32-bit bus addresses.
struct AddressRange {
  std::uint32_t low = 0;
  std::uint32_t high = 0;

  bool contains(std::uint32_t addr) const { return addr >= low && addr <= high; }
  bool contains(const AddressRange& other) const {
    return other.low >= low && other.high <= high;
  }
  bool operator==(const AddressRange&) const = default;
};

// Parses "93000000" into 0x93000000.  Throws AddressError for empty input,
// non-hex digits, or values wider than 32 bits.  An optional "0x"/"0X"
// prefix is tolerated.
std::uint32_t parse_hex32(std::string_view text);

// Parses "lo-hi" or "lo:hi" (either separator accepted on input).
AddressRange parse_address_range(std::string_view text);

// Renders zero-padded uppercase hex without a prefix, matching the
// specification file style.
std::string format_hex32(std::uint32_t value);

enum class IpRole { master, slave };

struct IpBlock {
  IpRole role = IpRole::slave;
  std::string name;
  std::optional<std::string> abbreviation;
  std::string description;  // TYPE field of the spec document
  std::string operation;    // OPERATION field (e.g. "Crypto", "Processor")
  std::uint32_t base_address = 0;
  AddressRange address_range;
  std::optional<AddressRange> protected_range;
  // Unknown keys, preserved in document order so serialization round-trips.
  std::vector<std::pair<std::string, std::string>> extra;

  // Identifier-safe short name: the abbreviation when present, otherwise
  // the name with non-identifier characters replaced by underscores.
  std::string ident() const;

  bool operator==(const IpBlock&) const = default;
};

struct BusInterface {
  std::string interface_name;
  std::uint32_t num_ports = 0;
  std::vector<std::string> signal_names;
  std::vector<std::pair<std::string, std::string>> extra;

  bool operator==(const BusInterface&) const = default;
};

struct SocSpec {
  std::string name;
  std::string type;
  std::string usage;
  std::string bus_protocol;
  std::uint32_t num_masters = 0;
  std::uint32_t num_slaves = 0;
  BusInterface bus_interface;
  // IP blocks in document order (masters and slaves interleaved as written).
  std::vector<IpBlock> ips;
  // Unknown keys of the "SoC" section and unknown top-level scalar keys.
  std::vector<std::pair<std::string, std::string>> extra;
  std::vector<std::pair<std::string, std::string>> extra_top;

  std::vector<const IpBlock*> masters() const;
  std::vector<const IpBlock*> slaves() const;

  // Case-insensitive lookup by name or abbreviation; returns nullptr when
  // absent.  find_ip_loose additionally accepts the OPERATION field, which
  // policy texts use as a role-style alias (e.g. slave['Crypto']).
  const IpBlock* find_ip(std::string_view name_or_abbrev) const;
  const IpBlock* find_ip_loose(std::string_view key) const;

  bool operator==(const SocSpec&) const = default;
};

// Parses and validates a specification document.  Throws SyntaxError for
// malformed JSON (with position), SchemaError for missing/duplicate keys or
// count mismatches, AddressError for address violations (naming the IP).
SocSpec parse_spec(std::string_view text);
SocSpec load_spec_file(const std::string& path);

// Deterministic serialization; parse_spec(serialize_spec(s)) == s.
std::string serialize_spec(const SocSpec& spec);

// Re-checks the structural invariants on an in-memory value (used after
// programmatic construction, e.g. from survey answers).
void validate_spec(const SocSpec& spec);

}  // namespace socsec

#endif  // SOCSEC_SOC_SPEC_HPP_
