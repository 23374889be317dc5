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

#include "socsec/soc_spec.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include <json.hpp>

#include "socsec/errors.hpp"
#include "socsec/text_util.hpp"

namespace socsec {
namespace {

using Json = nlohmann::ordered_json;

std::string require_string(const Json& obj, const std::string& key,
                           const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw SchemaError("missing key \"" + key + "\" in " + where);
  if (!it->is_string())
    throw SchemaError("key \"" + key + "\" in " + where +
                      " must be a string value");
  return it->get<std::string>();
}

std::uint32_t require_count(const Json& obj, const std::string& key,
                            const std::string& where) {
  std::string raw = require_string(obj, key, where);
  std::string t = trim(raw);
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) {
        return std::isdigit(c);
      })) {
    throw SchemaError("key \"" + key + "\" in " + where +
                      " must be a decimal count, got \"" + raw + "\"");
  }
  unsigned long v = std::stoul(t);
  if (v > 0xFFFFFFFFul)
    throw SchemaError("key \"" + key + "\" in " + where + " is out of range");
  return static_cast<std::uint32_t>(v);
}

bool known_soc_key(const std::string& k) {
  return k == "NAME" || k == "TYPE" || k == "USAGE" || k == "BUS" ||
         k == "NO_OF_MASTERS" || k == "NO_OF_SLAVES";
}

bool known_ip_key(const std::string& k) {
  return k == "NAME" || k == "ABBREVIATION" || k == "TYPE" ||
         k == "OPERATION" || k == "ADDRESS_RANGE" || k == "BASE_ADDRESS" ||
         k == "PROTECTED_ADDRESS_RANGE";
}

bool known_bus_key(const std::string& k) {
  return k == "INTERFACE_NAME" || k == "NO_OF_PORTS" || k == "SIGNAL_NAMES";
}

void collect_extra(const Json& obj, bool (*known)(const std::string&),
                   const std::string& where,
                   std::vector<std::pair<std::string, std::string>>* out) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (known(it.key())) continue;
    if (!it->is_string())
      throw SchemaError("unknown key \"" + it.key() + "\" in " + where +
                        " must hold a string value");
    out->emplace_back(it.key(), it->get<std::string>());
  }
}

// Section names look like MASTER_3 / SLAVE_12.
std::optional<std::pair<IpRole, std::uint32_t>> parse_ip_section_name(
    const std::string& key) {
  std::string_view rest;
  IpRole role;
  if (key.rfind("MASTER_", 0) == 0) {
    role = IpRole::master;
    rest = std::string_view(key).substr(7);
  } else if (key.rfind("SLAVE_", 0) == 0) {
    role = IpRole::slave;
    rest = std::string_view(key).substr(6);
  } else {
    return std::nullopt;
  }
  if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](unsigned char c) {
        return std::isdigit(c);
      }))
    return std::nullopt;
  return std::make_pair(role, static_cast<std::uint32_t>(std::stoul(std::string(rest))));
}

IpBlock parse_ip_block(const Json& obj, IpRole role, const std::string& where) {
  IpBlock ip;
  ip.role = role;
  ip.name = require_string(obj, "NAME", where);
  if (obj.contains("ABBREVIATION"))
    ip.abbreviation = require_string(obj, "ABBREVIATION", where);
  ip.description = require_string(obj, "TYPE", where);
  ip.operation = require_string(obj, "OPERATION", where);

  try {
    ip.address_range = parse_address_range(require_string(obj, "ADDRESS_RANGE", where));
    ip.base_address = parse_hex32(require_string(obj, "BASE_ADDRESS", where));
    if (obj.contains("PROTECTED_ADDRESS_RANGE")) {
      ip.protected_range = parse_address_range(
          require_string(obj, "PROTECTED_ADDRESS_RANGE", where));
    }
  } catch (const AddressError& e) {
    throw AddressError(std::string(e.what()) + " (IP " + ip.name + ")");
  }

  if (!ip.address_range.contains(ip.base_address))
    throw AddressError("BASE_ADDRESS " + format_hex32(ip.base_address) +
                       " outside ADDRESS_RANGE (IP " + ip.name + ")");
  if (ip.protected_range && !ip.address_range.contains(*ip.protected_range))
    throw AddressError("PROTECTED_ADDRESS_RANGE not contained in ADDRESS_RANGE (IP " +
                       ip.name + ")");

  collect_extra(obj, known_ip_key, where, &ip.extra);
  return ip;
}

std::vector<std::string> parse_signal_names(const std::string& raw) {
  std::vector<std::string> out;
  for (const std::string& piece : split(raw, ',')) {
    std::string name = trim(piece);
    if (name.empty()) continue;
    // Documents copied from datasheets sometimes end the list with a
    // literal ellipsis; drop it rather than treating it as a signal.
    if (name == "...") continue;
    out.push_back(name);
  }
  return out;
}

}  // namespace

std::uint32_t parse_hex32(std::string_view text) {
  std::string t = trim(text);
  if (t.size() >= 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X'))
    t = t.substr(2);
  if (t.empty()) throw AddressError("empty address");
  if (t.size() > 8)
    throw AddressError("address \"" + t + "\" wider than 32 bits");
  std::uint32_t value = 0;
  for (char c : t) {
    int digit;
    if (c >= '0' && c <= '9') digit = c - '0';
    else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
    else throw AddressError("invalid hex digit '" + std::string(1, c) +
                            "' in address \"" + t + "\"");
    value = (value << 4) | static_cast<std::uint32_t>(digit);
  }
  return value;
}

AddressRange parse_address_range(std::string_view text) {
  std::string t = trim(text);
  std::size_t sep = t.find_first_of("-:");
  if (sep == std::string::npos)
    throw AddressError("address range \"" + t + "\" has no '-' or ':' separator");
  AddressRange r;
  r.low = parse_hex32(t.substr(0, sep));
  r.high = parse_hex32(t.substr(sep + 1));
  if (r.low > r.high)
    throw AddressError("address range \"" + t + "\" is empty (low > high)");
  return r;
}

std::string format_hex32(std::uint32_t value) {
  static const char* digits = "0123456789ABCDEF";
  std::string out(8, '0');
  for (int i = 7; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::string IpBlock::ident() const {
  if (abbreviation && !abbreviation->empty()) return *abbreviation;
  std::string out;
  for (char c : name)
    out.push_back(is_ident_char(c) && c != '$' ? c : '_');
  if (!out.empty() && std::isdigit(static_cast<unsigned char>(out[0])))
    out.insert(out.begin(), '_');
  return out;
}

std::vector<const IpBlock*> SocSpec::masters() const {
  std::vector<const IpBlock*> out;
  for (const auto& ip : ips)
    if (ip.role == IpRole::master) out.push_back(&ip);
  return out;
}

std::vector<const IpBlock*> SocSpec::slaves() const {
  std::vector<const IpBlock*> out;
  for (const auto& ip : ips)
    if (ip.role == IpRole::slave) out.push_back(&ip);
  return out;
}

const IpBlock* SocSpec::find_ip(std::string_view name_or_abbrev) const {
  for (const auto& ip : ips) {
    if (equals_ci(ip.name, name_or_abbrev)) return &ip;
    if (ip.abbreviation && equals_ci(*ip.abbreviation, name_or_abbrev))
      return &ip;
  }
  return nullptr;
}

const IpBlock* SocSpec::find_ip_loose(std::string_view key) const {
  if (const IpBlock* ip = find_ip(key)) return ip;
  for (const auto& ip : ips)
    if (equals_ci(ip.operation, key)) return &ip;
  return nullptr;
}

SocSpec parse_spec(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports a byte offset; recover the line/column for the
    // position-carrying error the callers expect.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    throw SyntaxError(std::string("invalid JSON: ") + e.what(), line, col);
  }
  if (!doc.is_object())
    throw SchemaError("specification document must be a JSON object");

  SocSpec spec;
  auto soc_it = doc.find("SoC");
  if (soc_it == doc.end())
    throw SchemaError("missing key \"SoC\" in specification document");
  const Json& soc = *soc_it;
  if (!soc.is_object()) throw SchemaError("\"SoC\" section must be an object");
  spec.name = require_string(soc, "NAME", "SoC");
  spec.type = require_string(soc, "TYPE", "SoC");
  spec.usage = require_string(soc, "USAGE", "SoC");
  spec.bus_protocol = require_string(soc, "BUS", "SoC");
  spec.num_masters = require_count(soc, "NO_OF_MASTERS", "SoC");
  spec.num_slaves = require_count(soc, "NO_OF_SLAVES", "SoC");
  collect_extra(soc, known_soc_key, "SoC", &spec.extra);

  auto bus_it = doc.find("BUS_INTERFACE");
  if (bus_it == doc.end())
    throw SchemaError("missing key \"BUS_INTERFACE\" in specification document");
  if (!bus_it->is_object())
    throw SchemaError("\"BUS_INTERFACE\" section must be an object");
  spec.bus_interface.interface_name =
      require_string(*bus_it, "INTERFACE_NAME", "BUS_INTERFACE");
  spec.bus_interface.num_ports =
      require_count(*bus_it, "NO_OF_PORTS", "BUS_INTERFACE");
  spec.bus_interface.signal_names =
      parse_signal_names(require_string(*bus_it, "SIGNAL_NAMES", "BUS_INTERFACE"));
  collect_extra(*bus_it, known_bus_key, "BUS_INTERFACE",
                &spec.bus_interface.extra);

  std::map<std::uint32_t, bool> master_seen, slave_seen;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    if (key == "SoC" || key == "BUS_INTERFACE") continue;
    auto section = parse_ip_section_name(key);
    if (!section) {
      if (!it->is_string())
        throw SchemaError("unknown top-level key \"" + key +
                          "\" must hold a string value");
      spec.extra_top.emplace_back(key, it->get<std::string>());
      continue;
    }
    if (!it->is_object())
      throw SchemaError("section \"" + key + "\" must be an object");
    auto& seen = section->first == IpRole::master ? master_seen : slave_seen;
    if (seen.count(section->second))
      throw SchemaError("duplicate section \"" + key + "\"");
    seen[section->second] = true;
    spec.ips.push_back(parse_ip_block(*it, section->first, key));
  }

  auto check_contiguous = [](const std::map<std::uint32_t, bool>& seen,
                             const char* prefix) {
    std::uint32_t expect = 1;
    for (const auto& [idx, _] : seen) {
      if (idx != expect)
        throw SchemaError(std::string(prefix) + " sections must be numbered " +
                          "contiguously from 1; missing index " +
                          std::to_string(expect));
      ++expect;
    }
  };
  check_contiguous(master_seen, "MASTER");
  check_contiguous(slave_seen, "SLAVE");

  validate_spec(spec);
  return spec;
}

SocSpec load_spec_file(const std::string& path) {
  return parse_spec(read_file(path));
}

void validate_spec(const SocSpec& spec) {
  std::size_t masters = spec.masters().size();
  std::size_t slaves = spec.slaves().size();
  if (masters != spec.num_masters)
    throw SchemaError("NO_OF_MASTERS is " + std::to_string(spec.num_masters) +
                      " but " + std::to_string(masters) +
                      " MASTER sections are present");
  if (slaves != spec.num_slaves)
    throw SchemaError("NO_OF_SLAVES is " + std::to_string(spec.num_slaves) +
                      " but " + std::to_string(slaves) +
                      " SLAVE sections are present");
  if (spec.bus_interface.num_ports > 0 && spec.bus_interface.signal_names.empty())
    throw SchemaError("BUS_INTERFACE declares ports but no SIGNAL_NAMES");
  for (const auto& ip : spec.ips) {
    if (ip.name.empty()) throw SchemaError("IP with empty NAME");
    if (!ip.address_range.contains(ip.base_address))
      throw AddressError("BASE_ADDRESS outside ADDRESS_RANGE (IP " + ip.name + ")");
    if (ip.protected_range && !ip.address_range.contains(*ip.protected_range))
      throw AddressError(
          "PROTECTED_ADDRESS_RANGE not contained in ADDRESS_RANGE (IP " +
          ip.name + ")");
  }
}

std::string serialize_spec(const SocSpec& spec) {
  Json doc = Json::object();
  Json soc = Json::object();
  soc["NAME"] = spec.name;
  soc["TYPE"] = spec.type;
  soc["USAGE"] = spec.usage;
  soc["BUS"] = spec.bus_protocol;
  soc["NO_OF_MASTERS"] = std::to_string(spec.num_masters);
  soc["NO_OF_SLAVES"] = std::to_string(spec.num_slaves);
  for (const auto& [k, v] : spec.extra) soc[k] = v;
  doc["SoC"] = std::move(soc);

  Json bus = Json::object();
  bus["INTERFACE_NAME"] = spec.bus_interface.interface_name;
  bus["NO_OF_PORTS"] = std::to_string(spec.bus_interface.num_ports);
  bus["SIGNAL_NAMES"] = join(spec.bus_interface.signal_names, ",");
  for (const auto& [k, v] : spec.bus_interface.extra) bus[k] = v;
  doc["BUS_INTERFACE"] = std::move(bus);

  std::uint32_t master_idx = 0, slave_idx = 0;
  for (const auto& ip : spec.ips) {
    Json obj = Json::object();
    obj["NAME"] = ip.name;
    if (ip.abbreviation) obj["ABBREVIATION"] = *ip.abbreviation;
    obj["TYPE"] = ip.description;
    obj["OPERATION"] = ip.operation;
    obj["ADDRESS_RANGE"] =
        format_hex32(ip.address_range.low) + "-" + format_hex32(ip.address_range.high);
    obj["BASE_ADDRESS"] = format_hex32(ip.base_address);
    if (ip.protected_range)
      obj["PROTECTED_ADDRESS_RANGE"] = format_hex32(ip.protected_range->low) +
                                       ":" + format_hex32(ip.protected_range->high);
    for (const auto& [k, v] : ip.extra) obj[k] = v;
    std::string key = ip.role == IpRole::master
                          ? "MASTER_" + std::to_string(++master_idx)
                          : "SLAVE_" + std::to_string(++slave_idx);
    doc[key] = std::move(obj);
  }
  for (const auto& [k, v] : spec.extra_top) doc[k] = v;
  return doc.dump(4) + "\n";
}

}  // namespace socsec
