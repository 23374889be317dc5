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

#include "socsec/cwe_db.hpp"

#include <cctype>

#include "socsec/errors.hpp"
#include "socsec/text_util.hpp"

namespace socsec {
namespace {

constexpr const char* kHeader = "CWE_ID\tDESC\tBUS\tIP\tSYNC\tTYPE\tMISC\tPROVENANCE";

std::string misc_to_string(const CweMisc& misc) {
  std::vector<std::string> groups;
  if (!misc.ip_name.empty()) groups.push_back("ip_name=" + join(misc.ip_name, "|"));
  if (!misc.ip_type.empty()) groups.push_back("ip_type=" + join(misc.ip_type, "|"));
  for (const auto& [k, v] : misc.other) groups.push_back(k + "=" + v);
  return join(groups, ";");
}

CweMisc misc_from_string(std::string_view raw, std::size_t row) {
  CweMisc misc;
  std::string t = trim(raw);
  if (t.empty()) return misc;
  for (const std::string& group : split(t, ';')) {
    std::string g = trim(group);
    if (g.empty()) continue;
    std::size_t eq = g.find('=');
    if (eq == std::string::npos)
      throw SchemaError("row " + std::to_string(row) +
                        ": MISC group \"" + g + "\" has no '='");
    std::string key = trim(g.substr(0, eq));
    std::string value = trim(g.substr(eq + 1));
    if (key == "ip_name" || key == "ip_type") {
      auto& list = key == "ip_name" ? misc.ip_name : misc.ip_type;
      for (const std::string& v : split(value, '|')) {
        std::string item = trim(v);
        if (!item.empty()) list.push_back(item);
      }
    } else {
      misc.other.emplace_back(key, value);
    }
  }
  return misc;
}

}  // namespace

std::string to_string(YesNo v) { return v == YesNo::yes ? "yes" : "no"; }

std::string to_string(SyncClass v) {
  switch (v) {
    case SyncClass::synchronous: return "synchronous";
    case SyncClass::asynchronous: return "asynchronous";
    case SyncClass::not_applicable: return "not_applicable";
  }
  return "not_applicable";
}

std::string to_string(ViolationType v) {
  switch (v) {
    case ViolationType::access_control: return "access_control";
    case ViolationType::information_flow: return "information_flow";
    case ViolationType::liveness: return "liveness";
    case ViolationType::toctou: return "toctou";
    case ViolationType::inadequate_error_handling: return "inadequate_error_handling";
    case ViolationType::not_applicable: return "not_applicable";
  }
  return "not_applicable";
}

YesNo yes_no_from_string(std::string_view s) {
  if (equals_ci(s, "yes")) return YesNo::yes;
  if (equals_ci(s, "no")) return YesNo::no;
  throw SchemaError("expected yes/no, got \"" + std::string(s) + "\"");
}

SyncClass sync_class_from_string(std::string_view s) {
  if (equals_ci(s, "synchronous")) return SyncClass::synchronous;
  if (equals_ci(s, "asynchronous")) return SyncClass::asynchronous;
  if (equals_ci(s, "not_applicable") || equals_ci(s, "n/a"))
    return SyncClass::not_applicable;
  throw SchemaError("unknown SYNC value \"" + std::string(s) + "\"");
}

ViolationType violation_type_from_string(std::string_view s) {
  if (equals_ci(s, "access_control")) return ViolationType::access_control;
  if (equals_ci(s, "information_flow")) return ViolationType::information_flow;
  if (equals_ci(s, "liveness")) return ViolationType::liveness;
  if (equals_ci(s, "toctou")) return ViolationType::toctou;
  if (equals_ci(s, "inadequate_error_handling"))
    return ViolationType::inadequate_error_handling;
  if (equals_ci(s, "not_applicable") || equals_ci(s, "n/a"))
    return ViolationType::not_applicable;
  throw SchemaError("unknown TYPE value \"" + std::string(s) + "\"");
}

std::string canonical_cwe_id(std::string_view raw) {
  // Accept any text whose first digit run is the number; strip leading zeros.
  std::size_t i = 0;
  while (i < raw.size() && !std::isdigit(static_cast<unsigned char>(raw[i]))) ++i;
  std::size_t j = i;
  while (j < raw.size() && std::isdigit(static_cast<unsigned char>(raw[j]))) ++j;
  if (i == j) return "";
  std::string_view digits = raw.substr(i, j - i);
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return "CWE-" + std::string(digits);
}

Db Db::parse(std::string_view text) {
  Db db;
  std::vector<std::string> lines = split(text, '\n');
  bool header_seen = false;
  for (std::size_t idx = 0; idx < lines.size(); ++idx) {
    std::size_t row = idx + 1;
    std::string line = lines[idx];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    if (!header_seen) {
      if (trim(line) != kHeader)
        throw SchemaError("row " + std::to_string(row) +
                          ": expected header \"" + kHeader + "\"");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 8)
      throw SchemaError("row " + std::to_string(row) + ": expected 8 columns, got " +
                        std::to_string(cols.size()));
    CweEntry e;
    e.cwe_id = canonical_cwe_id(cols[0]);
    if (e.cwe_id.empty())
      throw SchemaError("row " + std::to_string(row) + ": bad CWE_ID \"" +
                        cols[0] + "\"");
    e.description = trim(cols[1]);
    try {
      e.bus = yes_no_from_string(trim(cols[2]));
      e.ip = yes_no_from_string(trim(cols[3]));
      e.sync = sync_class_from_string(trim(cols[4]));
      e.violation_type = violation_type_from_string(trim(cols[5]));
    } catch (const SchemaError& err) {
      throw SchemaError("row " + std::to_string(row) + ": " + err.what());
    }
    e.misc = misc_from_string(cols[6], row);
    e.provenance = trim(cols[7]);
    if (e.provenance.empty())
      throw SchemaError("row " + std::to_string(row) + ": empty PROVENANCE");
    if (db.lookup(e.cwe_id))
      throw SchemaError("row " + std::to_string(row) + ": duplicate id " + e.cwe_id);
    db.entries_.push_back(std::move(e));
  }
  if (!header_seen) throw SchemaError("database has no header row");
  return db;
}

Db Db::load(const std::string& path) { return parse(read_file(path)); }

std::string Db::serialize() const {
  std::string out = std::string(kHeader) + "\n";
  for (const auto& e : entries_) {
    out += e.cwe_id;
    out += '\t';
    out += e.description;
    out += '\t';
    out += to_string(e.bus);
    out += '\t';
    out += to_string(e.ip);
    out += '\t';
    out += to_string(e.sync);
    out += '\t';
    out += to_string(e.violation_type);
    out += '\t';
    out += misc_to_string(e.misc);
    out += '\t';
    out += e.provenance;
    out += '\n';
  }
  return out;
}

void Db::save(const std::string& path) const { write_file(path, serialize()); }

const CweEntry* Db::lookup(std::string_view cwe_id) const {
  std::string canon = canonical_cwe_id(cwe_id);
  if (canon.empty()) return nullptr;
  for (const auto& e : entries_)
    if (e.cwe_id == canon) return &e;
  return nullptr;
}

void Db::append(CweEntry entry) {
  entry.cwe_id = canonical_cwe_id(entry.cwe_id);
  if (entry.cwe_id.empty()) throw SchemaError("cannot append entry with empty id");
  if (lookup(entry.cwe_id))
    throw SchemaError("duplicate id " + entry.cwe_id + " on append");
  entries_.push_back(std::move(entry));
}

}  // namespace socsec
