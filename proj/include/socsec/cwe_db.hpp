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
// Curated database of hardware-relevant CWE entries.  The on-disk format is
// UTF-8 TSV with header CWE_ID, DESC, BUS, IP, SYNC, TYPE, MISC, PROVENANCE.
// MISC serializes as "key=v1|v2;key2=v3"; '#' lines are comments.

#ifndef SOCSEC_CWE_DB_HPP_
#define SOCSEC_CWE_DB_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace socsec {

enum class YesNo { no, yes };

// Whether the weakness manifests on a clock-synchronous path.
enum class SyncClass { synchronous, asynchronous, not_applicable };

enum class ViolationType {
  access_control,
  information_flow,
  liveness,
  toctou,
  inadequate_error_handling,
  not_applicable,
};

std::string to_string(YesNo v);
std::string to_string(SyncClass v);
std::string to_string(ViolationType v);
YesNo yes_no_from_string(std::string_view s);
SyncClass sync_class_from_string(std::string_view s);
ViolationType violation_type_from_string(std::string_view s);

// Normalizes "cwe-0284", "CWE 284", "284" to "CWE-284".  Returns empty when
// the input contains no usable number.
std::string canonical_cwe_id(std::string_view raw);

// Structured MISC column: IP-matching hints plus free-form extras.
struct CweMisc {
  std::vector<std::string> ip_name;  // spec IP names this entry targets
  std::vector<std::string> ip_type;  // spec OPERATION values this entry targets
  std::vector<std::pair<std::string, std::string>> other;

  bool empty() const { return ip_name.empty() && ip_type.empty() && other.empty(); }
  bool operator==(const CweMisc&) const = default;
};

struct CweEntry {
  std::string cwe_id;  // canonical "CWE-<digits>"
  std::string description;
  YesNo bus = YesNo::no;
  YesNo ip = YesNo::no;
  SyncClass sync = SyncClass::not_applicable;
  ViolationType violation_type = ViolationType::not_applicable;
  CweMisc misc;
  std::string provenance = "seed";  // seed | editorial | llm_confirmed

  bool operator==(const CweEntry&) const = default;
};

class Db {
 public:
  // Throws SchemaError with the 1-based row number for malformed rows,
  // duplicate ids, bad enums, or a wrong header.
  static Db load(const std::string& path);
  static Db parse(std::string_view text);

  void save(const std::string& path) const;
  std::string serialize() const;

  // Case-insensitive id lookup after canonicalization; nullptr when absent.
  const CweEntry* lookup(std::string_view cwe_id) const;

  // Appends a new entry; throws SchemaError on duplicate id or empty
  // canonical id.  The entry's id is canonicalized in place.
  void append(CweEntry entry);

  const std::vector<CweEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool operator==(const Db&) const = default;

 private:
  std::vector<CweEntry> entries_;
};

}  // namespace socsec

#endif  // SOCSEC_CWE_DB_HPP_
