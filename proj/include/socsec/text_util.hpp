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

#ifndef SOCSEC_TEXT_UTIL_HPP_
#define SOCSEC_TEXT_UTIL_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace socsec {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);

// Splits on a single-character separator; does not trim the pieces.
std::vector<std::string> split(std::string_view s, char sep);

// Collapses every run of whitespace to one space and trims the ends.
std::string collapse_ws(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with_ci(std::string_view s, std::string_view prefix);
bool equals_ci(std::string_view a, std::string_view b);

// FNV-1a over the raw bytes, rendered as 16 lowercase hex digits.  Used for
// query digests, mock fixture names and checkpoint chaining; stability of
// the output across runs and platforms is part of the contract.
std::uint64_t fnv1a64(std::string_view s);
std::string fnv1a64_hex(std::string_view s);

// True for [A-Za-z0-9_$], the identifier alphabet shared by the Verilog
// subset and the assertion grammar.
bool is_ident_char(char c);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace socsec

#endif  // SOCSEC_TEXT_UTIL_HPP_
