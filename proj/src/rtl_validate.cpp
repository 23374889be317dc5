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
// Internal Verilog-subset validator for generated artifacts: structural
// balance, declared-before-use, and synthesizable-subset conformance.

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "socsec/codegen.hpp"
#include "socsec/text_util.hpp"

namespace socsec {
namespace {

enum class TokKind { ident, number, punct };

struct Tok {
  TokKind kind;
  std::string text;
  std::size_t line;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "module", "endmodule", "input",  "output",     "inout",  "reg",
      "wire",   "integer",   "localparam", "assign", "always", "begin",
      "end",    "if",        "else",   "posedge",    "negedge", "or",
      "case",   "endcase",   "default", "initial",   "for",    "while",
      "generate", "endgenerate", "genvar", "parameter"};
  return kw;
}

// Comment-stripped tokenization; strings and delay characters surface as
// findings instead of tokens.
std::vector<Tok> tokenize(const std::string& text,
                          std::vector<RtlFinding>& findings) {
  std::vector<Tok> toks;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
      ++line;
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      std::size_t end = text.find("*/", i + 2);
      for (std::size_t k = i; k < end && k < text.size(); ++k)
        if (text[k] == '\n') ++line;
      i = end == std::string::npos ? text.size() : end + 1;
      continue;
    }
    if (c == '"') {
      findings.push_back({"subset_violation",
                          "string literal on line " + std::to_string(line)});
      std::size_t end = text.find('"', i + 1);
      i = end == std::string::npos ? text.size() : end;
      continue;
    }
    if (c == '#') {
      findings.push_back({"subset_violation",
                          "delay control (#) on line " + std::to_string(line)});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) ||
                                 text[j] == '_'))
        ++j;
      if (j < text.size() && text[j] == '\'') {
        ++j;
        if (j < text.size()) ++j;  // base letter
        while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                   text[j] == '_'))
          ++j;
      }
      toks.push_back({TokKind::number, text.substr(i, j - i), line});
      i = j - 1;
      continue;
    }
    if (c == '\'') {  // unsized based literal like 'b0
      std::size_t j = i + 1;
      if (j < text.size()) ++j;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                 text[j] == '_'))
        ++j;
      toks.push_back({TokKind::number, text.substr(i, j - i), line});
      i = j - 1;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      std::string word = text.substr(i, j - i);
      if (word[0] == '$') {
        findings.push_back({"subset_violation", "system task/function " + word +
                                                   " on line " +
                                                   std::to_string(line)});
      } else {
        toks.push_back({TokKind::ident, word, line});
      }
      i = j - 1;
      continue;
    }
    toks.push_back({TokKind::punct, std::string(1, c), line});
  }
  return toks;
}

bool is_kw(const Tok& t, const char* word) {
  return t.kind == TokKind::ident && t.text == word;
}

}  // namespace

std::vector<RtlFinding> validate_rtl(const RtlArtifact& artifact) {
  std::vector<RtlFinding> findings;
  std::vector<Tok> toks = tokenize(artifact.body, findings);

  // Structural balance: one module/endmodule, begin/end never negative.
  int modules = 0, endmodules = 0, depth = 0;
  for (const Tok& t : toks) {
    if (is_kw(t, "module")) ++modules;
    else if (is_kw(t, "endmodule")) ++endmodules;
    else if (is_kw(t, "begin")) ++depth;
    else if (is_kw(t, "end")) {
      if (--depth < 0) {
        findings.push_back({"unbalanced_block",
                            "end without begin on line " + std::to_string(t.line)});
        depth = 0;
      }
    } else if (is_kw(t, "initial")) {
      findings.push_back({"subset_violation",
                          "initial block on line " + std::to_string(t.line)});
    }
  }
  if (depth != 0)
    findings.push_back({"unbalanced_block",
                        std::to_string(depth) + " begin(s) left open"});
  if (modules != 1 || endmodules != 1)
    findings.push_back({"unbalanced_block",
                        "expected exactly one module/endmodule pair"});

  // Declarations: port names from any direction/net declaration list,
  // localparam names, plus instantiation head identifiers.
  std::set<std::string> declared;
  std::set<std::string> skipped;  // instantiation/module names, .port refs
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Tok& t = toks[i];
    if (t.kind != TokKind::ident) continue;
    if (t.text == "module" && i + 1 < toks.size()) {
      skipped.insert(toks[i + 1].text);
      continue;
    }
    if (t.text == "input" || t.text == "output" || t.text == "inout" ||
        t.text == "reg" || t.text == "wire" || t.text == "integer") {
      for (std::size_t j = i + 1; j < toks.size(); ++j) {
        const Tok& u = toks[j];
        if (u.kind == TokKind::punct &&
            (u.text == ";" || u.text == ")" || u.text == "=")) break;
        if (u.kind == TokKind::ident && u.text == "input") break;
        if (u.kind == TokKind::ident && u.text == "output") break;
        if (u.kind == TokKind::ident && u.text == "inout") break;
        if (u.kind == TokKind::ident && !keywords().count(u.text))
          declared.insert(u.text);
        if (u.kind == TokKind::punct && u.text == ",") {
          // header lists stop a declaration at the next direction keyword
          if (j + 1 < toks.size() &&
              (is_kw(toks[j + 1], "input") || is_kw(toks[j + 1], "output") ||
               is_kw(toks[j + 1], "inout")))
            break;
        }
      }
      continue;
    }
    if (t.text == "localparam" || t.text == "parameter") {
      for (std::size_t j = i + 1; j < toks.size(); ++j) {
        if (toks[j].kind == TokKind::punct && toks[j].text == "=") break;
        if (toks[j].kind == TokKind::punct && toks[j].text == ";") break;
        if (toks[j].kind == TokKind::ident && !keywords().count(toks[j].text))
          declared.insert(toks[j].text);
      }
      continue;
    }
  }

  // Uses: identifiers outside declarations, .port references, and
  // instantiation heads (ident ident pairs).
  std::map<std::string, std::size_t> undeclared;  // name -> first line
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Tok& t = toks[i];
    if (t.kind != TokKind::ident || keywords().count(t.text)) continue;
    if (i > 0 && toks[i - 1].kind == TokKind::punct && toks[i - 1].text == ".")
      continue;  // named port connection
    if (i > 0 && toks[i - 1].kind == TokKind::ident &&
        !keywords().count(toks[i - 1].text))
      continue;  // instance name after module reference
    if (i + 1 < toks.size() && toks[i + 1].kind == TokKind::ident &&
        !keywords().count(toks[i + 1].text))
      continue;  // module reference before instance name
    if (skipped.count(t.text) || declared.count(t.text)) continue;
    undeclared.emplace(t.text, t.line);
  }
  for (const auto& [name, line] : undeclared)
    findings.push_back({"undeclared_identifier",
                        name + " referenced on line " + std::to_string(line) +
                            " is never declared"});
  return findings;
}

}  // namespace socsec
