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

#include "socsec/survey.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "socsec/errors.hpp"
#include "socsec/text_util.hpp"

namespace socsec {
namespace {

bool is_count(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c);
  });
}

// Validates one answer against its parser kind; throws AnswerParseError.
void check_answer(const SurveyQuestion& q, const std::string& answer) {
  const std::string a = trim(answer);
  if (a.empty()) {
    if (q.parser.rfind("optional_", 0) == 0) return;
    throw AnswerParseError("empty answer for question \"" + q.id + "\"");
  }
  try {
    if (q.parser == "count") {
      if (!is_count(a))
        throw AnswerParseError("expected a decimal count");
    } else if (q.parser == "hex_address") {
      parse_hex32(a);
    } else if (q.parser == "address_range" || q.parser == "optional_address_range") {
      parse_address_range(a);
    } else if (q.parser == "signal_list") {
      bool any = false;
      for (const auto& piece : split(a, ','))
        if (!trim(piece).empty() && trim(piece) != "...") any = true;
      if (!any) throw AnswerParseError("expected a comma-separated signal list");
    }
    // "string" / "optional_string": any non-empty text is fine.
  } catch (const AddressError& e) {
    throw AnswerParseError("question \"" + q.id + "\": " + e.what());
  } catch (const AnswerParseError& e) {
    throw AnswerParseError("question \"" + q.id + "\": " + e.what());
  }
}

std::string expand_id(const std::string& pattern, std::uint32_t i) {
  std::string out = pattern;
  std::size_t pos = out.find("<i>");
  if (pos != std::string::npos) out.replace(pos, 3, std::to_string(i));
  return out;
}

std::string expand_prompt(const std::string& pattern, std::uint32_t i) {
  std::string out = pattern;
  std::size_t pos;
  while ((pos = out.find("<i>")) != std::string::npos)
    out.replace(pos, 3, std::to_string(i));
  return out;
}

}  // namespace

SurveyTemplate SurveyTemplate::load(const std::string& path) {
  SurveyTemplate tmpl;
  std::string content = read_file(path);
  std::size_t line_no = 0;
  for (const std::string& line : split(content, '\n')) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() < 4)
      throw SchemaError("survey template line " + std::to_string(line_no) +
                        ": expected 4 tab-separated columns");
    SurveyQuestion q;
    q.id = trim(cols[0]);
    q.prompt = trim(cols[1]);
    q.parser = trim(cols[2]);
    q.required = equals_ci(trim(cols[3]), "yes");
    tmpl.questions_.push_back(std::move(q));
  }
  if (tmpl.questions_.empty())
    throw SchemaError("survey template \"" + path + "\" has no questions");
  return tmpl;
}

std::vector<SurveyQuestion> SurveyTemplate::expand(std::uint32_t num_masters,
                                                   std::uint32_t num_slaves) const {
  std::vector<SurveyQuestion> out;
  std::vector<SurveyQuestion> master_group, slave_group;
  for (const auto& q : questions_) {
    if (q.id.rfind("master<i>.", 0) == 0) {
      master_group.push_back(q);
    } else if (q.id.rfind("slave<i>.", 0) == 0) {
      slave_group.push_back(q);
    } else {
      out.push_back(q);
    }
  }
  for (std::uint32_t i = 1; i <= num_masters; ++i)
    for (const auto& q : master_group)
      out.push_back({expand_id(q.id, i), expand_prompt(q.prompt, i), q.parser,
                     q.required});
  for (std::uint32_t i = 1; i <= num_slaves; ++i)
    for (const auto& q : slave_group)
      out.push_back({expand_id(q.id, i), expand_prompt(q.prompt, i), q.parser,
                     q.required});
  return out;
}

namespace {

class AnswerMap {
 public:
  explicit AnswerMap(const SurveyAnswers& answers) {
    for (const auto& [id, value] : answers) map_.emplace(id, value);
  }

  std::string require(const SurveyQuestion& q) const {
    auto it = map_.find(q.id);
    if (it == map_.end() || trim(it->second).empty()) {
      if (!q.required && q.parser.rfind("optional_", 0) == 0) return "";
      if (it == map_.end())
        throw MissingAnswerError("no answer for required question \"" + q.id + "\"");
    }
    check_answer(q, it->second);
    return trim(it->second);
  }

 private:
  std::map<std::string, std::string> map_;
};

SocSpec assemble(const SurveyTemplate& tmpl, const AnswerMap& answers,
                 std::uint32_t num_masters, std::uint32_t num_slaves) {
  std::vector<SurveyQuestion> questions = tmpl.expand(num_masters, num_slaves);
  std::map<std::string, std::string> values;
  for (const auto& q : questions) values[q.id] = answers.require(q);

  SocSpec spec;
  spec.name = values["soc.name"];
  spec.type = values["soc.type"];
  spec.usage = values["soc.usage"];
  spec.bus_protocol = values["soc.bus"];
  spec.num_masters = num_masters;
  spec.num_slaves = num_slaves;
  spec.bus_interface.interface_name = values["bus.interface_name"];
  spec.bus_interface.num_ports =
      static_cast<std::uint32_t>(std::stoul(values["bus.num_ports"]));
  for (const auto& piece : split(values["bus.signals"], ',')) {
    std::string name = trim(piece);
    if (!name.empty() && name != "...") spec.bus_interface.signal_names.push_back(name);
  }

  auto build_ip = [&](IpRole role, const std::string& prefix) {
    IpBlock ip;
    ip.role = role;
    ip.name = values[prefix + ".name"];
    std::string abbrev = values[prefix + ".abbreviation"];
    if (!abbrev.empty()) ip.abbreviation = abbrev;
    ip.description = values[prefix + ".description"];
    ip.operation = values[prefix + ".operation"];
    ip.address_range = parse_address_range(values[prefix + ".address_range"]);
    ip.base_address = parse_hex32(values[prefix + ".base_address"]);
    std::string prot = values[prefix + ".protected_range"];
    if (!prot.empty()) ip.protected_range = parse_address_range(prot);
    return ip;
  };
  for (std::uint32_t i = 1; i <= num_masters; ++i)
    spec.ips.push_back(build_ip(IpRole::master, "master" + std::to_string(i)));
  for (std::uint32_t i = 1; i <= num_slaves; ++i)
    spec.ips.push_back(build_ip(IpRole::slave, "slave" + std::to_string(i)));

  validate_spec(spec);
  return spec;
}

}  // namespace

SocSpec survey_to_spec(const SurveyAnswers& answers, const SurveyTemplate& tmpl) {
  AnswerMap map(answers);
  SurveyQuestion masters_q{"masters.count", "", "count", true};
  SurveyQuestion slaves_q{"slaves.count", "", "count", true};
  std::uint32_t num_masters =
      static_cast<std::uint32_t>(std::stoul(map.require(masters_q)));
  std::uint32_t num_slaves =
      static_cast<std::uint32_t>(std::stoul(map.require(slaves_q)));
  return assemble(tmpl, map, num_masters, num_slaves);
}

SocSpec run_survey(std::istream& in, std::ostream& out, const SurveyTemplate& tmpl) {
  SurveyAnswers answers;
  auto ask = [&](const SurveyQuestion& q) -> std::string {
    for (int attempt = 0; attempt < 3; ++attempt) {
      out << q.prompt << " ";
      out.flush();
      std::string line;
      if (!std::getline(in, line))
        throw MissingAnswerError("input ended at question \"" + q.id + "\"");
      try {
        check_answer(q, line);
        return trim(line);
      } catch (const AnswerParseError& e) {
        if (attempt == 2) throw;
        out << "  ! " << e.what() << "\n";
      }
    }
    throw MissingAnswerError("unreachable");
  };

  std::uint32_t num_masters = 0, num_slaves = 0;
  for (const auto& q : tmpl.questions()) {
    if (q.id.rfind("master<i>.", 0) == 0 || q.id.rfind("slave<i>.", 0) == 0)
      continue;
    std::string a = ask(q);
    answers.emplace_back(q.id, a);
    if (q.id == "masters.count") num_masters = static_cast<std::uint32_t>(std::stoul(a));
    if (q.id == "slaves.count") num_slaves = static_cast<std::uint32_t>(std::stoul(a));
  }
  for (const auto& q : tmpl.expand(num_masters, num_slaves)) {
    if (std::any_of(answers.begin(), answers.end(),
                    [&](const auto& kv) { return kv.first == q.id; }))
      continue;
    answers.emplace_back(q.id, ask(q));
  }
  return survey_to_spec(answers, tmpl);
}

SurveyAnswers load_answers_file(const std::string& path) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError("invalid answers file: " + std::string(e.what()));
  }
  if (!doc.is_object())
    throw SchemaError("answers file must be a JSON object of id: answer");
  SurveyAnswers out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it->is_string())
      throw SchemaError("answer for \"" + it.key() + "\" must be a string");
    out.emplace_back(it.key(), it->get<std::string>());
  }
  return out;
}

}  // namespace socsec
