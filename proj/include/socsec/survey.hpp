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
// Guided questionnaire that assembles a SocSpec from short answers, for
// users who do not want to hand-write the JSON document.  The question
// list ships as a data file so prompts can be reworded without rebuilding.

#ifndef SOCSEC_SURVEY_HPP_
#define SOCSEC_SURVEY_HPP_

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "socsec/soc_spec.hpp"

namespace socsec {

// One row of the survey template file.  Ids may contain the placeholder
// "<i>", which expands once per master/slave index.
struct SurveyQuestion {
  std::string id;
  std::string prompt;
  std::string parser;  // string | count | hex_address | address_range |
                       // optional_address_range | optional_string | signal_list
  bool required = true;
};

class SurveyTemplate {
 public:
  // Tab-separated file: id, prompt, parser, required(yes|no).  '#' lines
  // are comments.
  static SurveyTemplate load(const std::string& path);

  const std::vector<SurveyQuestion>& questions() const { return questions_; }

  // Expands the per-IP question groups for the given counts, preserving
  // template order: base questions, then all master groups, then slaves.
  std::vector<SurveyQuestion> expand(std::uint32_t num_masters,
                                     std::uint32_t num_slaves) const;

 private:
  std::vector<SurveyQuestion> questions_;
};

using SurveyAnswers = std::vector<std::pair<std::string, std::string>>;

// Builds a validated SocSpec from (question-id, answer) pairs.  Throws
// MissingAnswerError when a required id is absent and AnswerParseError when
// an answer fails its parser; both name the question id.
SocSpec survey_to_spec(const SurveyAnswers& answers, const SurveyTemplate& tmpl);

// Runs the questionnaire over the given streams (interactive use wires
// stdin/stdout; tests wire stringstreams).  Invalid answers are re-asked up
// to two times before the error propagates; EOF raises MissingAnswerError.
SocSpec run_survey(std::istream& in, std::ostream& out, const SurveyTemplate& tmpl);

// Loads answers from a JSON object {id: answer, ...} in file order.
SurveyAnswers load_answers_file(const std::string& path);

}  // namespace socsec

#endif  // SOCSEC_SURVEY_HPP_
