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
// Stage-by-stage pipeline: design spec -> queries -> CWE candidates ->
// filtered CWEs -> corrected assertions -> security policies -> RTL.
// Every stage writes a JSON checkpoint into out_dir so interrupted runs
// resume without repeating LLM calls.

#ifndef SOCSEC_PIPELINE_HPP_
#define SOCSEC_PIPELINE_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "socsec/cwe_filter.hpp"
#include "socsec/llm_client.hpp"
#include "socsec/sva.hpp"

namespace socsec {

enum class Stage { query, cwe, filter, sva, policy, rtl };

std::string to_string(Stage stage);

// Accepts full names or the single-letter shorthand q,c,f,s,p,r.  The
// resulting list must be a prefix of the full chain; anything else is a
// ConfigError (running filter without cwe cannot work).
std::vector<Stage> parse_stage_list(const std::string& csv);

struct PipelineConfig {
  std::string spec_path;
  std::string db_path;
  std::string out_dir;
  std::string data_dir;  // templates/, stopwords, assumptions, keyword fixes
  bool offline = false;
  std::string mock_dir;       // offline fixture directory
  ProviderConfig provider;    // online mode
  FilterConfig filter;
  std::vector<Stage> stages;  // empty = all
  std::string answers_path;   // batch answers for action prompts
  std::vector<std::string> only_violated;  // restrict policy/rtl to these CWEs

  // Called for assertions the answers file does not cover: receives the CWE
  // id and the suggested default, returns the action to apply.  Unset means
  // take the default.  Prompted actions persist in the policies checkpoint,
  // so resumed runs do not re-ask.
  std::function<std::string(const std::string& cwe, const std::string& suggested)>
      action_prompt;
};

struct StageStatus {
  Stage stage = Stage::query;
  std::string status;  // ran | checkpoint | skipped | failed | not_requested
  std::string detail;
};

struct RunReport {
  std::string config_digest;
  std::vector<StageStatus> stages;
  std::size_t candidate_count = 0;
  std::size_t filtered_count = 0;
  double metric = 0.0;
  std::vector<std::string> assertion_files;  // relative to out_dir
  std::vector<std::string> rtl_files;
  std::string failure_kind;  // empty | config | transport | stage

  bool ok() const { return failure_kind.empty(); }
  std::string to_json() const;
};

// Answers file: {"actions": {"CWE-200": "sig = 0;", "default": "..."}}.
struct Answers {
  std::map<std::string, std::string> actions;
};

Answers load_answers(const std::string& path);

// Built-in fallback when no action is configured: zero the assertion
// module's first output port, Listing-1 style.  Throws MissingAnswerError
// when the module declares no output to zero.
std::string default_action(const AssertionUnit& unit);

// Runs the requested stages in order, reusing valid checkpoints.  The
// report is also written to <out_dir>/report.json.  When `client` is null
// one is built from the config (mock in offline mode, HTTP otherwise).
RunReport run_pipeline(const PipelineConfig& config, LlmClient* client = nullptr);

// Digest over every input that influences pipeline output; checkpoints
// with a different digest are stale.
std::string pipeline_config_digest(const PipelineConfig& config);

}  // namespace socsec

#endif  // SOCSEC_PIPELINE_HPP_
