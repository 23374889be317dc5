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
// Command-line front end.  Exit codes: 0 success, 2 configuration or input
// error, 3 stage failure, 4 LLM transport failure.

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "socsec/codegen.hpp"
#include "socsec/cwe_db.hpp"
#include "socsec/errors.hpp"
#include "socsec/llm_client.hpp"
#include "socsec/pipeline.hpp"
#include "socsec/policy.hpp"
#include "socsec/soc_spec.hpp"
#include "socsec/survey.hpp"
#include "socsec/sva.hpp"
#include "socsec/text_util.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kStageFailure = 3;
constexpr int kTransportFailure = 4;

std::string default_data_dir() {
#ifdef SOCSEC_DEFAULT_DATA_DIR
  return SOCSEC_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

// Interactive action collection: offer the shipped default, validate with
// the policy action parser, re-ask twice before giving up.
std::string prompt_action(const std::string& cwe, const std::string& suggested) {
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::cout << "action for " << cwe;
    if (!suggested.empty()) std::cout << " [" << suggested << "]";
    std::cout << ": " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line))
      throw socsec::MissingAnswerError("input ended while asking for the " +
                                       cwe + " action");
    line = std::string(socsec::trim(line));
    if (line.empty()) {
      if (!suggested.empty()) return suggested;
      std::cout << "an action is required here (no usable default)\n";
      continue;
    }
    try {
      socsec::parse_actions(line);
      return line;
    } catch (const socsec::ActionParseError& e) {
      std::cout << "invalid action: " << e.what() << "\n";
    }
  }
  throw socsec::ActionParseError("no valid action was entered for " + cwe);
}

int finish_run(const socsec::RunReport& report, bool quiet) {
  if (!quiet) {
    for (const socsec::StageStatus& status : report.stages) {
      std::printf("%-7s %s", to_string(status.stage).c_str(),
                  status.status.c_str());
      if (!status.detail.empty()) std::printf("  (%s)", status.detail.c_str());
      std::printf("\n");
    }
    std::printf("candidates %zu, filtered %zu, relevance metric %.4f\n",
                report.candidate_count, report.filtered_count, report.metric);
  }
  if (report.ok()) return kOk;
  return report.failure_kind == "transport" ? kTransportFailure : kStageFailure;
}

// Mock client that records any unanswered query next to the fixture
// directory so the response can be authored offline.
class MockInitClient : public socsec::LlmClient {
 public:
  explicit MockInitClient(std::string dir) : dir_(dir), inner_(std::move(dir)) {}

  std::string send(const socsec::QueryText& query) override {
    try {
      return inner_.send(query);
    } catch (const socsec::ConfigError&) {
      std::string digest = socsec::MockLlmClient::digest_for(query);
      fs::path request = fs::path(dir_) / (digest + ".request.txt");
      socsec::write_file(request.string(),
                         "kind: " + to_string(query.kind) + "\n\n" + query.body);
      throw socsec::ConfigError(
          "no mock response for this " + to_string(query.kind) +
          " query; its text was saved to " + request.string() + " - author " +
          digest + ".txt beside it and re-run");
    }
  }

 private:
  std::string dir_;
  socsec::MockLlmClient inner_;
};

int run_command(socsec::PipelineConfig config, bool mock_init, bool no_prompt,
                bool quiet) {
  fs::create_directories(config.out_dir);
  if (config.answers_path.empty() && !no_prompt && isatty(fileno(stdin)))
    config.action_prompt = prompt_action;
  if (mock_init) {
    fs::create_directories(config.mock_dir);
    MockInitClient client(config.mock_dir);
    return finish_run(socsec::run_pipeline(config, &client), quiet);
  }
  return finish_run(socsec::run_pipeline(config), quiet);
}

int survey_command(const std::string& out_path, const std::string& template_path,
                   const std::string& answers_path) {
  socsec::SurveyTemplate tmpl = socsec::SurveyTemplate::load(template_path);
  socsec::SocSpec spec;
  if (!answers_path.empty()) {
    spec = socsec::survey_to_spec(socsec::load_answers_file(answers_path), tmpl);
  } else {
    spec = socsec::run_survey(std::cin, std::cout, tmpl);
  }
  socsec::write_file(out_path, socsec::serialize_spec(spec));
  std::printf("wrote %s\n", out_path.c_str());
  return kOk;
}

int lint_command(const std::string& file, const std::string& fixes_path) {
  socsec::KeywordFixes fixes = socsec::KeywordFixes::load(fixes_path);
  std::vector<socsec::LintFinding> findings =
      socsec::lint(socsec::read_file(file), fixes);
  for (const socsec::LintFinding& finding : findings) {
    std::printf("%s\t[%zu,%zu)\t%s", finding.rule_id.c_str(),
                finding.span.begin, finding.span.end, finding.message.c_str());
    if (finding.fix) std::printf("\t-> %s", finding.fix->c_str());
    std::printf("\n");
  }
  std::printf("%zu finding(s)\n", findings.size());
  return findings.empty() ? kOk : kStageFailure;
}

int translate_command(const std::string& file, const std::string& action,
                      const std::string& spec_path, const std::string& db_path,
                      const std::string& cwe, const std::string& out_path) {
  socsec::SocSpec spec = socsec::load_spec_file(spec_path);
  socsec::AssertionUnit unit =
      socsec::parse_assertion(socsec::read_file(file));
  socsec::SecurityPolicy policy =
      socsec::assertion_to_policy(unit, action, spec);
  if (!cwe.empty()) policy.source_cwe = cwe;

  const socsec::CweEntry* entry = nullptr;
  socsec::Db db;
  if (!db_path.empty()) {
    db = socsec::Db::load(db_path);
    if (!cwe.empty()) entry = db.lookup(cwe);
  }
  policy = socsec::classify_placement(std::move(policy), entry, spec);

  std::string text = socsec::serialize_policies({policy});
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    socsec::write_file(out_path, text);
    std::printf("wrote %s\n", out_path.c_str());
  }
  return kOk;
}

int gen_rtl_command(const std::string& policies_path,
                    const std::string& spec_path, const std::string& out_dir) {
  socsec::SocSpec spec = socsec::load_spec_file(spec_path);
  std::vector<socsec::SecurityPolicy> policies =
      socsec::parse_policies(socsec::read_file(policies_path));

  std::vector<socsec::SecurityPolicy> bus;
  std::map<std::string, std::vector<socsec::SecurityPolicy>> per_ip;
  for (const socsec::SecurityPolicy& policy : policies) {
    if (!policy.placement)
      throw socsec::SchemaError(
          "policy " + policy.source_cwe.value_or("(unlabeled)") +
          " carries no placement; run translate-sva with --db/--cwe first");
    if (policy.placement->level == socsec::PlacementLevel::bus)
      bus.push_back(policy);
    else
      per_ip[policy.placement->ip_name].push_back(policy);
  }

  std::vector<socsec::RtlArtifact> artifacts;
  artifacts.push_back(socsec::build_central_module(bus, spec));
  for (const auto& [ip_name, group] : per_ip) {
    const socsec::IpBlock* ip = spec.find_ip_loose(ip_name);
    if (ip == nullptr)
      throw socsec::UnresolvableSignalError("policies target unknown IP " +
                                            ip_name);
    artifacts.push_back(socsec::build_ip_wrapper(
        *ip, group, socsec::derive_inner_ports(*ip, group)));
  }

  fs::create_directories(out_dir);
  for (const socsec::RtlArtifact& artifact : artifacts) {
    std::vector<socsec::RtlFinding> findings = socsec::validate_rtl(artifact);
    if (!findings.empty())
      throw socsec::Error("generated " + artifact.module_name +
                          " failed self-validation: " + findings.front().rule +
                          ": " + findings.front().message);
    fs::path file = fs::path(out_dir) / (artifact.module_name + ".v");
    socsec::write_file(file.string(), artifact.body);
    std::printf("wrote %s\n", file.string().c_str());
  }

  std::string map_text = "FLATTENED\tORIGINAL\n";
  for (const socsec::SignalMapEntry& entry : socsec::collect_signal_map(policies))
    map_text += entry.flattened + "\t" + entry.original + "\n";
  fs::path map_file = fs::path(out_dir) / "signal_map.tsv";
  socsec::write_file(map_file.string(), map_text);
  std::printf("wrote %s\n", map_file.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SoC security pipeline: design spec to vetted CWEs, corrected "
               "assertions, security policies, and enforcement RTL"};
  app.require_subcommand(1);

  std::string data_dir = default_data_dir();
  app.add_option("--data-dir", data_dir,
                 "directory with templates/, stopwords, assumptions, fixes")
      ->capture_default_str();

  // run / mock-init share their option set.
  socsec::PipelineConfig config;
  std::string stages_csv, only_violated_csv, api_key_env;
  bool no_prompt = false, quiet = false, no_llm_fallback = false;
  config.filter.llm_fallback_enabled = true;

  auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("--spec", config.spec_path, "SoC design spec JSON")
        ->required();
    cmd->add_option("--db", config.db_path, "hardware CWE database TSV")
        ->required();
    cmd->add_option("--out", config.out_dir, "output directory")->required();
    cmd->add_option("--stages", stages_csv,
                    "stage prefix to run, e.g. query,cwe,filter or q,c,f");
    cmd->add_option("--answers", config.answers_path,
                    "JSON answers file for action prompts");
    cmd->add_option("--only-violated", only_violated_csv,
                    "comma-separated CWE ids; restrict policy/rtl stages to "
                    "assertions whose violation was confirmed externally");
    cmd->add_flag("--no-prompt", no_prompt,
                  "never ask interactively; use defaults");
    cmd->add_flag("--quiet", quiet, "suppress the per-stage summary");
    cmd->add_option("--similarity-threshold", config.filter.similarity_threshold,
                    "description-similarity threshold for CWE id rewriting")
        ->capture_default_str();
    cmd->add_flag("--no-llm-fallback", no_llm_fallback,
                  "drop unknown CWEs instead of asking the LLM");
  };

  CLI::App* run = app.add_subcommand("run", "execute the pipeline");
  add_run_options(run);
  run->add_flag("--offline", config.offline,
                "serve LLM queries from --mock-dir instead of the network");
  run->add_option("--mock-dir", config.mock_dir,
                  "directory of canned responses, one <digest>.txt per query");
  run->add_option("--endpoint", config.provider.endpoint_url,
                  "chat-completions endpoint URL");
  run->add_option("--model", config.provider.model_name, "model name");
  run->add_option("--api-key-env", api_key_env,
                  "environment variable holding the API key");
  run->add_option("--timeout", config.provider.timeout_seconds,
                  "per-request timeout in seconds")
      ->capture_default_str();
  run->add_option("--retries", config.provider.max_retries,
                  "transient-failure retries per request")
      ->capture_default_str();

  CLI::App* mock_init = app.add_subcommand(
      "mock-init",
      "run offline and record any unanswered query for fixture authoring");
  add_run_options(mock_init);
  mock_init->add_option("--mock-dir", config.mock_dir, "fixture directory")
      ->required();

  CLI::App* survey =
      app.add_subcommand("survey", "build a design spec from a questionnaire");
  std::string survey_out, survey_template, survey_answers;
  survey->add_option("--out", survey_out, "spec JSON to write")->required();
  survey->add_option("--template", survey_template,
                     "survey question template TSV (default from --data-dir)");
  survey->add_option("--answers", survey_answers,
                     "JSON {question-id: answer} for non-interactive use");

  CLI::App* lint = app.add_subcommand("lint-sva", "lint one assertion file");
  std::string lint_file, lint_fixes;
  lint->add_option("file", lint_file, "SystemVerilog assertion file")
      ->required();
  lint->add_option("--fixes", lint_fixes,
                   "keyword-fix table TSV (default from --data-dir)");

  CLI::App* translate = app.add_subcommand(
      "translate-sva", "translate an assertion into a security policy");
  std::string tr_file, tr_action, tr_spec, tr_db, tr_cwe, tr_out;
  translate->add_option("file", tr_file, "SystemVerilog assertion file")
      ->required();
  translate->add_option("--action", tr_action,
                        "countermeasure, e.g. \"slave['SPI'].w_data = 32'h0;\"")
      ->required();
  translate->add_option("--spec", tr_spec, "SoC design spec JSON")->required();
  translate->add_option("--db", tr_db, "CWE database for placement hints");
  translate->add_option("--cwe", tr_cwe, "source CWE id to record");
  translate->add_option("--out", tr_out, "output file (default stdout)");

  CLI::App* gen = app.add_subcommand(
      "gen-rtl", "generate enforcement RTL from a policies JSON file");
  std::string gen_policies, gen_spec, gen_out = "rtl";
  gen->add_option("policies", gen_policies, "policies JSON file")->required();
  gen->add_option("--spec", gen_spec, "SoC design spec JSON")->required();
  gen->add_option("--out", gen_out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (run->parsed() || mock_init->parsed()) {
      config.data_dir = data_dir;
      if (!stages_csv.empty()) config.stages = socsec::parse_stage_list(stages_csv);
      for (std::string_view piece : socsec::split(only_violated_csv, ','))
        if (std::string id(socsec::trim(piece)); !id.empty())
          config.only_violated.push_back(id);
      if (!api_key_env.empty()) config.provider.api_key_ref = api_key_env;
      if (no_llm_fallback) config.filter.llm_fallback_enabled = false;
      if (mock_init->parsed()) config.offline = true;
      return run_command(config, mock_init->parsed(), no_prompt, quiet);
    }
    if (survey->parsed()) {
      if (survey_template.empty())
        survey_template = data_dir + "/survey_template.tsv";
      return survey_command(survey_out, survey_template, survey_answers);
    }
    if (lint->parsed()) {
      if (lint_fixes.empty()) lint_fixes = data_dir + "/sva_keyword_fixes.tsv";
      return lint_command(lint_file, lint_fixes);
    }
    if (translate->parsed())
      return translate_command(tr_file, tr_action, tr_spec, tr_db, tr_cwe,
                               tr_out);
    if (gen->parsed()) return gen_rtl_command(gen_policies, gen_spec, gen_out);
  } catch (const socsec::TransportError& e) {
    std::fprintf(stderr, "transport failure: %s\n", e.what());
    return kTransportFailure;
  } catch (const socsec::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kConfigError;
  } catch (const socsec::IoError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kConfigError;
  } catch (const socsec::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kStageFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kStageFailure;
  }
  return kOk;
}
