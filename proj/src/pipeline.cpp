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

#include "socsec/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "nlohmann/json.hpp"
#include "socsec/codegen.hpp"
#include "socsec/errors.hpp"
#include "socsec/policy.hpp"
#include "socsec/similarity.hpp"
#include "socsec/text_util.hpp"

namespace fs = std::filesystem;

namespace socsec {

using Json = nlohmann::ordered_json;

namespace {

constexpr Stage kAllStages[] = {Stage::query, Stage::cwe,    Stage::filter,
                                Stage::sva,   Stage::policy, Stage::rtl};

std::string checkpoint_name(Stage stage) {
  switch (stage) {
    case Stage::query: return "queries.json";
    case Stage::cwe: return "candidates.json";
    case Stage::filter: return "filtered.json";
    case Stage::sva: return "assertions.json";
    case Stage::policy: return "policies.json";
    case Stage::rtl: return "rtl.json";
  }
  return "";
}

std::string read_if_exists(const std::string& path) {
  if (path.empty() || !fs::exists(path)) return "";
  return read_file(path);
}

Json parse_json_file(const std::string& path, const char* what) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid ") + what + " (" + path +
                      "): " + e.what());
  }
}

void write_json(const std::string& path, const Json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

}  // namespace

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::query: return "query";
    case Stage::cwe: return "cwe";
    case Stage::filter: return "filter";
    case Stage::sva: return "sva";
    case Stage::policy: return "policy";
    case Stage::rtl: return "rtl";
  }
  return "";
}

std::vector<Stage> parse_stage_list(const std::string& csv) {
  std::vector<Stage> out;
  for (const std::string& piece : split(csv, ',')) {
    std::string token = to_lower(trim(piece));
    if (token.empty()) continue;
    bool found = false;
    for (Stage stage : kAllStages) {
      std::string name = to_string(stage);
      if (token == name || token == name.substr(0, 1)) {
        out.push_back(stage);
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError("unknown stage \"" + token + "\"");
  }
  if (out.empty()) throw ConfigError("empty stage list");
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i] != kAllStages[i])
      throw ConfigError(
          "stages must form a prefix of query,cwe,filter,sva,policy,rtl");
  return out;
}

Answers load_answers(const std::string& path) {
  Answers answers;
  if (path.empty()) return answers;
  Json doc = parse_json_file(path, "answers file");
  if (!doc.is_object()) throw AnswerParseError("answers file must be a JSON object");
  if (doc.contains("actions")) {
    const Json& actions = doc.at("actions");
    if (!actions.is_object())
      throw AnswerParseError("answers \"actions\" must map CWE ids to strings");
    for (auto it = actions.begin(); it != actions.end(); ++it) {
      if (!it.value().is_string())
        throw AnswerParseError("answers action for " + it.key() +
                               " must be a string");
      answers.actions[it.key()] = it.value().get<std::string>();
    }
  }
  return answers;
}

std::string default_action(const AssertionUnit& unit) {
  for (const Port& port : unit.ports)
    if (port.direction == PortDirection::output)
      return port.name + " = 0;";
  throw MissingAnswerError(
      "no action configured and the assertion module declares no output "
      "port to zero");
}

std::string pipeline_config_digest(const PipelineConfig& config) {
  std::string blob;
  auto add = [&](const std::string& tag, const std::string& value) {
    blob += tag + "\x1f" + value + "\x1e";
  };
  add("spec", read_if_exists(config.spec_path));
  add("db", read_if_exists(config.db_path));
  add("stopwords", read_if_exists(config.data_dir + "/stopwords.txt"));
  add("assumptions", read_if_exists(config.data_dir + "/assumptions.tsv"));
  add("fixes", read_if_exists(config.data_dir + "/sva_keyword_fixes.tsv"));
  for (const char* name :
       {"cwe_enumeration.txt", "relevance_check.txt", "sva_generation.txt"})
    add(name, read_if_exists(config.data_dir + "/templates/" + name));
  add("answers", read_if_exists(config.answers_path));
  add("offline", config.offline ? "1" : "0");
  add("endpoint", config.offline ? "" : config.provider.endpoint_url);
  add("model", config.offline ? "" : config.provider.model_name);
  add("threshold", std::to_string(config.filter.similarity_threshold));
  add("fallback", config.filter.llm_fallback_enabled ? "1" : "0");
  add("indeterminate",
      config.filter.indeterminate_policy == FilterConfig::IndeterminatePolicy::drop
          ? "drop"
          : "keep");
  add("ip_fallback", config.filter.ip_match_fallback_all ? "1" : "0");
  std::string violated;
  for (const std::string& cwe : config.only_violated) violated += cwe + ",";
  add("only_violated", violated);
  return fnv1a64_hex(blob);
}

namespace {

// Everything a stage needs, loaded once up front.
struct Ctx {
  explicit Ctx(const PipelineConfig& c) : cfg(c) {}

  const PipelineConfig& cfg;
  std::string digest;
  fs::path out;
  SocSpec spec;
  Db db;
  TemplateSet templates;
  Stopwords stopwords;
  std::vector<Assumption> assumptions;
  Answers answers;
  std::unique_ptr<AuditLog> audit;
  std::unique_ptr<LlmClient> owned_client;
  std::unique_ptr<HttpTransport> transport;
  LlmClient* client = nullptr;

  // Stage products.
  QueryText enum_query;
  std::string enum_response;
  std::vector<CweCandidate> candidates;
  FilterResult filtered;
  double metric = 0.0;

  struct SvaItem {
    std::string cwe;
    CweLevel level = CweLevel::bus;
    std::optional<std::string> ip;  // spec IP name
    std::string file;               // relative to out_dir
    std::size_t findings = 0;
  };
  std::vector<SvaItem> sva_items;
  std::vector<SecurityPolicy> policies;
  std::vector<std::string> rtl_files;
};

Json checkpoint_header(const Ctx& ctx) {
  Json doc;
  doc["config_digest"] = ctx.digest;
  return doc;
}

bool checkpoint_valid(const Ctx& ctx, Stage stage, Json& doc) {
  fs::path path = ctx.out / checkpoint_name(stage);
  if (!fs::exists(path)) return false;
  try {
    doc = Json::parse(read_file(path.string()));
  } catch (const nlohmann::json::exception&) {
    return false;
  }
  return doc.is_object() && doc.value("config_digest", "") == ctx.digest;
}

// --- query ---------------------------------------------------------------

void run_query_stage(Ctx& ctx) {
  ctx.enum_query =
      cwe_enumeration_query(ctx.spec, ctx.assumptions, ctx.templates);
  Json doc = checkpoint_header(ctx);
  doc["enumeration_query"] = {
      {"kind", to_string(ctx.enum_query.kind)},
      {"body", ctx.enum_query.body},
      {"context_digest", ctx.enum_query.context_digest},
      {"body_digest", fnv1a64_hex(ctx.enum_query.body)},
  };
  write_json((ctx.out / checkpoint_name(Stage::query)).string(), doc);
}

void load_query_stage(Ctx& ctx, const Json&) {
  // The query is a pure function of the inputs; rebuild it.
  ctx.enum_query =
      cwe_enumeration_query(ctx.spec, ctx.assumptions, ctx.templates);
}

// --- cwe -----------------------------------------------------------------

void run_cwe_stage(Ctx& ctx) {
  ctx.enum_response = ctx.client->send(ctx.enum_query);
  ctx.candidates = parse_cwe_list(ctx.enum_response);
  std::stable_sort(ctx.candidates.begin(), ctx.candidates.end(),
                   [](const CweCandidate& a, const CweCandidate& b) {
                     return a.source_rank < b.source_rank;
                   });
  Json doc = checkpoint_header(ctx);
  doc["response"] = ctx.enum_response;
  Json list = Json::array();
  for (const CweCandidate& candidate : ctx.candidates)
    list.push_back({{"id", candidate.id},
                    {"description", candidate.description},
                    {"source_rank", candidate.source_rank}});
  doc["candidates"] = std::move(list);
  write_json((ctx.out / checkpoint_name(Stage::cwe)).string(), doc);
}

void load_cwe_stage(Ctx& ctx, const Json& doc) {
  ctx.enum_response = doc.value("response", "");
  ctx.candidates.clear();
  for (const Json& item : doc.at("candidates"))
    ctx.candidates.push_back({item.at("id").get<std::string>(),
                              item.at("description").get<std::string>(),
                              item.at("source_rank").get<std::size_t>()});
}

// --- filter ---------------------------------------------------------------

Json filtered_to_json(const FilteredCwe& fc) {
  Json levels = Json::array();
  for (CweLevel level : fc.levels) levels.push_back(to_string(level));
  Json ips = Json::array();
  for (const std::string& ip : fc.matched_ips) ips.push_back(ip);
  Json entry = {
      {"cwe_id", fc.entry.cwe_id},
      {"description", fc.entry.description},
      {"bus", fc.entry.bus == YesNo::yes},
      {"ip", fc.entry.ip == YesNo::yes},
      {"sync", to_string(fc.entry.sync)},
      {"violation_type", to_string(fc.entry.violation_type)},
  };
  Json doc = {{"entry", entry},
              {"levels", levels},
              {"matched_ips", ips},
              {"match_route", to_string(fc.match_route)}};
  if (fc.similarity_score) doc["similarity_score"] = *fc.similarity_score;
  return doc;
}

void run_filter_stage(Ctx& ctx) {
  FilterEnv env;
  env.templates = &ctx.templates;
  if (ctx.cfg.filter.llm_fallback_enabled) env.llm = ctx.client;
  ctx.filtered = filter_cwes(ctx.candidates, ctx.db, ctx.spec, ctx.stopwords,
                             env, ctx.cfg.filter);
  ctx.metric =
      relevance_metric(ctx.filtered.filtered.size(), ctx.candidates.size());

  ctx.filtered.db.save((ctx.out / "db_updated.tsv").string());
  write_file((ctx.out / "filter_diagnostics.jsonl").string(),
             diagnostics_to_jsonl(ctx.filtered.diagnostics));

  Json doc = checkpoint_header(ctx);
  doc["candidate_count"] = ctx.candidates.size();
  doc["filtered_count"] = ctx.filtered.filtered.size();
  doc["relevance_metric"] = ctx.metric;
  Json list = Json::array();
  for (const FilteredCwe& fc : ctx.filtered.filtered)
    list.push_back(filtered_to_json(fc));
  doc["filtered"] = std::move(list);
  write_json((ctx.out / checkpoint_name(Stage::filter)).string(), doc);
}

void load_filter_stage(Ctx& ctx, const Json& doc) {
  ctx.metric = doc.at("relevance_metric").get<double>();
  ctx.filtered.filtered.clear();
  ctx.filtered.db = Db::load((ctx.out / "db_updated.tsv").string());
  for (const Json& item : doc.at("filtered")) {
    FilteredCwe fc;
    const Json& entry = item.at("entry");
    const CweEntry* row =
        ctx.filtered.db.lookup(entry.at("cwe_id").get<std::string>());
    if (row == nullptr)
      throw SchemaError("filter checkpoint references " +
                        entry.at("cwe_id").get<std::string>() +
                        " absent from db_updated.tsv");
    fc.entry = *row;
    for (const Json& level : item.at("levels"))
      fc.levels.push_back(level.get<std::string>() == "bus" ? CweLevel::bus
                                                            : CweLevel::ip);
    for (const Json& ip : item.at("matched_ips"))
      fc.matched_ips.push_back(ip.get<std::string>());
    ctx.filtered.filtered.push_back(std::move(fc));
  }
}

// --- sva -------------------------------------------------------------------

std::string sva_tag(const Ctx::SvaItem& item, const SocSpec& spec) {
  if (item.level == CweLevel::bus) return "bus";
  const IpBlock* ip = spec.find_ip_loose(*item.ip);
  std::string ident = ip != nullptr ? ip->ident() : *item.ip;
  std::string out;
  for (char c : ident) out += is_ident_char(c) ? c : '_';
  return out;
}

void run_sva_stage(Ctx& ctx) {
  fs::create_directories(ctx.out / "sva");
  KeywordFixes fixes =
      KeywordFixes::load(ctx.cfg.data_dir + "/sva_keyword_fixes.tsv");
  ctx.sva_items.clear();
  for (const FilteredCwe& fc : ctx.filtered.filtered) {
    for (CweLevel level : fc.levels) {
      std::vector<std::optional<std::string>> ips;
      if (level == CweLevel::bus) {
        ips.push_back(std::nullopt);
      } else {
        for (const std::string& name : fc.matched_ips) ips.push_back(name);
      }
      for (const std::optional<std::string>& ip_name : ips) {
        const IpBlock* ip =
            ip_name ? ctx.spec.find_ip_loose(*ip_name) : nullptr;
        QueryText query =
            sva_generation_query(fc.entry, ctx.spec, ip, ctx.templates);
        std::string response = ctx.client->send(query);
        std::string code = extract_code_block(response);
        CorrectionResult corrected = correct(code, ctx.spec, ip, fixes);
        if (!corrected.text.empty() && corrected.text.back() != '\n')
          corrected.text += '\n';

        Ctx::SvaItem item;
        item.cwe = fc.entry.cwe_id;
        item.level = level;
        item.ip = ip ? std::optional<std::string>(ip->name) : std::nullopt;
        item.findings = corrected.applied.size();
        item.file = "sva/" + fc.entry.cwe_id + "_" + sva_tag(item, ctx.spec) +
                    ".sv";
        write_file((ctx.out / item.file).string(), corrected.text);
        ctx.sva_items.push_back(std::move(item));
      }
    }
  }
  Json doc = checkpoint_header(ctx);
  Json list = Json::array();
  for (const Ctx::SvaItem& item : ctx.sva_items) {
    Json entry = {{"cwe", item.cwe},
                  {"level", to_string(item.level)},
                  {"file", item.file},
                  {"findings", item.findings}};
    if (item.ip) entry["ip"] = *item.ip;
    list.push_back(std::move(entry));
  }
  doc["assertions"] = std::move(list);
  write_json((ctx.out / checkpoint_name(Stage::sva)).string(), doc);
}

void load_sva_stage(Ctx& ctx, const Json& doc) {
  ctx.sva_items.clear();
  for (const Json& item : doc.at("assertions")) {
    Ctx::SvaItem loaded;
    loaded.cwe = item.at("cwe").get<std::string>();
    loaded.level = item.at("level").get<std::string>() == "bus" ? CweLevel::bus
                                                                : CweLevel::ip;
    if (item.contains("ip")) loaded.ip = item.at("ip").get<std::string>();
    loaded.file = item.at("file").get<std::string>();
    loaded.findings = item.value("findings", std::size_t{0});
    if (!fs::exists(ctx.out / loaded.file))
      throw IoError("assertion checkpoint references missing file " +
                    loaded.file);
    ctx.sva_items.push_back(std::move(loaded));
  }
}

// --- policy ----------------------------------------------------------------

void run_policy_stage(Ctx& ctx) {
  ctx.policies.clear();
  std::set<std::string> gate(ctx.cfg.only_violated.begin(),
                             ctx.cfg.only_violated.end());
  for (const Ctx::SvaItem& item : ctx.sva_items) {
    if (!gate.empty() && !gate.count(item.cwe)) continue;
    AssertionUnit unit =
        parse_assertion(read_file((ctx.out / item.file).string()));
    std::string action;
    auto it = ctx.answers.actions.find(item.cwe);
    if (it == ctx.answers.actions.end())
      it = ctx.answers.actions.find("default");
    if (it != ctx.answers.actions.end()) {
      action = it->second;
    } else if (ctx.cfg.action_prompt) {
      std::string suggested;
      try {
        suggested = default_action(unit);
      } catch (const MissingAnswerError&) {
      }
      action = ctx.cfg.action_prompt(item.cwe, suggested);
    } else {
      action = default_action(unit);
    }
    SecurityPolicy policy = assertion_to_policy(unit, action, ctx.spec);
    policy.source_cwe = item.cwe;
    policy = classify_placement(policy, ctx.filtered.db.lookup(item.cwe),
                                ctx.spec);
    ctx.policies.push_back(std::move(policy));
  }
  Json doc = checkpoint_header(ctx);
  doc["policies"] = Json::parse(serialize_policies(ctx.policies));
  write_json((ctx.out / checkpoint_name(Stage::policy)).string(), doc);
}

void load_policy_stage(Ctx& ctx, const Json& doc) {
  ctx.policies = parse_policies(doc.at("policies").dump());
}

// --- rtl --------------------------------------------------------------------

unsigned port_width(const Port& port) {
  return port.width_msb ? *port.width_msb + 1 : 1;
}

void run_rtl_stage(Ctx& ctx) {
  fs::create_directories(ctx.out / "rtl");
  ctx.rtl_files.clear();

  std::vector<SecurityPolicy> bus_policies;
  std::map<std::string, std::vector<SecurityPolicy>> ip_policies;
  for (const SecurityPolicy& policy : ctx.policies) {
    if (!policy.placement)
      throw Error("policy " + policy.source_cwe.value_or("(unlabeled)") +
                  " reached the rtl stage without a placement");
    if (policy.placement->level == PlacementLevel::bus)
      bus_policies.push_back(policy);
    else
      ip_policies[policy.placement->ip_name].push_back(policy);
  }

  std::vector<RtlArtifact> artifacts;
  artifacts.push_back(build_central_module(bus_policies, ctx.spec));

  for (const auto& [ip_name, policies] : ip_policies) {
    const IpBlock* ip = ctx.spec.find_ip_loose(ip_name);
    if (ip == nullptr)
      throw UnresolvableSignalError("policies target unknown IP " + ip_name);
    // Inner ports: union of the module ports declared by this IP's
    // corrected assertions, in first-seen order.
    std::vector<RtlPort> inner;
    std::set<std::string> seen;
    for (const Ctx::SvaItem& item : ctx.sva_items) {
      if (!item.ip || *item.ip != ip->name) continue;
      AssertionUnit unit =
          parse_assertion(read_file((ctx.out / item.file).string()));
      for (const Port& port : unit.ports)
        if (seen.insert(port.name).second)
          inner.push_back({port.direction, port_width(port), port.name});
    }
    artifacts.push_back(build_ip_wrapper(*ip, policies, inner));
  }

  for (const RtlArtifact& artifact : artifacts) {
    std::vector<RtlFinding> findings = validate_rtl(artifact);
    if (!findings.empty())
      throw Error("generated " + artifact.module_name +
                  " failed self-validation: " + findings.front().rule + ": " +
                  findings.front().message);
    std::string file = "rtl/" + artifact.module_name + ".v";
    write_file((ctx.out / file).string(), artifact.body);
    ctx.rtl_files.push_back(file);
  }

  std::string map_text = "FLATTENED\tORIGINAL\n";
  for (const SignalMapEntry& entry : collect_signal_map(ctx.policies))
    map_text += entry.flattened + "\t" + entry.original + "\n";
  write_file((ctx.out / "rtl/signal_map.tsv").string(), map_text);
  ctx.rtl_files.push_back("rtl/signal_map.tsv");

  Json doc = checkpoint_header(ctx);
  Json list = Json::array();
  for (const RtlArtifact& artifact : artifacts) {
    Json entry = {{"module", artifact.module_name},
                  {"kind", artifact.kind == ArtifactKind::central_module
                               ? "central_module"
                               : "ip_wrapper"},
                  {"file", "rtl/" + artifact.module_name + ".v"},
                  {"policies", artifact.policies_included}};
    if (artifact.kind == ArtifactKind::ip_wrapper)
      entry["ip"] = artifact.ip_name;
    list.push_back(std::move(entry));
  }
  doc["artifacts"] = std::move(list);
  doc["signal_map"] = "rtl/signal_map.tsv";
  write_json((ctx.out / checkpoint_name(Stage::rtl)).string(), doc);
}

void load_rtl_stage(Ctx& ctx, const Json& doc) {
  ctx.rtl_files.clear();
  for (const Json& item : doc.at("artifacts"))
    ctx.rtl_files.push_back(item.at("file").get<std::string>());
  ctx.rtl_files.push_back(doc.value("signal_map", "rtl/signal_map.tsv"));
}

using StageRunner = void (*)(Ctx&);
using StageLoader = void (*)(Ctx&, const Json&);

StageRunner runner_for(Stage stage) {
  switch (stage) {
    case Stage::query: return run_query_stage;
    case Stage::cwe: return run_cwe_stage;
    case Stage::filter: return run_filter_stage;
    case Stage::sva: return run_sva_stage;
    case Stage::policy: return run_policy_stage;
    case Stage::rtl: return run_rtl_stage;
  }
  return nullptr;
}

StageLoader loader_for(Stage stage) {
  switch (stage) {
    case Stage::query: return load_query_stage;
    case Stage::cwe: return load_cwe_stage;
    case Stage::filter: return load_filter_stage;
    case Stage::sva: return load_sva_stage;
    case Stage::policy: return load_policy_stage;
    case Stage::rtl: return load_rtl_stage;
  }
  return nullptr;
}

}  // namespace

std::string RunReport::to_json() const {
  Json doc;
  doc["config_digest"] = config_digest;
  Json list = Json::array();
  for (const StageStatus& status : stages) {
    Json entry = {{"stage", to_string(status.stage)},
                  {"status", status.status}};
    if (!status.detail.empty()) entry["detail"] = status.detail;
    list.push_back(std::move(entry));
  }
  doc["stages"] = std::move(list);
  doc["candidate_count"] = candidate_count;
  doc["filtered_count"] = filtered_count;
  doc["relevance_metric"] = metric;
  doc["assertion_files"] = assertion_files;
  doc["rtl_files"] = rtl_files;
  if (!failure_kind.empty()) doc["failure"] = failure_kind;
  return doc.dump(2) + "\n";
}

RunReport run_pipeline(const PipelineConfig& config, LlmClient* client) {
  RunReport report;

  if (config.spec_path.empty() || config.db_path.empty() ||
      config.out_dir.empty())
    throw ConfigError("spec_path, db_path and out_dir are required");
  if (config.data_dir.empty())
    throw ConfigError("data_dir is required (templates and word lists)");
  if (config.offline && config.mock_dir.empty() && client == nullptr)
    throw ConfigError("offline mode requires mock_dir");

  std::vector<Stage> stages = config.stages;
  if (stages.empty())
    stages.assign(std::begin(kAllStages), std::end(kAllStages));
  for (std::size_t i = 0; i < stages.size(); ++i)
    if (stages[i] != kAllStages[i])
      throw ConfigError(
          "stages must form a prefix of query,cwe,filter,sva,policy,rtl");

  Ctx ctx(config);
  ctx.out = config.out_dir;
  fs::create_directories(ctx.out);
  ctx.digest = pipeline_config_digest(config);
  report.config_digest = ctx.digest;

  ctx.spec = load_spec_file(config.spec_path);
  ctx.db = Db::load(config.db_path);
  ctx.templates = TemplateSet::load(config.data_dir + "/templates");
  ctx.stopwords = Stopwords::load(config.data_dir + "/stopwords.txt");
  ctx.assumptions = load_assumptions(config.data_dir + "/assumptions.tsv");
  ctx.answers = load_answers(config.answers_path);

  ctx.audit = std::make_unique<AuditLog>((ctx.out / "llm_audit.jsonl").string());
  if (client != nullptr) {
    ctx.client = client;
  } else if (config.offline) {
    ctx.owned_client =
        std::make_unique<MockLlmClient>(config.mock_dir, ctx.audit.get());
    ctx.client = ctx.owned_client.get();
  } else {
    ctx.transport = make_httplib_transport();
    ctx.owned_client = std::make_unique<HttpLlmClient>(
        config.provider, ctx.transport.get(), ctx.audit.get());
    ctx.client = ctx.owned_client.get();
  }

  bool chain_valid = true;
  bool failed = false;
  std::set<Stage> requested(stages.begin(), stages.end());
  for (Stage stage : kAllStages) {
    StageStatus status;
    status.stage = stage;
    if (!requested.count(stage)) {
      status.status = "not_requested";
      report.stages.push_back(status);
      continue;
    }
    if (failed) {
      status.status = "skipped";
      report.stages.push_back(status);
      continue;
    }
    Json doc;
    if (chain_valid && checkpoint_valid(ctx, stage, doc)) {
      try {
        loader_for(stage)(ctx, doc);
        status.status = "checkpoint";
      } catch (const std::exception&) {
        // Corrupt checkpoint: fall through to a fresh run.
        chain_valid = false;
        doc = Json();
      }
    }
    if (status.status.empty()) {
      chain_valid = false;
      try {
        runner_for(stage)(ctx);
        status.status = "ran";
      } catch (const TransportError& e) {
        status.status = "failed";
        status.detail = e.what();
        report.failure_kind = "transport";
        failed = true;
      } catch (const Error& e) {
        status.status = "failed";
        status.detail = e.what();
        report.failure_kind = "stage";
        failed = true;
      }
    }
    report.stages.push_back(status);
  }

  report.candidate_count = ctx.candidates.size();
  report.filtered_count = ctx.filtered.filtered.size();
  report.metric = ctx.metric;
  for (const Ctx::SvaItem& item : ctx.sva_items)
    report.assertion_files.push_back(item.file);
  report.rtl_files = ctx.rtl_files;

  write_file((ctx.out / "report.json").string(), report.to_json());
  return report;
}

}  // namespace socsec
