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

#include "socsec/llm_client.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "socsec/cwe_db.hpp"
#include "socsec/errors.hpp"
#include "socsec/text_util.hpp"

namespace socsec {
namespace {

using json = nlohmann::json;

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse post(const std::string& url,
                    const std::vector<std::pair<std::string, std::string>>& headers,
                    const std::string& body, int timeout_seconds) override {
    auto slash = url.find('/', url.find("://") == std::string::npos
                                    ? 0
                                    : url.find("://") + 3);
    std::string base = slash == std::string::npos ? url : url.substr(0, slash);
    std::string path = slash == std::string::npos ? "/" : url.substr(slash);
    httplib::Client client(base);
    client.set_connection_timeout(timeout_seconds);
    client.set_read_timeout(timeout_seconds);
    httplib::Headers hdrs;
    for (const auto& [k, v] : headers) hdrs.emplace(k, v);
    auto result = client.Post(path, hdrs, body, "application/json");
    if (!result)
      throw TransportError("POST " + url + " failed: " +
                           httplib::to_string(result.error()));
    return {result->status, result->body};
  }
};

}  // namespace

std::unique_ptr<HttpTransport> make_httplib_transport() {
  return std::make_unique<HttplibTransport>();
}

void AuditLog::record(const std::string& kind, const std::string& digest,
                      const std::string& request, const std::string& response,
                      int attempts, const std::string& error) {
  json rec;
  rec["kind"] = kind;
  rec["digest"] = digest;
  rec["request"] = request;
  rec["response"] = response;
  rec["attempts"] = attempts;
  if (!error.empty()) rec["error"] = error;
  std::lock_guard<std::mutex> lock(mu_);
  std::ofstream out(path_, std::ios::app);
  if (!out) throw IoError("cannot append to audit log: " + path_);
  out << rec.dump() << "\n";
}

HttpLlmClient::HttpLlmClient(ProviderConfig config, HttpTransport* transport,
                             AuditLog* audit, int backoff_ms)
    : config_(std::move(config)),
      transport_(transport),
      audit_(audit),
      backoff_ms_(backoff_ms) {}

std::string HttpLlmClient::send(const QueryText& query) {
  json req;
  req["model"] = config_.model_name;
  req["temperature"] = config_.temperature;
  req["messages"] = json::array({{{"role", "user"}, {"content", query.body}}});
  std::string request_body = req.dump();

  std::vector<std::pair<std::string, std::string>> headers;
  if (!config_.api_key_ref.empty()) {
    const char* key = std::getenv(config_.api_key_ref.c_str());
    if (key == nullptr || *key == '\0')
      throw AuthError("environment variable " + config_.api_key_ref +
                      " is not set");
    headers.emplace_back("Authorization", std::string("Bearer ") + key);
  }

  std::string digest = fnv1a64_hex(query.body);
  std::string last_error;
  int attempts = 0;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    ++attempts;
    if (attempt > 0 && backoff_ms_ > 0)
      std::this_thread::sleep_for(
          std::chrono::milliseconds(backoff_ms_ << (attempt - 1)));
    HttpResponse resp;
    try {
      resp = transport_->post(config_.endpoint_url, headers, request_body,
                              config_.timeout_seconds);
    } catch (const TransportError& e) {
      last_error = e.what();
      continue;
    }
    if (resp.status == 401 || resp.status == 403) {
      if (audit_)
        audit_->record(to_string(query.kind), digest, request_body, "",
                       attempts, "auth rejected");
      throw AuthError("provider rejected credentials (HTTP " +
                      std::to_string(resp.status) + ")");
    }
    if (resp.status >= 500) {
      last_error = "HTTP " + std::to_string(resp.status);
      continue;
    }
    if (resp.status >= 400) {
      std::string message = resp.body;
      try {
        json err = json::parse(resp.body);
        if (err.contains("error") && err["error"].contains("message"))
          message = err["error"]["message"].get<std::string>();
      } catch (const json::exception&) {
      }
      if (audit_)
        audit_->record(to_string(query.kind), digest, request_body, "",
                       attempts, message);
      throw TransportError("provider error (HTTP " +
                           std::to_string(resp.status) + "): " + message);
    }
    std::string content;
    try {
      json payload = json::parse(resp.body);
      content = payload.at("choices").at(0).at("message").at("content")
                    .get<std::string>();
    } catch (const json::exception& e) {
      if (audit_)
        audit_->record(to_string(query.kind), digest, request_body, resp.body,
                       attempts, "malformed provider response");
      throw TransportError(std::string("malformed provider response: ") +
                           e.what());
    }
    if (audit_)
      audit_->record(to_string(query.kind), digest, request_body, content,
                     attempts);
    return content;
  }
  if (audit_)
    audit_->record(to_string(query.kind), digest, request_body, "", attempts,
                   last_error);
  throw TransportError("request failed after " + std::to_string(attempts) +
                       " attempts: " + last_error);
}

MockLlmClient::MockLlmClient(std::string dir, AuditLog* audit)
    : dir_(std::move(dir)), audit_(audit) {}

std::string MockLlmClient::digest_for(const QueryText& query) {
  return fnv1a64_hex(query.body);
}

std::string MockLlmClient::send(const QueryText& query) {
  std::string digest = digest_for(query);
  std::string path = dir_ + "/" + digest + ".txt";
  if (!std::filesystem::exists(path))
    throw ConfigError("no mock response for " + to_string(query.kind) +
                      " query; expected file " + path);
  std::string response = read_file(path);
  if (audit_)
    audit_->record(to_string(query.kind), digest, query.body, response, 1);
  return response;
}

std::vector<CweCandidate> parse_cwe_list(const std::string& text) {
  std::vector<CweCandidate> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::size_t pos = std::string::npos;
    for (std::size_t i = 0; i + 4 < line.size(); ++i) {
      if ((line[i] == 'C' || line[i] == 'c') &&
          (line[i + 1] == 'W' || line[i + 1] == 'w') &&
          (line[i + 2] == 'E' || line[i + 2] == 'e') && line[i + 3] == '-' &&
          std::isdigit(static_cast<unsigned char>(line[i + 4]))) {
        pos = i;
        break;
      }
    }
    if (pos == std::string::npos) continue;
    std::size_t digits = pos + 4;
    std::size_t end = digits;
    while (end < line.size() &&
           std::isdigit(static_cast<unsigned char>(line[end])))
      ++end;
    std::string id = canonical_cwe_id(line.substr(pos, end - pos));
    std::size_t rest = end;
    while (rest < line.size() &&
           std::isspace(static_cast<unsigned char>(line[rest])))
      ++rest;
    std::string description;
    if (rest < line.size() && line[rest] == ':')
      description = trim(line.substr(rest + 1));
    auto key = std::make_pair(id, to_lower(collapse_ws(description)));
    if (!seen.insert(key).second) continue;
    out.push_back({id, description, out.size() + 1});
  }
  return out;
}

std::string render_cwe_list(const std::vector<CweCandidate>& candidates) {
  std::string out;
  for (const auto& c : candidates) {
    out += c.id;
    if (!c.description.empty()) out += ": " + c.description;
    out += "\n";
  }
  return out;
}

RelevanceVerdict parse_relevance(const std::string& text) {
  std::string head = to_lower(text.substr(0, std::min<std::size_t>(text.size(), 400)));

  // A bare leading yes/no is authoritative.
  std::size_t i = 0;
  while (i < head.size() && !std::isalpha(static_cast<unsigned char>(head[i])))
    ++i;
  std::size_t j = i;
  while (j < head.size() && std::isalpha(static_cast<unsigned char>(head[j])))
    ++j;
  std::string first_word = head.substr(i, j - i);
  if (first_word == "yes") return RelevanceVerdict::relevant;
  if (first_word == "no") return RelevanceVerdict::not_relevant;

  std::size_t neg = std::string::npos;
  for (const char* cue : {"not relevant", "irrelevant", "not applicable",
                          "does not apply", "unrelated", "not a concern"})
    neg = std::min(neg, head.find(cue));

  std::size_t aff = std::string::npos;
  for (std::size_t pos = head.find("relevant"); pos != std::string::npos;
       pos = head.find("relevant", pos + 1)) {
    bool negated = (pos >= 2 && head.compare(pos - 2, 2, "ir") == 0) ||
                   (pos >= 4 && head.compare(pos - 4, 4, "not ") == 0);
    if (!negated) {
      aff = std::min(aff, pos);
      break;
    }
  }
  for (const char* cue : {"applies", "is applicable"})
    aff = std::min(aff, head.find(cue));

  if (neg == std::string::npos && aff == std::string::npos)
    return RelevanceVerdict::indeterminate;
  if (neg == std::string::npos) return RelevanceVerdict::relevant;
  if (aff == std::string::npos) return RelevanceVerdict::not_relevant;
  return neg < aff ? RelevanceVerdict::not_relevant
                   : RelevanceVerdict::relevant;
}

namespace {

bool is_word_at(const std::string& s, std::size_t pos, std::string_view word) {
  if (pos + word.size() > s.size()) return false;
  if (s.compare(pos, word.size(), word) != 0) return false;
  if (pos > 0 && is_ident_char(s[pos - 1])) return false;
  std::size_t after = pos + word.size();
  return after >= s.size() || !is_ident_char(s[after]);
}

std::size_t find_word(const std::string& s, std::string_view word,
                      std::size_t from = 0) {
  for (std::size_t pos = s.find(word.data(), from, word.size());
       pos != std::string::npos; pos = s.find(word.data(), pos + 1, word.size()))
    if (is_word_at(s, pos, word)) return pos;
  return std::string::npos;
}

}  // namespace

std::string extract_code_block(const std::string& text) {
  // Fenced block wins.
  auto fence = text.find("```");
  if (fence != std::string::npos) {
    auto body_start = text.find('\n', fence + 3);
    if (body_start != std::string::npos) {
      auto close = text.find("```", body_start + 1);
      if (close != std::string::npos) {
        std::string inner = text.substr(body_start + 1, close - body_start - 1);
        while (!inner.empty() && (inner.back() == '\n' || inner.back() == '\r'))
          inner.pop_back();
        return inner;
      }
    }
  }

  // A run of uniformly indented lines (4 spaces or a tab).
  {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    std::size_t start = 0;
    while (start < lines.size()) {
      auto indented = [](const std::string& l) {
        return l.rfind("    ", 0) == 0 || (!l.empty() && l[0] == '\t');
      };
      if (!indented(lines[start])) {
        ++start;
        continue;
      }
      std::size_t end = start;
      while (end < lines.size() &&
             (indented(lines[end]) || trim(lines[end]).empty()))
        ++end;
      while (end > start && trim(lines[end - 1]).empty()) --end;
      if (end - start >= 2) {
        std::string block;
        for (std::size_t k = start; k < end; ++k) {
          const std::string& l = lines[k];
          if (l.rfind("    ", 0) == 0) block += l.substr(4);
          else if (!l.empty() && l[0] == '\t') block += l.substr(1);
          else block += l;
          block += "\n";
        }
        while (!block.empty() && block.back() == '\n') block.pop_back();
        return block;
      }
      start = end + 1;
    }
  }

  // Bare property..endproperty region, plus a trailing assert statement.
  std::size_t prop = find_word(text, "property");
  std::size_t endprop = std::string::npos;
  for (std::size_t pos = find_word(text, "endproperty"); pos != std::string::npos;
       pos = find_word(text, "endproperty", pos + 1))
    endprop = pos;
  if (prop != std::string::npos && endprop != std::string::npos &&
      endprop > prop) {
    std::size_t line_start = text.rfind('\n', prop);
    line_start = line_start == std::string::npos ? 0 : line_start + 1;
    std::size_t region_end = text.find('\n', endprop);
    region_end = region_end == std::string::npos ? text.size() : region_end;
    std::size_t assert_pos = find_word(text, "assert", region_end);
    if (assert_pos != std::string::npos) {
      std::size_t stmt_end = text.find(';', assert_pos);
      if (stmt_end != std::string::npos) {
        // Only adopt the assert when nothing but whitespace and a label
        // separates it from the property region.
        std::size_t assert_line = text.rfind('\n', assert_pos);
        std::string gap = text.substr(region_end,
                                      (assert_line == std::string::npos
                                           ? assert_pos
                                           : assert_line) - region_end);
        if (trim(gap).empty()) region_end = stmt_end + 1;
      }
    }
    return trim(text.substr(line_start, region_end - line_start));
  }
  throw NoCodeFoundError("response contains no fenced, indented or "
                         "property-delimited code block");
}

}  // namespace socsec
