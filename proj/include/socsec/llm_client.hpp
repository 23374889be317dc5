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
// Provider-agnostic LLM access plus parsing of free-form completions into
// CWE candidate lists, yes/no relevance verdicts and code blocks.  A
// file-backed mock keyed by the query-body digest makes the full pipeline
// reproducible offline.

#ifndef SOCSEC_LLM_CLIENT_HPP_
#define SOCSEC_LLM_CLIENT_HPP_

#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "socsec/query_gen.hpp"

namespace socsec {

struct ProviderConfig {
  std::string endpoint_url;
  std::string model_name;
  std::string api_key_ref;  // environment variable holding the key
  int timeout_seconds = 60;
  int max_retries = 2;
  double temperature = 0.0;
};

struct CweCandidate {
  std::string id;  // canonical "CWE-<digits>"
  std::string description;
  std::size_t source_rank = 1;  // 1-based position in the LLM response

  bool operator==(const CweCandidate&) const = default;
};

enum class RelevanceVerdict { relevant, not_relevant, indeterminate };

struct HttpResponse {
  int status = 0;
  std::string body;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  // Throws TransportError when no response was obtained at all.
  virtual HttpResponse post(
      const std::string& url,
      const std::vector<std::pair<std::string, std::string>>& headers,
      const std::string& body, int timeout_seconds) = 0;
};

std::unique_ptr<HttpTransport> make_httplib_transport();

// Append-only JSON-lines record of every request/response pair.  Records
// carry no timestamps so repeated offline runs stay byte-identical.
class AuditLog {
 public:
  explicit AuditLog(std::string path) : path_(std::move(path)) {}

  void record(const std::string& kind, const std::string& digest,
              const std::string& request, const std::string& response,
              int attempts, const std::string& error = "");

 private:
  std::string path_;
  std::mutex mu_;
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string send(const QueryText& query) = 0;
};

// Chat-completions shaped HTTP provider.  Retries transient transport
// failures and 5xx payloads with exponential backoff; 401/403 raise
// AuthError immediately, other 4xx surface the provider message.
class HttpLlmClient : public LlmClient {
 public:
  HttpLlmClient(ProviderConfig config, HttpTransport* transport,
                AuditLog* audit, int backoff_ms = 250);

  std::string send(const QueryText& query) override;

 private:
  ProviderConfig config_;
  HttpTransport* transport_;
  AuditLog* audit_;
  int backoff_ms_;
};

// Serves canned responses from <dir>/<fnv1a64_hex(body)>.txt.  A missing
// fixture raises ConfigError naming the digest so the file can be authored.
class MockLlmClient : public LlmClient {
 public:
  explicit MockLlmClient(std::string dir, AuditLog* audit = nullptr);

  std::string send(const QueryText& query) override;

  static std::string digest_for(const QueryText& query);

 private:
  std::string dir_;
  AuditLog* audit_;
};

// Extracts every line mentioning `CWE-<digits>`, optionally followed by a
// colon and description.  Order is preserved in source_rank; duplicates by
// (id, whitespace-normalized lowercase description) keep the first.  The
// same id with a different description is retained as a separate candidate.
std::vector<CweCandidate> parse_cwe_list(const std::string& text);

// One line per candidate, in the shape parse_cwe_list consumes.
std::string render_cwe_list(const std::vector<CweCandidate>& candidates);

RelevanceVerdict parse_relevance(const std::string& text);

// First fenced block, else first indented block, else the region spanning
// the property..endproperty text (plus a trailing assert statement when one
// follows).  Throws NoCodeFoundError when nothing code-like is present.
std::string extract_code_block(const std::string& text);

}  // namespace socsec

#endif  // SOCSEC_LLM_CLIENT_HPP_
