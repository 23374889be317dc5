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

#ifndef SOCSEC_ERRORS_HPP_
#define SOCSEC_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace socsec {

// Base class for every error raised by the library.  Subclasses exist so
// callers can catch one family (e.g. input syntax vs. transport) without
// string matching.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text.  line/col are 1-based; 0 means unknown.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, std::size_t line = 0, std::size_t col = 0)
      : Error(format(msg, line, col)), line(line), col(col) {}
  std::size_t line;
  std::size_t col;

 private:
  static std::string format(const std::string& msg, std::size_t line,
                            std::size_t col) {
    if (line == 0) return msg;
    return msg + " (line " + std::to_string(line) + ", col " +
           std::to_string(col) + ")";
  }
};

// Structurally valid input that violates the expected schema (missing or
// duplicate keys, bad enums, inconsistent counts).
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Address arithmetic violations: empty ranges, out-of-range protected
// windows, values wider than 32 bits.
class AddressError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failures (missing file, unreadable directory).
class IoError : public Error {
 public:
  using Error::Error;
};

// LLM provider could not be reached after the configured retries.
class TransportError : public Error {
 public:
  using Error::Error;
};

// LLM provider rejected the request (auth / quota).
class AuthError : public Error {
 public:
  using Error::Error;
};

// A response carried no recognizable code block.
class NoCodeFoundError : public Error {
 public:
  using Error::Error;
};

// correct() could not produce parseable assertion text.
class UncorrectableError : public Error {
 public:
  using Error::Error;
};

// No assertion template exists for the requested violation type.
class NoTemplateError : public Error {
 public:
  using Error::Error;
};

// The action mini-language input could not be parsed.
class ActionParseError : public Error {
 public:
  using Error::Error;
};

// A policy references a signal that maps to no IP and no bus signal.
class UnresolvableSignalError : public Error {
 public:
  using Error::Error;
};

// An IP-level operation was invoked without naming an IP.
class MissingIpError : public Error {
 public:
  using Error::Error;
};

// Survey support: a required answer is missing or unparseable.
class MissingAnswerError : public Error {
 public:
  using Error::Error;
};
class AnswerParseError : public Error {
 public:
  using Error::Error;
};

// Pipeline configuration problems (bad stage list, missing inputs).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace socsec

#endif  // SOCSEC_ERRORS_HPP_
