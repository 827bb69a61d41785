//
// Copyright 2026 The intentkit Authors
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

#ifndef INTENTKIT_ERROR_H_
#define INTENTKIT_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace intentkit {

// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed input files (datasets, heads, reports). `line` is 1-based, 0 when not applicable.
class DatasetError : public Error {
 public:
  DatasetError(const std::string& file, std::size_t line,
               const std::string& message)
      : Error(Format(file, line, message)), file_(file), line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  static std::string Format(const std::string& file, std::size_t line,
                            const std::string& message) {
    std::string out = file;
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + message;
  }

  std::string file_;
  std::size_t line_;
};

// Violated precondition on a value passed by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ProviderErrorKind {
  kTimeout,
  kTransport,
  kMalformedResponse,
  kRefusal,
  kUnsupported,
};

inline const char* ProviderErrorKindName(ProviderErrorKind kind);

// Failure reported by a completion, scoring or embedding backend.
class ProviderError : public Error {
 public:
  ProviderError(ProviderErrorKind kind, std::string provider_id,
                std::string operation, const std::string& detail)
      : Error(provider_id + " " + operation + " failed (" +
              ProviderErrorKindName(kind) + "): " + detail),
        kind_(kind),
        provider_id_(std::move(provider_id)),
        operation_(std::move(operation)) {}

  ProviderErrorKind kind() const { return kind_; }
  const std::string& provider_id() const { return provider_id_; }
  const std::string& operation() const { return operation_; }

 private:
  ProviderErrorKind kind_;
  std::string provider_id_;
  std::string operation_;
};

inline const char* ProviderErrorKindName(ProviderErrorKind kind) {
  switch (kind) {
    case ProviderErrorKind::kTimeout:
      return "timeout";
    case ProviderErrorKind::kTransport:
      return "transport";
    case ProviderErrorKind::kMalformedResponse:
      return "malformed response";
    case ProviderErrorKind::kRefusal:
      return "refusal";
    case ProviderErrorKind::kUnsupported:
      return "unsupported";
  }
  return "unknown";
}

}  // namespace intentkit

#endif  // INTENTKIT_ERROR_H_
