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

#include "intentkit/http_provider.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "intentkit/error.h"

namespace intentkit {

namespace {

using json = nlohmann::json;

std::string ResolveToken(const HttpEndpointConfig& config) {
  if (config.token_env.empty()) return "";
  const char* value = std::getenv(config.token_env.c_str());
  if (value == nullptr || *value == '\0') {
    throw ConfigError("environment variable " + config.token_env +
                      " (bearer token for " + config.id + ") is not set");
  }
  return value;
}

void CheckBaseUrl(const HttpEndpointConfig& config) {
  std::string why = "https needs a build with OpenSSL";
  bool valid = false;
  try {
    valid = httplib::Client(config.base_url).is_valid();
  } catch (const std::invalid_argument& e) {  // unknown scheme
    why = e.what();
  }
  if (!valid) {
    throw ConfigError("remote provider " + config.id +
                      " has an unusable base_url '" + config.base_url +
                      "': " + why);
  }
}

// POSTs `body` and returns the parsed JSON object. Retries timeouts only.
json PostJson(const HttpEndpointConfig& config, const std::string& path,
              const json& body, const std::string& operation) {
  const std::string token = ResolveToken(config);
  const std::string payload = body.dump();
  const auto timeout = std::chrono::milliseconds(config.timeout_ms);

  for (int attempt = 0;; ++attempt) {
    httplib::Client client(config.base_url);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    if (!token.empty()) client.set_bearer_token_auth(token);

    const auto start = std::chrono::steady_clock::now();
    auto result = client.Post(path, payload, "application/json");
    const auto elapsed = std::chrono::steady_clock::now() - start;

    if (!result) {
      const httplib::Error err = result.error();
      const bool timed_out =
          err == httplib::Error::ConnectionTimeout ||
          (err == httplib::Error::Read && elapsed >= timeout * 9 / 10);
      if (timed_out && attempt < config.max_retries) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(config.backoff_ms) * (1 << attempt));
        continue;
      }
      throw ProviderError(
          timed_out ? ProviderErrorKind::kTimeout : ProviderErrorKind::kTransport,
          config.id, operation,
          httplib::to_string(err) + " after " + std::to_string(attempt + 1) +
              " attempt(s)");
    }

    const int status = result->status;
    if (status == 403 || status == 451) {
      throw ProviderError(ProviderErrorKind::kRefusal, config.id, operation,
                          "HTTP " + std::to_string(status) + ": " +
                              result->body);
    }
    if ((status == 404 || status == 501) && operation == "score_target") {
      throw ProviderError(ProviderErrorKind::kUnsupported, config.id,
                          operation, "HTTP " + std::to_string(status));
    }
    if (status < 200 || status >= 300) {
      throw ProviderError(ProviderErrorKind::kTransport, config.id, operation,
                          "HTTP " + std::to_string(status) + ": " +
                              result->body);
    }

    json doc;
    try {
      doc = json::parse(result->body);
    } catch (const json::parse_error& e) {
      throw ProviderError(ProviderErrorKind::kMalformedResponse, config.id,
                          operation, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
      throw ProviderError(ProviderErrorKind::kMalformedResponse, config.id,
                          operation, "response is not a JSON object");
    }
    if (doc.contains("refusal") && doc["refusal"].is_string()) {
      throw ProviderError(ProviderErrorKind::kRefusal, config.id, operation,
                          doc["refusal"].get<std::string>());
    }
    return doc;
  }
}

[[noreturn]] void Malformed(const HttpEndpointConfig& config,
                            const std::string& operation,
                            const std::string& detail) {
  throw ProviderError(ProviderErrorKind::kMalformedResponse, config.id,
                      operation, detail);
}

}  // namespace

HttpCompletionProvider::HttpCompletionProvider(HttpEndpointConfig config)
    : config_(std::move(config)) {
  if (config_.base_url.empty()) {
    throw ConfigError("remote provider " + config_.id + " has no base_url");
  }
  CheckBaseUrl(config_);
  ResolveToken(config_);
}

std::string HttpCompletionProvider::EncodeCompleteRequest(
    const CompletionRequest& request) {
  json body;
  body["prompt"] = request.prompt;
  body["temperature"] = request.params.temperature;
  body["top_p"] = request.params.top_p;
  if (request.params.max_tokens) {
    body["max_tokens"] = *request.params.max_tokens;
  } else {
    body["max_tokens"] = nullptr;
  }
  body["stop"] = request.params.stop_sequences;
  return body.dump();
}

std::string HttpCompletionProvider::DoComplete(
    const CompletionRequest& request) const {
  const json doc = PostJson(config_, config_.complete_path,
                            json::parse(EncodeCompleteRequest(request)),
                            "complete");
  if (!doc.contains("text") || !doc["text"].is_string()) {
    Malformed(config_, "complete", "missing string field 'text'");
  }
  return doc["text"].get<std::string>();
}

std::vector<double> HttpCompletionProvider::DoScore(
    const std::string& prompt, const std::string& target) const {
  const json doc = PostJson(config_, config_.score_path,
                            {{"prompt", prompt}, {"target", target}},
                            "score_target");
  if (!doc.contains("logprobs") || !doc["logprobs"].is_array()) {
    Malformed(config_, "score_target", "missing array field 'logprobs'");
  }
  std::vector<double> out;
  for (const auto& v : doc["logprobs"]) {
    if (!v.is_number()) Malformed(config_, "score_target", "non-numeric logprob");
    out.push_back(v.get<double>());
  }
  return out;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(HttpEndpointConfig config,
                                             std::size_t dimension)
    : config_(std::move(config)), dimension_(dimension) {
  if (config_.base_url.empty()) {
    throw ConfigError("remote provider " + config_.id + " has no base_url");
  }
  CheckBaseUrl(config_);
  if (dimension_ == 0) throw ConfigError("embedding dimension must be > 0");
  ResolveToken(config_);
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::EmbedBatch(
    std::span<const std::string> texts) const {
  if (texts.empty()) return {};
  json body;
  body["texts"] = json::array();
  for (const auto& t : texts) body["texts"].push_back(t);
  const json doc = PostJson(config_, config_.embed_path, body, "embed");

  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer()) {
    Malformed(config_, "embed", "missing integer field 'dimension'");
  }
  if (doc["dimension"].get<long long>() != static_cast<long long>(dimension_)) {
    Malformed(config_, "embed",
              "dimension " + doc["dimension"].dump() + " != expected " +
                  std::to_string(dimension_));
  }
  if (!doc.contains("vectors") || !doc["vectors"].is_array() ||
      doc["vectors"].size() != texts.size()) {
    Malformed(config_, "embed", "expected one vector per input text");
  }
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& row : doc["vectors"]) {
    if (!row.is_array() || row.size() != dimension_) {
      Malformed(config_, "embed", "vector length does not match dimension");
    }
    EmbeddingVector v;
    v.values.reserve(dimension_);
    for (const auto& x : row) {
      if (!x.is_number()) Malformed(config_, "embed", "non-numeric component");
      v.values.push_back(x.get<double>());
    }
    if (!NormalizeInPlace(v)) {
      Malformed(config_, "embed", "zero or non-finite vector");
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace intentkit
