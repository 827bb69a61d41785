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

#ifndef INTENTKIT_HTTP_PROVIDER_H_
#define INTENTKIT_HTTP_PROVIDER_H_

#include <string>

#include "intentkit/embedding.h"
#include "intentkit/llm_gateway.h"

namespace intentkit {

// Shared transport settings for remote providers.
//
// Wire format (JSON over HTTP POST):
//   complete: {"prompt", "temperature", "top_p", "max_tokens": int|null,
//              "stop": [string]} -> {"text": string}
//   score:    {"prompt", "target"} -> {"logprobs": [number]}
//   embed:    {"texts": [string]} -> {"vectors": [[number]], "dimension": int}
//
// A response object with a string "refusal" field, or status 403/451, is a
// refusal. Scoring returning 404/501 means the backend cannot score. Other
// non-2xx statuses are transport errors. Only timeouts are retried, at most
// `max_retries` times with exponential backoff.
struct HttpEndpointConfig {
  std::string id = "remote";
  std::string base_url;  // scheme://host[:port]
  std::string complete_path = "/v1/complete";
  std::string score_path = "/v1/score";
  std::string embed_path = "/v1/embed";
  // Name of the environment variable holding the bearer token; empty for
  // no Authorization header.
  std::string token_env;
  int timeout_ms = 30000;
  int max_retries = 2;
  int backoff_ms = 200;
  bool scoring = true;
};

class HttpCompletionProvider : public CompletionProvider {
 public:
  explicit HttpCompletionProvider(HttpEndpointConfig config);

  std::string id() const override { return config_.id; }
  bool supports_scoring() const override { return config_.scoring; }

  // Backend-defined defaults apply to anything the request leaves unset
  // (max_tokens null).
  static std::string EncodeCompleteRequest(const CompletionRequest& request);

 protected:
  std::string DoComplete(const CompletionRequest& request) const override;
  std::vector<double> DoScore(const std::string& prompt,
                              const std::string& target) const override;

 private:
  HttpEndpointConfig config_;
};

// Vectors are re-normalized to unit length on arrival; a response whose
// dimension differs from `dimension` is a malformed-response error.
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(HttpEndpointConfig config, std::size_t dimension);

  std::string id() const override { return config_.id; }
  std::size_t dimension() const override { return dimension_; }
  std::vector<EmbeddingVector> EmbedBatch(
      std::span<const std::string> texts) const override;

 private:
  HttpEndpointConfig config_;
  std::size_t dimension_;
};

}  // namespace intentkit

#endif  // INTENTKIT_HTTP_PROVIDER_H_
