/*
 * Copyright 2026 The medsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdlib>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "medsim/error.hpp"
#include "medsim/providers.hpp"

namespace medsim {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(Errc::ConfigError, "endpoint URL needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool retryable(const HttpResult& r) { return r.status == 0 || r.status == 429 || r.status >= 500; }

}  // namespace

HttpResult post_json_with_retry(const HttpEndpoint& endpoint, const nlohmann::json& body,
                                const Sleeper& sleeper, Errc exhausted_code) {
  const auto [origin, path] = split_url(endpoint.url);
  httplib::Headers headers;
  if (!endpoint.api_key_env.empty()) {
    const char* key = std::getenv(endpoint.api_key_env.c_str());
    if (!key || !*key) {
      throw Error(Errc::ConfigError, "environment variable " + endpoint.api_key_env + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const auto payload = body.dump();
  const auto delays = backoff_schedule(endpoint.retry);
  const int attempts = std::max(1, endpoint.retry.max_attempts);

  HttpResult last;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) sleeper(delays[static_cast<std::size_t>(attempt - 1)]);
    httplib::Client client(origin);
    client.set_connection_timeout(endpoint.timeout);
    client.set_read_timeout(endpoint.timeout);
    client.set_write_timeout(endpoint.timeout);
    auto res = client.Post(path, headers, payload, "application/json");
    if (res) {
      last = HttpResult{res->status, res->body, {}};
    } else {
      last = HttpResult{0, {}, httplib::to_string(res.error())};
    }
    if (!retryable(last)) return last;
    spdlog::warn("POST {} attempt {}/{} failed ({})", endpoint.url, attempt + 1, attempts,
                 last.status ? "HTTP " + std::to_string(last.status) : last.error);
  }
  throw Error(exhausted_code, "POST " + endpoint.url + " failed after " + std::to_string(attempts) +
                                  " attempts: " + (last.status ? "HTTP " + std::to_string(last.status) : last.error));
}

HttpChatBackend::HttpChatBackend(HttpChatConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleeper_(std::move(sleeper)) {}

ChatResponse HttpChatBackend::complete(const ChatRequest& request) {
  const auto result =
      post_json_with_retry(config_.endpoint, to_wire(request, config_.model), sleeper_, Errc::ProviderExhausted);
  if (result.status < 200 || result.status >= 300) {
    throw Error(Errc::ProviderExhausted,
                "chat endpoint returned non-retryable HTTP " + std::to_string(result.status) + ": " + result.body);
  }
  auto body = nlohmann::json::parse(result.body, nullptr, false);
  if (body.is_discarded()) throw Error(Errc::MalformedResponse, "chat endpoint returned non-JSON body");
  ChatResponse response;
  response.content = content_from_wire(body);
  response.provider_meta["model"] = body.value("model", config_.model);
  if (body.contains("usage") && body["usage"].is_object()) {
    for (const auto& [k, v] : body["usage"].items()) {
      if (v.is_number_integer()) response.provider_meta[k] = std::to_string(v.get<long long>());
    }
  }
  return response;
}

std::string HttpChatBackend::describe() const { return "http(" + config_.model + " @ " + config_.endpoint.url + ")"; }

}  // namespace medsim
