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

#include "medsim/providers.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "medsim/error.hpp"

namespace medsim {

std::string_view to_string(MessageRole role) noexcept {
  switch (role) {
    case MessageRole::System: return "system";
    case MessageRole::User: return "user";
    case MessageRole::Assistant: return "assistant";
  }
  return "user";
}

ChatResponse chat_complete(const ChatRequest& request, ChatBackend& backend) {
  if (request.messages.empty()) {
    throw Error(Errc::PreconditionViolation, "chat request '" + request.tag + "' has no messages");
  }
  if (!(request.temperature >= 0.0)) {
    throw Error(Errc::PreconditionViolation, "chat request '" + request.tag + "' has a negative temperature");
  }
  if (request.max_tokens && *request.max_tokens <= 0) {
    throw Error(Errc::PreconditionViolation, "chat request '" + request.tag + "' has non-positive max_tokens");
  }
  return backend.complete(request);
}

nlohmann::json to_wire(const ChatRequest& request, std::string_view model) {
  nlohmann::json messages = nlohmann::json::array();
  if (!request.system_prompt.empty()) {
    messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
  }
  for (const auto& m : request.messages) {
    messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  nlohmann::json body{{"model", model}, {"messages", messages}, {"temperature", request.temperature}};
  if (request.max_tokens) body["max_tokens"] = *request.max_tokens;
  return body;
}

std::string content_from_wire(const nlohmann::json& body) {
  const auto* choices = body.is_object() && body.contains("choices") ? &body["choices"] : nullptr;
  if (!choices || !choices->is_array() || choices->empty()) {
    throw Error(Errc::MalformedResponse, "response has no choices");
  }
  const auto& first = (*choices)[0];
  if (!first.is_object() || !first.contains("message") || !first["message"].is_object() ||
      !first["message"].contains("content") || !first["message"]["content"].is_string()) {
    throw Error(Errc::MalformedResponse, "first choice has no message content");
  }
  return first["message"]["content"].get<std::string>();
}

std::vector<std::chrono::milliseconds> backoff_schedule(const RetryPolicy& policy) {
  std::vector<std::chrono::milliseconds> delays;
  double d = static_cast<double>(policy.base_delay.count());
  const double cap = static_cast<double>(policy.max_delay.count());
  const double mult = std::max(1.0, policy.multiplier);
  for (int attempt = 1; attempt < policy.max_attempts; ++attempt) {
    delays.emplace_back(static_cast<long long>(std::min(d, cap)));
    d *= mult;
  }
  return delays;
}

Sleeper real_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

}  // namespace medsim
