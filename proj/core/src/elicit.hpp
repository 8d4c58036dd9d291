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

#pragma once

#include <optional>
#include <string>
#include <type_traits>
#include <utility>

#include "medsim/agents.hpp"
#include "medsim/error.hpp"
#include "medsim/json_extract.hpp"

namespace medsim::detail {

inline ChatRequest make_request(std::string system_prompt, std::string user_prompt, std::string tag,
                                const CallOptions& opts) {
  ChatRequest req;
  req.system_prompt = std::move(system_prompt);
  req.messages.push_back(ChatMessage{MessageRole::User, std::move(user_prompt)});
  req.tag = std::move(tag);
  req.scope = opts.scope;
  return req;
}

/// Calls, parses, and on failure re-asks once with the failed reply and a
/// format reminder appended. `parse(content, problem)` returns an optional.
template <typename Parse>
auto elicit(ChatBackend& chat, ChatRequest req, const PromptLibrary& lib, Errc error_code, Parse parse)
    -> std::remove_cvref_t<decltype(*parse(std::string{}, std::declval<std::string&>()))> {
  const auto first = chat_complete(req, chat);
  std::string problem;
  if (auto v = parse(first.content, problem)) return *v;

  req.messages.push_back(ChatMessage{MessageRole::Assistant, first.content});
  req.messages.push_back(ChatMessage{MessageRole::User, lib.render("format_reminder", {{"problem", problem}})});
  const auto second = chat_complete(req, chat);
  problem.clear();
  if (auto v = parse(second.content, problem)) return *v;
  throw Error(error_code, "'" + req.tag + "' after re-ask: " + problem + " (reply: " + excerpt(second.content) + ")");
}

}  // namespace medsim::detail
