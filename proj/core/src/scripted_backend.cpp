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

#include "medsim/case_io.hpp"
#include "medsim/error.hpp"

namespace medsim {

ScriptBook ScriptBook::from_json(const nlohmann::json& j, bool strict) {
  if (!j.is_object()) throw Error(Errc::ConfigError, "script book must be a JSON object of tag -> responses");
  ScriptBook book;
  book.strict = strict;
  for (const auto& [tag, value] : j.items()) {
    std::vector<std::string> queue;
    auto push = [&](const nlohmann::json& v) {
      queue.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    };
    if (value.is_array()) {
      for (const auto& v : value) push(v);
    } else {
      push(value);
    }
    book.entries.emplace(tag, std::move(queue));
  }
  return book;
}

ScriptBook ScriptBook::load(const std::filesystem::path& path, bool strict) {
  return from_json(read_json_file(path), strict);
}

ScriptedChatBackend::ScriptedChatBackend(ScriptBook book) : book_(std::move(book)) {}

namespace {

std::vector<std::string> qualifiers_for(const std::string& scope) {
  std::vector<std::string> out;
  if (!scope.empty()) {
    out.push_back(scope);
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const auto slash = scope.find('/', start);
      parts.push_back(scope.substr(start, slash == std::string::npos ? std::string::npos : slash - start));
      if (slash == std::string::npos) break;
      start = slash + 1;
    }
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      if (!it->empty() && std::find(out.begin(), out.end(), *it) == out.end()) out.push_back(*it);
    }
  }
  out.emplace_back();
  return out;
}

std::vector<std::string> tag_variants(const std::string& tag, bool strict) {
  std::vector<std::string> out{tag};
  if (strict) return out;
  std::string t = tag;
  for (auto colon = t.rfind(':'); colon != std::string::npos; colon = t.rfind(':')) {
    t.resize(colon);
    out.push_back(t);
  }
  return out;
}

}  // namespace

ChatResponse ScriptedChatBackend::complete(const ChatRequest& request) {
  std::lock_guard lock(mutex_);
  for (const auto& tag : tag_variants(request.tag, book_.strict)) {
    for (const auto& q : qualifiers_for(request.scope)) {
      const std::string key = q.empty() ? tag : q + "|" + tag;
      auto it = book_.entries.find(key);
      if (it == book_.entries.end() || it->second.empty()) continue;
      auto& cursor = cursors_[{request.scope, key}];
      const auto& queue = it->second;
      if (cursor >= queue.size()) {
        if (book_.strict) continue;
        return ChatResponse{queue.back(), {{"script_key", key}}};
      }
      return ChatResponse{queue[cursor++], {{"script_key", key}}};
    }
  }
  throw Error(Errc::ScriptMiss, "no scripted response left for tag '" + request.tag + "'" +
                                    (request.scope.empty() ? std::string{} : " in scope '" + request.scope + "'"));
}

std::string ScriptedChatBackend::describe() const {
  return std::string("scripted(") + (book_.strict ? "strict" : "lenient") + ", " +
         std::to_string(book_.entries.size()) + " tags)";
}

void ScriptedChatBackend::rewind() {
  std::lock_guard lock(mutex_);
  cursors_.clear();
}

RecordingChatBackend::RecordingChatBackend(std::shared_ptr<ChatBackend> inner) : inner_(std::move(inner)) {}

ChatResponse RecordingChatBackend::complete(const ChatRequest& request) {
  auto response = inner_->complete(request);
  std::lock_guard lock(mutex_);
  log_.push_back(Exchange{request, response.content});
  return response;
}

std::string RecordingChatBackend::describe() const { return "recording(" + inner_->describe() + ")"; }

std::vector<RecordingChatBackend::Exchange> RecordingChatBackend::exchanges() const {
  std::lock_guard lock(mutex_);
  return log_;
}

std::vector<RecordingChatBackend::Exchange> RecordingChatBackend::with_tag_prefix(std::string_view prefix) const {
  std::lock_guard lock(mutex_);
  std::vector<Exchange> out;
  for (const auto& e : log_) {
    if (e.request.tag.rfind(prefix, 0) == 0) out.push_back(e);
  }
  return out;
}

}  // namespace medsim
