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

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "medsim/error.hpp"
#include "medsim/model.hpp"

namespace medsim {

enum class MessageRole { System, User, Assistant };
std::string_view to_string(MessageRole role) noexcept;

struct ChatMessage {
  MessageRole role = MessageRole::User;
  std::string content;
};

struct ChatRequest {
  std::string system_prompt;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  std::optional<int> max_tokens;
  /// Semantic label scripts key on, e.g. "bargain:Sun:round2".
  std::string tag;
  /// Session namespace ("setting/case/run"). Scripted replay keeps one cursor
  /// per scope so concurrent sessions never observe each other's dequeues.
  std::string scope;
};

struct ChatResponse {
  std::string content;
  std::map<std::string, std::string> provider_meta;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
  [[nodiscard]] virtual std::string describe() const = 0;
};

/// Checks request preconditions (non-empty messages, temperature >= 0) and
/// forwards to the backend.
ChatResponse chat_complete(const ChatRequest& request, ChatBackend& backend);

/// Chat-completions request body: {model, messages[{role, content}],
/// temperature, max_tokens?}. The system prompt becomes the first message.
nlohmann::json to_wire(const ChatRequest& request, std::string_view model);
/// First choice's message content; Errc::MalformedResponse when absent.
std::string content_from_wire(const nlohmann::json& body);

// ---------------------------------------------------------------------------
// Retry policy shared by every HTTP backend.

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{1000};
  double multiplier = 2.0;
  std::chrono::milliseconds max_delay{30000};
};

/// Delays slept before attempts 2..max_attempts; non-decreasing.
std::vector<std::chrono::milliseconds> backoff_schedule(const RetryPolicy& policy);

using Sleeper = std::function<void(std::chrono::milliseconds)>;
Sleeper real_sleeper();

struct HttpEndpoint {
  std::string url;
  std::string api_key_env;  // empty: no Authorization header
  std::chrono::seconds timeout{60};
  RetryPolicy retry;
};

struct HttpResult {
  int status = 0;  // 0: transport failure
  std::string body;
  std::string error;
};

/// POSTs JSON with retries on transport errors, 429 and 5xx. Returns the
/// first non-retryable result; throws `exhausted_code` once attempts run out.
HttpResult post_json_with_retry(const HttpEndpoint& endpoint, const nlohmann::json& body,
                                const Sleeper& sleeper, Errc exhausted_code);

struct HttpChatConfig {
  HttpEndpoint endpoint;
  std::string model;
};

class HttpChatBackend final : public ChatBackend {
 public:
  explicit HttpChatBackend(HttpChatConfig config, Sleeper sleeper = real_sleeper());
  ChatResponse complete(const ChatRequest& request) override;
  [[nodiscard]] std::string describe() const override;

 private:
  HttpChatConfig config_;
  Sleeper sleeper_;
};

// ---------------------------------------------------------------------------
// Scripted replay.

struct ScriptBook {
  std::map<std::string, std::vector<std::string>, std::less<>> entries;
  bool strict = false;

  /// JSON object tag -> array of responses. A bare string stands for a
  /// one-element array; non-string elements are stored as compact JSON text.
  static ScriptBook from_json(const nlohmann::json& j, bool strict);
  static ScriptBook load(const std::filesystem::path& path, bool strict);
};

/// Plays back a ScriptBook.
///
/// Keys may be qualified by scope: "<qualifier>|<tag>", where the qualifier is
/// the full request scope or any single '/'-separated component of it (for
/// example a case id). More specific qualifiers win.
///
/// Strict mode: the tag must match exactly and every response is used once;
/// running out is Errc::ScriptMiss. Lenient mode also tries ':'-truncated
/// tags ("bargain:Sun:round2" -> "bargain:Sun" -> "bargain") and repeats the
/// last response of a drained queue.
class ScriptedChatBackend final : public ChatBackend {
 public:
  explicit ScriptedChatBackend(ScriptBook book);
  ChatResponse complete(const ChatRequest& request) override;
  [[nodiscard]] std::string describe() const override;

  /// Cursor state is per scope; this forgets all of it.
  void rewind();

 private:
  ScriptBook book_;
  std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, std::size_t> cursors_;
};

/// Decorator that keeps a copy of every request and response, in call order.
class RecordingChatBackend final : public ChatBackend {
 public:
  explicit RecordingChatBackend(std::shared_ptr<ChatBackend> inner);
  ChatResponse complete(const ChatRequest& request) override;
  [[nodiscard]] std::string describe() const override;

  struct Exchange {
    ChatRequest request;
    std::string response;
  };
  [[nodiscard]] std::vector<Exchange> exchanges() const;
  /// Exchanges whose tag starts with `prefix`.
  [[nodiscard]] std::vector<Exchange> with_tag_prefix(std::string_view prefix) const;

 private:
  std::shared_ptr<ChatBackend> inner_;
  mutable std::mutex mutex_;
  std::vector<Exchange> log_;
};

// ---------------------------------------------------------------------------
// Legal-basis retrieval.

struct ScoredBasis {
  LegalBasis basis;
  double score = 0.0;
};

/// Sorted by descending score, at most k entries.
struct RetrievalResult {
  std::vector<ScoredBasis> bases;
};

class RetrievalBackend {
 public:
  virtual ~RetrievalBackend() = default;
  virtual RetrievalResult retrieve(std::string_view query, std::size_t k) = 0;
  [[nodiscard]] virtual std::string describe() const = 0;
};

/// Requires k >= 1; enforces ordering and the length bound on whatever the
/// backend returns (stable sort, so backend tie order is kept).
RetrievalResult retrieve_legal_bases(std::string_view query, std::size_t k, RetrievalBackend& backend);

/// File-backed index: score = number of distinct query tokens that also occur
/// in the entry's description; ties keep index order.
class MockRetrieval final : public RetrievalBackend {
 public:
  struct Entry {
    LegalBasis basis;
    std::string description;
  };

  explicit MockRetrieval(std::vector<Entry> entries);
  /// JSON Lines of {law, article, description}.
  static MockRetrieval load(const std::filesystem::path& path);

  RetrievalResult retrieve(std::string_view query, std::size_t k) override;
  [[nodiscard]] std::string describe() const override;
  [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
  std::vector<std::vector<std::string>> description_tokens_;
};

/// POST {"query", "k"} -> {"bases": [{law, article, score}]}.
class HttpRetrieval final : public RetrievalBackend {
 public:
  explicit HttpRetrieval(HttpEndpoint endpoint, Sleeper sleeper = real_sleeper());
  RetrievalResult retrieve(std::string_view query, std::size_t k) override;
  [[nodiscard]] std::string describe() const override;

 private:
  HttpEndpoint endpoint_;
  Sleeper sleeper_;
};

}  // namespace medsim
