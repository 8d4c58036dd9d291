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

#include <filesystem>
#include <memory>

#include <nlohmann/json.hpp>

#include "medsim/evaluate.hpp"
#include "medsim/providers.hpp"

namespace medsim {

/// Backends built from JSON descriptions. Relative file paths resolve against
/// `base_dir`. Unknown keys or types throw Errc::ConfigError naming the field.
///
/// chat / judge:
///   {"type": "scripted", "script": "book.json", "strict": false}
///   {"type": "http", "url": "...", "url_env": "VAR", "model": "...", "model_env": "VAR",
///    "api_key_env": "VAR", "timeout_s": 60,
///    "retry": {"max_attempts", "base_delay_ms", "multiplier", "max_delay_ms"}}
/// retrieval:
///   {"type": "mock", "index": "index.jsonl"} | {"type": "http", "url": ...}
/// scorer:
///   {"type": "token_f1"} | {"type": "embedding_http", "url", "model", ...}
///   | {"type": "embedding_fixture", "vectors": {text: [..]} or "file.json"}
std::shared_ptr<ChatBackend> make_chat_backend(const nlohmann::json& spec, const std::filesystem::path& base_dir,
                                               const std::string& field = "chat");
std::shared_ptr<RetrievalBackend> make_retrieval_backend(const nlohmann::json& spec,
                                                         const std::filesystem::path& base_dir,
                                                         const std::string& field = "retrieval");
SimilarityScorer make_scorer(const nlohmann::json& spec, const std::filesystem::path& base_dir,
                             const std::string& field = "scorer");

/// {"chat", "judge", "retrieval", "scorer"}, every entry optional.
struct ProviderSet {
  std::shared_ptr<ChatBackend> chat;
  std::shared_ptr<ChatBackend> judge;
  std::shared_ptr<RetrievalBackend> retrieval;
  SimilarityScorer scorer;
};
ProviderSet make_provider_set(const nlohmann::json& spec, const std::filesystem::path& base_dir,
                              const std::string& field = "providers");

/// Reads a provider description file; its directory becomes base_dir.
std::shared_ptr<ChatBackend> load_chat_backend(const std::filesystem::path& path);

}  // namespace medsim
