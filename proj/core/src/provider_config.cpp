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

#include "medsim/provider_config.hpp"

#include <cstdlib>
#include <set>

#include "medsim/case_io.hpp"
#include "medsim/error.hpp"

namespace medsim {

namespace {

using json = nlohmann::json;

void only_keys(const json& spec, const std::string& field, std::initializer_list<std::string_view> allowed) {
  if (!spec.is_object()) throw Error(Errc::ConfigError, field + ": expected an object");
  for (const auto& [key, _] : spec.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(Errc::ConfigError, field + "." + key + ": unknown key");
    }
  }
}

template <typename T>
T get_or(const json& spec, const std::string& field, const char* key, T fallback) {
  if (!spec.contains(key)) return fallback;
  try {
    return spec.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::ConfigError, field + "." + key + ": wrong type");
  }
}

std::string type_of(const json& spec, const std::string& field) {
  if (!spec.is_object() || !spec.contains("type") || !spec.at("type").is_string()) {
    throw Error(Errc::ConfigError, field + ".type: missing");
  }
  return spec.at("type").get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

HttpEndpoint endpoint_from(const json& spec, const std::string& field) {
  HttpEndpoint ep;
  ep.url = get_or<std::string>(spec, field, "url", "");
  if (const auto var = get_or<std::string>(spec, field, "url_env", ""); !var.empty()) {
    if (const char* v = std::getenv(var.c_str()); v && *v) ep.url = v;
  }
  if (ep.url.empty()) throw Error(Errc::ConfigError, field + ".url: missing");
  ep.api_key_env = get_or<std::string>(spec, field, "api_key_env", "");
  ep.timeout = std::chrono::seconds(get_or<int>(spec, field, "timeout_s", 60));
  if (spec.contains("retry")) {
    const auto& r = spec.at("retry");
    const auto rf = field + ".retry";
    only_keys(r, rf, {"max_attempts", "base_delay_ms", "multiplier", "max_delay_ms"});
    ep.retry.max_attempts = get_or<int>(r, rf, "max_attempts", ep.retry.max_attempts);
    ep.retry.base_delay = std::chrono::milliseconds(get_or<long>(r, rf, "base_delay_ms", 1000));
    ep.retry.multiplier = get_or<double>(r, rf, "multiplier", ep.retry.multiplier);
    ep.retry.max_delay = std::chrono::milliseconds(get_or<long>(r, rf, "max_delay_ms", 30000));
    if (ep.retry.max_attempts < 1) throw Error(Errc::ConfigError, rf + ".max_attempts: must be >= 1");
  }
  return ep;
}

}  // namespace

std::shared_ptr<ChatBackend> make_chat_backend(const json& spec, const std::filesystem::path& base_dir,
                                               const std::string& field) {
  const auto type = type_of(spec, field);
  if (type == "scripted") {
    only_keys(spec, field, {"type", "script", "strict"});
    const auto script = get_or<std::string>(spec, field, "script", "");
    if (script.empty()) throw Error(Errc::ConfigError, field + ".script: missing");
    return std::make_shared<ScriptedChatBackend>(
        ScriptBook::load(resolve(base_dir, script), get_or<bool>(spec, field, "strict", false)));
  }
  if (type == "http") {
    only_keys(spec, field, {"type", "url", "url_env", "model", "model_env", "api_key_env", "timeout_s", "retry"});
    auto model = get_or<std::string>(spec, field, "model", "");
    if (const auto var = get_or<std::string>(spec, field, "model_env", ""); !var.empty()) {
      if (const char* v = std::getenv(var.c_str()); v && *v) model = v;
    }
    if (model.empty()) throw Error(Errc::ConfigError, field + ".model: missing");
    return std::make_shared<HttpChatBackend>(HttpChatConfig{endpoint_from(spec, field), model});
  }
  throw Error(Errc::ConfigError, field + ".type: unknown chat backend '" + type + "'");
}

std::shared_ptr<RetrievalBackend> make_retrieval_backend(const json& spec, const std::filesystem::path& base_dir,
                                                         const std::string& field) {
  const auto type = type_of(spec, field);
  if (type == "mock") {
    only_keys(spec, field, {"type", "index"});
    const auto index = get_or<std::string>(spec, field, "index", "");
    if (index.empty()) throw Error(Errc::ConfigError, field + ".index: missing");
    return std::make_shared<MockRetrieval>(MockRetrieval::load(resolve(base_dir, index)));
  }
  if (type == "http") {
    only_keys(spec, field, {"type", "url", "url_env", "api_key_env", "timeout_s", "retry"});
    return std::make_shared<HttpRetrieval>(endpoint_from(spec, field));
  }
  throw Error(Errc::ConfigError, field + ".type: unknown retrieval backend '" + type + "'");
}

SimilarityScorer make_scorer(const json& spec, const std::filesystem::path& base_dir, const std::string& field) {
  const auto type = type_of(spec, field);
  if (type == "token_f1") {
    only_keys(spec, field, {"type"});
    return SimilarityScorer{};
  }
  if (type == "embedding_http") {
    only_keys(spec, field, {"type", "url", "url_env", "model", "api_key_env", "timeout_s", "retry"});
    return SimilarityScorer(std::make_shared<HttpEmbeddingBackend>(endpoint_from(spec, field),
                                                                   get_or<std::string>(spec, field, "model", "")));
  }
  if (type == "embedding_fixture") {
    only_keys(spec, field, {"type", "vectors"});
    if (!spec.contains("vectors")) throw Error(Errc::ConfigError, field + ".vectors: missing");
    json table = spec.at("vectors");
    if (table.is_string()) table = read_json_file(resolve(base_dir, table.get<std::string>()));
    try {
      return SimilarityScorer(
          std::make_shared<FixtureEmbeddingBackend>(table.get<std::map<std::string, std::vector<double>>>()));
    } catch (const json::exception&) {
      throw Error(Errc::ConfigError, field + ".vectors: expected {text: [numbers]}");
    }
  }
  throw Error(Errc::ConfigError, field + ".type: unknown scorer '" + type + "'");
}

ProviderSet make_provider_set(const json& spec, const std::filesystem::path& base_dir, const std::string& field) {
  only_keys(spec, field, {"chat", "judge", "retrieval", "scorer"});
  ProviderSet set;
  if (spec.contains("chat")) set.chat = make_chat_backend(spec.at("chat"), base_dir, field + ".chat");
  if (spec.contains("judge")) set.judge = make_chat_backend(spec.at("judge"), base_dir, field + ".judge");
  if (spec.contains("retrieval")) {
    set.retrieval = make_retrieval_backend(spec.at("retrieval"), base_dir, field + ".retrieval");
  }
  if (spec.contains("scorer")) set.scorer = make_scorer(spec.at("scorer"), base_dir, field + ".scorer");
  return set;
}

std::shared_ptr<ChatBackend> load_chat_backend(const std::filesystem::path& path) {
  return make_chat_backend(read_json_file(path), path.parent_path(), path.filename().string());
}

}  // namespace medsim
