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

#include <algorithm>
#include <set>

#include "medsim/case_io.hpp"
#include "medsim/error.hpp"
#include "medsim/providers.hpp"
#include "medsim/text.hpp"

namespace medsim {

RetrievalResult retrieve_legal_bases(std::string_view query, std::size_t k, RetrievalBackend& backend) {
  if (k < 1) throw Error(Errc::PreconditionViolation, "retrieval k must be at least 1");
  auto result = backend.retrieve(query, k);
  std::stable_sort(result.bases.begin(), result.bases.end(),
                   [](const ScoredBasis& a, const ScoredBasis& b) { return a.score > b.score; });
  if (result.bases.size() > k) result.bases.resize(k);
  return result;
}

MockRetrieval::MockRetrieval(std::vector<Entry> entries) : entries_(std::move(entries)) {
  description_tokens_.reserve(entries_.size());
  for (const auto& e : entries_) description_tokens_.push_back(text::tokenize(e.description));
}

MockRetrieval MockRetrieval::load(const std::filesystem::path& path) {
  std::vector<Entry> entries;
  std::size_t line = 0;
  for (const auto& row : read_jsonl(path)) {
    ++line;
    if (!row.is_object() || !row.contains("law") || !row.contains("description")) {
      throw Error(Errc::ConfigError, path.string() + " entry " + std::to_string(line) +
                                         " needs 'law' and 'description'");
    }
    Entry e;
    e.basis = row.get<LegalBasis>();
    e.description = row["description"].get<std::string>();
    entries.push_back(std::move(e));
  }
  return MockRetrieval(std::move(entries));
}

RetrievalResult MockRetrieval::retrieve(std::string_view query, std::size_t k) {
  const auto q = text::tokenize(query);
  const std::set<std::string> query_tokens(q.begin(), q.end());
  std::vector<ScoredBasis> scored;
  scored.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const std::set<std::string> desc(description_tokens_[i].begin(), description_tokens_[i].end());
    std::size_t overlap = 0;
    for (const auto& t : query_tokens) overlap += desc.count(t);
    scored.push_back(ScoredBasis{entries_[i].basis, static_cast<double>(overlap)});
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const ScoredBasis& a, const ScoredBasis& b) { return a.score > b.score; });
  if (scored.size() > k) scored.resize(k);
  return RetrievalResult{std::move(scored)};
}

std::string MockRetrieval::describe() const {
  return "mock-retrieval(" + std::to_string(entries_.size()) + " entries)";
}

HttpRetrieval::HttpRetrieval(HttpEndpoint endpoint, Sleeper sleeper)
    : endpoint_(std::move(endpoint)), sleeper_(std::move(sleeper)) {}

RetrievalResult HttpRetrieval::retrieve(std::string_view query, std::size_t k) {
  const nlohmann::json body{{"query", query}, {"k", k}};
  const auto result = post_json_with_retry(endpoint_, body, sleeper_, Errc::RetrievalUnavailable);
  if (result.status < 200 || result.status >= 300) {
    throw Error(Errc::RetrievalUnavailable, "retrieval endpoint returned HTTP " + std::to_string(result.status));
  }
  const auto j = nlohmann::json::parse(result.body, nullptr, false);
  if (j.is_discarded() || !j.contains("bases") || !j["bases"].is_array()) {
    throw Error(Errc::RetrievalUnavailable, "retrieval endpoint returned no 'bases' array");
  }
  RetrievalResult out;
  try {
    for (const auto& b : j["bases"]) {
      out.bases.push_back(ScoredBasis{b.get<LegalBasis>(), b.value("score", 0.0)});
    }
  } catch (const std::exception& e) {
    throw Error(Errc::RetrievalUnavailable, std::string("malformed retrieval entry: ") + e.what());
  }
  return out;
}

std::string HttpRetrieval::describe() const { return "http-retrieval(" + endpoint_.url + ")"; }

}  // namespace medsim
