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

#include "medsim/json_extract.hpp"

#include "medsim/text.hpp"

namespace medsim {

std::vector<ObjectSpan> balanced_object_spans(std::string_view text) {
  std::vector<ObjectSpan> spans;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '{') {
      ++i;
      continue;
    }
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    std::size_t j = i;
    for (; j < text.size(); ++j) {
      const char c = text[j];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        if (--depth == 0) break;
      }
    }
    if (j >= text.size()) {
      // Unbalanced from here: a later '{' may still open a complete object.
      ++i;
      continue;
    }
    spans.push_back(ObjectSpan{i, j + 1});
    i = j + 1;
  }
  return spans;
}

namespace {

std::optional<nlohmann::json> try_parse(std::string_view s) {
  auto j = nlohmann::json::parse(s, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

// Every '{' is a candidate start: a decodable object may be nested inside an
// outer span that is not itself JSON (prose with braces).
template <typename Pred>
std::optional<nlohmann::json> scan(std::string_view text, Pred accept) {
  for (std::size_t start = text.find('{'); start != std::string_view::npos;
       start = text.find('{', start + 1)) {
    const auto spans = balanced_object_spans(text.substr(start));
    if (spans.empty() || spans.front().begin != 0) continue;
    auto j = try_parse(text.substr(start, spans.front().end));
    if (j && accept(*j)) return j;
  }
  return std::nullopt;
}

}  // namespace

std::optional<nlohmann::json> first_json_object(std::string_view text) {
  return scan(text, [](const nlohmann::json&) { return true; });
}

const nlohmann::json* find_key(const nlohmann::json& obj, std::string_view key) {
  if (!obj.is_object()) return nullptr;
  const auto want = text::label_key(key);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (text::label_key(it.key()) == want) return &it.value();
  }
  return nullptr;
}

std::optional<nlohmann::json> find_object_with_key(std::string_view text, std::string_view key) {
  return scan(text, [&](const nlohmann::json& j) { return find_key(j, key) != nullptr; });
}

std::string strip_code_fence(std::string_view in) {
  std::string s = text::trim(in);
  if (s.rfind("```", 0) == 0) {
    const auto nl = s.find('\n');
    s = nl == std::string::npos ? std::string{} : s.substr(nl + 1);
    const auto close = s.rfind("```");
    if (close != std::string::npos) s.resize(close);
  }
  return text::trim(s);
}

std::string excerpt(std::string_view t, std::size_t max_len) {
  std::string s = text::collapse_whitespace(t);
  if (s.size() > max_len) {
    std::size_t cut = max_len;
    while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
    s = s.substr(0, cut) + "...";
  }
  return s;
}

}  // namespace medsim
