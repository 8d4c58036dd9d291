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
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace medsim {

/// A balanced {...} span located in free text.
struct ObjectSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the closing brace
};

/// Scans left to right for brace-balanced spans (string literals and escapes
/// respected). Surrounding prose and ``` fences are simply skipped.
std::vector<ObjectSpan> balanced_object_spans(std::string_view text);

/// First balanced span that decodes as a JSON object.
std::optional<nlohmann::json> first_json_object(std::string_view text);

/// First decodable object that has `key` (after trim + case-fold of the
/// object's keys). Model replies often reason in prose, sometimes quoting
/// braces, before the final object.
std::optional<nlohmann::json> find_object_with_key(std::string_view text, std::string_view key);

/// Case/whitespace-insensitive key lookup inside an object.
const nlohmann::json* find_key(const nlohmann::json& obj, std::string_view key);

/// Removes a surrounding ``` / ```json fence if present, then trims.
std::string strip_code_fence(std::string_view text);

/// Short excerpt of a reply for error messages.
std::string excerpt(std::string_view text, std::size_t max_len = 160);

}  // namespace medsim
