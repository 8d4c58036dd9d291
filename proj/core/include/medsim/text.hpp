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

#include <string>
#include <string_view>
#include <vector>

namespace medsim::text {

// All text is UTF-8. Case folding is ASCII-only; non-ASCII code points pass
// through unchanged.

bool is_space(char32_t cp) noexcept;
bool is_punct(char32_t cp) noexcept;
/// CJK ideographs, kana and hangul: scripts written without word spaces.
bool is_cjk(char32_t cp) noexcept;

std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);

std::string trim(std::string_view s);
/// Trim, then replace every internal whitespace run by one ASCII space.
std::string collapse_whitespace(std::string_view s);
std::string casefold(std::string_view s);
/// trim + case-fold, the comparison key for closed label sets.
std::string label_key(std::string_view s);

bool contains_folded(std::string_view haystack, std::string_view needle);

/// Tokens for overlap metrics. Whitespace and punctuation separate tokens;
/// CJK code points are single tokens. A text without whitespace that contains
/// non-ASCII characters is split into per-code-point tokens (punctuation
/// dropped). ASCII letters are lowercased.
std::vector<std::string> tokenize(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace medsim::text
