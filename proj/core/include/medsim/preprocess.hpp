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
#include <vector>

#include "medsim/agents.hpp"
#include "medsim/model.hpp"

namespace medsim {

/// Fields the extraction model returns; the brief is copied, never extracted.
struct ExtractionResult {
  std::string dispute_type;
  std::vector<std::string> facts;
  std::vector<std::string> parties;
  std::string points_of_contention;
  std::vector<std::string> legal_bases;
};

/// Locates the first complete JSON object in `content` (prose and code fences
/// around it are ignored) and checks the five required keys and their types.
/// Throws Errc::ExtractionParseError naming the offending span.
ExtractionResult parse_extraction(std::string_view content);

/// One tagged request ("extract") embedding title, keywords, brief, method and
/// bases; one re-ask on a bad reply. The brief is copied byte for byte, bases
/// are normalized, and the result is validated (ValidationError on failure).
/// `id` names the resulting case; blank uses raw.id.
DisputeCase extract_structured(const RawCase& raw, ChatBackend& chat, const CallOptions& opts = {},
                               std::string id = {});

}  // namespace medsim
