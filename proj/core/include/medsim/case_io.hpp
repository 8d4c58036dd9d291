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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "medsim/model.hpp"

namespace medsim {

// JSON mappings picked up by nlohmann::json via ADL.
void to_json(nlohmann::json& j, const LegalBasis& b);
void from_json(const nlohmann::json& j, LegalBasis& b);
void to_json(nlohmann::json& j, const RawCase& c);
void from_json(const nlohmann::json& j, RawCase& c);
void to_json(nlohmann::json& j, const DisputeCase& c);
void from_json(const nlohmann::json& j, DisputeCase& c);
void to_json(nlohmann::json& j, const Utterance& u);
void from_json(const nlohmann::json& j, Utterance& u);
void to_json(nlohmann::json& j, const MediationProposal& p);
void from_json(const nlohmann::json& j, MediationProposal& p);
void to_json(nlohmann::json& j, const SessionOutcome& o);
void from_json(const nlohmann::json& j, SessionOutcome& o);

/// One JSON value per non-blank line. Errors carry the 1-based line number.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows);
/// Writes to a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Corpus loading: every case is decoded and validated; ids must be unique.
std::vector<DisputeCase> load_corpus(const std::filesystem::path& path);
void save_corpus(const std::filesystem::path& path, const std::vector<DisputeCase>& cases);
std::vector<RawCase> load_raw_corpus(const std::filesystem::path& path);

}  // namespace medsim
