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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "medsim/agents.hpp"
#include "medsim/model.hpp"
#include "medsim/perturb.hpp"

namespace medsim {

struct RunFailure {
  std::string code;
  std::string message;
};

/// One persisted cell. On disk this is JSONL with one record per line, in
/// order: meta, case, profiles, [perturbation], utterance*, outcome | failure.
struct RunFile {
  std::string plan;
  std::string setting;
  std::string case_id;
  std::uint32_t run = 0;
  std::uint64_t seed = 0;
  DisputeCase dispute;  // as simulated, after any cause injection
  std::vector<PartyProfile> parties;
  MediatorProfile mediator;
  std::optional<CauseInjectionRecord> perturbation;
  std::vector<Utterance> utterances;
  std::optional<SessionOutcome> outcome;
  std::optional<RunFailure> failure;

  [[nodiscard]] bool complete() const { return outcome.has_value(); }
  [[nodiscard]] Transcript transcript() const;
};

void to_json(nlohmann::json& j, const PartyProfile& p);
void from_json(const nlohmann::json& j, PartyProfile& p);

std::vector<nlohmann::json> run_file_records(const RunFile& f);
RunFile run_file_from_records(const std::vector<nlohmann::json>& records);

void write_run_file(const std::filesystem::path& path, const RunFile& f);
RunFile read_run_file(const std::filesystem::path& path);
/// True when `path` exists and ends with an outcome record.
bool run_file_complete(const std::filesystem::path& path);

/// <runs_dir>/<case_id>/<setting>-r<run>.jsonl
std::filesystem::path run_file_path(const std::filesystem::path& runs_dir, std::string_view setting,
                                    std::string_view case_id, std::uint32_t run);
/// Every *.jsonl run file below `runs_dir`, sorted by path.
std::vector<std::filesystem::path> list_run_files(const std::filesystem::path& runs_dir);

}  // namespace medsim
