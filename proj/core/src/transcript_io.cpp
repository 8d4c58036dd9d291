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

#include "medsim/transcript_io.hpp"

#include <algorithm>

#include "medsim/case_io.hpp"
#include "medsim/error.hpp"

namespace medsim {

Transcript RunFile::transcript() const {
  Transcript t;
  t.case_id = case_id;
  t.run_id = setting + "-r" + std::to_string(run);
  t.utterances = utterances;
  return t;
}

void to_json(nlohmann::json& j, const PartyProfile& p) {
  j = nlohmann::json{{"name", p.name},
                     {"stance", p.stance},
                     {"strategy", p.strategy ? nlohmann::json(std::string(to_string(*p.strategy))) : nlohmann::json()},
                     {"dynamic", p.dynamic}};
}

void from_json(const nlohmann::json& j, PartyProfile& p) {
  p.name = j.at("name").get<std::string>();
  p.stance = j.value("stance", std::string{});
  p.strategy.reset();
  if (j.contains("strategy") && !j.at("strategy").is_null()) {
    const auto s = j.at("strategy").get<std::string>();
    p.strategy = parse_mode(s);
    if (!p.strategy) throw Error(Errc::UnknownLabel, "unknown strategy '" + s + "'");
  }
  p.dynamic = j.value("dynamic", false);
}

std::vector<nlohmann::json> run_file_records(const RunFile& f) {
  std::vector<nlohmann::json> out;
  out.push_back({{"type", "meta"},
                 {"plan", f.plan},
                 {"setting", f.setting},
                 {"case_id", f.case_id},
                 {"run", f.run},
                 {"seed", f.seed}});
  out.push_back({{"type", "case"}, {"case", f.dispute}});
  out.push_back({{"type", "profiles"},
                 {"parties", f.parties},
                 {"mediator",
                  {{"name", f.mediator.name},
                   {"external_knowledge", f.mediator.external_knowledge},
                   {"top_k", f.mediator.top_k}}}});
  if (f.perturbation) out.push_back({{"type", "perturbation"}, {"cause", *f.perturbation}});
  for (const auto& u : f.utterances) {
    nlohmann::json row = u;
    row["type"] = "utterance";
    out.push_back(std::move(row));
  }
  if (f.outcome) {
    out.push_back({{"type", "outcome"}, {"outcome", *f.outcome}});
  } else if (f.failure) {
    out.push_back({{"type", "failure"}, {"code", f.failure->code}, {"message", f.failure->message}});
  }
  return out;
}

RunFile run_file_from_records(const std::vector<nlohmann::json>& records) {
  RunFile f;
  bool saw_meta = false;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto type = r.value("type", std::string{});
    try {
      if (type == "meta") {
        f.plan = r.at("plan").get<std::string>();
        f.setting = r.at("setting").get<std::string>();
        f.case_id = r.at("case_id").get<std::string>();
        f.run = r.at("run").get<std::uint32_t>();
        f.seed = r.at("seed").get<std::uint64_t>();
        saw_meta = true;
      } else if (type == "case") {
        f.dispute = r.at("case").get<DisputeCase>();
      } else if (type == "profiles") {
        f.parties = r.at("parties").get<std::vector<PartyProfile>>();
        const auto& m = r.at("mediator");
        f.mediator.name = m.value("name", std::string("Mediator"));
        f.mediator.external_knowledge = m.value("external_knowledge", false);
        f.mediator.top_k = m.value("top_k", std::size_t{3});
      } else if (type == "perturbation") {
        f.perturbation = r.at("cause").get<CauseInjectionRecord>();
      } else if (type == "utterance") {
        f.utterances.push_back(r.get<Utterance>());
      } else if (type == "outcome") {
        f.outcome = r.at("outcome").get<SessionOutcome>();
      } else if (type == "failure") {
        f.failure = RunFailure{r.at("code").get<std::string>(), r.at("message").get<std::string>()};
      } else {
        throw Error(Errc::IoError, "unknown record type '" + type + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::IoError, "record " + std::to_string(i + 1) + " (" + type + "): " + e.what());
    }
  }
  if (!saw_meta) throw Error(Errc::IoError, "run file has no meta record");
  return f;
}

void write_run_file(const std::filesystem::path& path, const RunFile& f) { write_jsonl(path, run_file_records(f)); }

RunFile read_run_file(const std::filesystem::path& path) {
  try {
    return run_file_from_records(read_jsonl(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

bool run_file_complete(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return false;
  try {
    const auto rows = read_jsonl(path);
    return !rows.empty() && rows.back().value("type", std::string{}) == "outcome";
  } catch (const std::exception&) {
    return false;
  }
}

std::filesystem::path run_file_path(const std::filesystem::path& runs_dir, std::string_view setting,
                                    std::string_view case_id, std::uint32_t run) {
  return runs_dir / std::string(case_id) / (std::string(setting) + "-r" + std::to_string(run) + ".jsonl");
}

std::vector<std::filesystem::path> list_run_files(const std::filesystem::path& runs_dir) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::exists(runs_dir)) return out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(runs_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".jsonl") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace medsim
