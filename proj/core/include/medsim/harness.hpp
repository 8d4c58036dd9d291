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

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "medsim/evaluate.hpp"
#include "medsim/orchestrator.hpp"
#include "medsim/perturb.hpp"
#include "medsim/provider_config.hpp"
#include "medsim/stats.hpp"
#include "medsim/transcript_io.hpp"

namespace medsim {

struct StrategySetting {
  TKIMode mode = TKIMode::Competing;
  ReplaceCount num = ReplaceCount::One;
};

struct Setting {
  std::string label;
  std::optional<StrategySetting> strategy;
  std::optional<std::string> cause;  // top-level cause to inject
  MediatorProfile mediator;
  SessionConfig session;
  std::uint32_t runs_per_case = 1;
};

struct ExperimentPlan {
  std::string name;
  std::filesystem::path corpus;
  std::uint64_t seed = 0;
  std::filesystem::path runs_dir;  // default <plan dir>/runs/<name>
  std::optional<std::size_t> case_limit;
  nlohmann::json providers = nlohmann::json::object();
  std::vector<Setting> settings;
  std::optional<std::filesystem::path> taxonomy;
  std::optional<std::filesystem::path> prompts_dir;
  std::filesystem::path base_dir;  // relative provider paths resolve here
};

/// Parses and validates a plan. Unknown keys, bad values and duplicate
/// setting labels throw Errc::PlanInvalid with the offending field path.
ExperimentPlan plan_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
ExperimentPlan load_plan(const std::filesystem::path& path);

struct RunRecord {
  std::string plan;
  std::string setting;
  std::string case_id;
  std::uint32_t run = 0;
  std::filesystem::path path;
  std::optional<SessionOutcome> outcome;
  std::optional<RunFailure> failure;
  bool resumed = false;  // completed by an earlier invocation
  std::chrono::milliseconds elapsed{0};
};

/// Scope string used for scripted replay and seeding: <setting>/<case>/r<run>.
std::string cell_scope(std::string_view setting, std::string_view case_id, std::uint32_t run);
std::uint64_t cell_seed(std::uint64_t plan_seed, std::string_view setting, std::string_view case_id,
                        std::uint32_t run);

struct RunOptions {
  std::size_t workers = 1;
  /// Overrides plan.providers when set.
  std::optional<ProviderSet> providers;
};

/// Runs every (setting, case, run) cell not already completed on disk. Each
/// cell is written atomically to its own file. Failures are recorded and
/// never stop the batch. Records come back in cell order.
std::vector<RunRecord> run_experiment(const ExperimentPlan& plan, const RunOptions& options = {});

/// Judge output and derived metrics for one persisted cell.
struct RunEvaluation {
  std::string setting;
  std::string case_id;
  std::uint32_t run = 0;
  bool completed = false;
  std::string failure;  // failure code for incomplete runs or judge errors
  std::vector<Decision> decisions;
  std::vector<LikertLevel> satisfaction;
  std::optional<JudgeRating> consensus;
  std::optional<JudgeRating> litigation_risk;
  std::optional<SolutionReport> solution;
};
void to_json(nlohmann::json& j, const RunEvaluation& e);
void from_json(const nlohmann::json& j, RunEvaluation& e);

struct EvalOptions {
  std::size_t workers = 1;
  const PromptLibrary* prompts = nullptr;
};

/// Judges every run file below `runs_dir` with `judge` (consensus and
/// litigation risk) and scores solutions with `scorer`. Output is sorted by
/// (setting, case, run).
std::vector<RunEvaluation> evaluate_runs(const std::filesystem::path& runs_dir, ChatBackend& judge,
                                         const SimilarityScorer& scorer, const EvalOptions& options = {});

struct SettingRow {
  std::string label;
  OutcomeReport outcome;
  std::uint64_t judge_failures = 0;
  double mean_rouge_l = 0.0;
  double mean_similarity = 0.0;
  double mean_bases_recall = 0.0;
  std::uint64_t solutions = 0;
  std::map<std::string, TestResult> tests;  // metric -> test vs baseline
  std::map<std::string, std::string> marks;
};

struct Report {
  std::string baseline;
  LikertContingency contingency = LikertContingency::Full;
  std::vector<SettingRow> rows;
};

/// Aggregates evaluations per setting (first-appearance order, baseline
/// first). SR is over completed sessions; Sat, Con and LR pool Likert counts.
/// With a non-empty baseline each other row is tested against it (chi-squared
/// on success/failure for SR, on the Likert contingency for the rest).
/// Throws MissingBaseline when the baseline setting has no completed runs.
Report build_report(const std::vector<RunEvaluation>& evals, const std::string& baseline,
                    LikertContingency contingency = LikertContingency::Full);
nlohmann::json report_to_json(const Report& r);
/// Fixed-width table: Setting, SR↑, Sat↑, Con↑, LR↓, then solution columns and
/// failure counts. Marks follow the value.
std::string render_report_table(const Report& r);

}  // namespace medsim
