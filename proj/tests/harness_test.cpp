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
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "medsim/case_io.hpp"
#include "medsim/error.hpp"
#include "medsim/harness.hpp"
#include "support.hpp"

using namespace medsim;

namespace {

Errc code_of(const std::function<void()>& f, std::string* message = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "expected medsim::Error";
  return Errc::IoError;
}

nlohmann::json plan_json(const std::filesystem::path& runs_dir, const std::string& corpus = "corpus3.jsonl") {
  auto j = read_json_file(support::fixture("plan_scripted.json"));
  j["runs_dir"] = runs_dir.string();
  j["corpus"] = corpus;
  return j;
}

ExperimentPlan plan_at(const std::filesystem::path& runs_dir, const std::string& corpus = "corpus3.jsonl") {
  return plan_from_json(plan_json(runs_dir, corpus), support::fixture(""));
}

RunEvaluation synthetic(const std::string& setting, int i, bool success, LikertLevel level) {
  RunEvaluation e;
  e.setting = setting;
  e.case_id = "c" + std::to_string(i);
  e.completed = true;
  e.decisions = {Decision::Accept, success ? Decision::Accept : Decision::Reject};
  e.satisfaction = {level, level};
  e.consensus = JudgeRating{level, ""};
  e.litigation_risk = JudgeRating{level, ""};
  return e;
}

}  // namespace

TEST(Plan, ShippedDefaultPlan) {
  const auto plan = load_plan(std::filesystem::path(MEDSIM_SOURCE_DIR) / "plans" / "default.json");
  ASSERT_EQ(plan.settings.size(), 1u);
  const auto& s = plan.settings[0];
  EXPECT_EQ(s.label, "default");
  EXPECT_FALSE(s.strategy.has_value());
  EXPECT_FALSE(s.cause.has_value());
  EXPECT_FALSE(s.mediator.external_knowledge);
  EXPECT_EQ(s.session.bargaining_rounds_max, 5u);
  EXPECT_EQ(s.session.enabled_stages.size(), 5u);
}

TEST(Plan, ScriptedFixtureIsValid) {
  const auto plan = plan_at("/tmp/unused");
  ASSERT_EQ(plan.settings.size(), 3u);
  EXPECT_EQ(plan.settings[1].strategy->num, ReplaceCount::All);
  EXPECT_TRUE(plan.settings[2].mediator.external_knowledge);
}

TEST(Plan, DuplicateLabels) {
  auto j = plan_json("/tmp/unused");
  j["settings"][1]["label"] = "default";
  std::string msg;
  EXPECT_EQ(code_of([&] { plan_from_json(j, support::fixture("")); }, &msg), Errc::PlanInvalid);
  EXPECT_NE(msg.find("settings[1].label"), std::string::npos) << msg;
}

TEST(Plan, TopTenRetrievalIsValid) {
  auto j = plan_json("/tmp/unused");
  j["settings"][2]["mediator"]["top_k"] = 10;
  EXPECT_EQ(plan_from_json(j, support::fixture("")).settings[2].mediator.top_k, 10u);
}

TEST(Plan, UnknownKeysNameTheirPath) {
  auto j = plan_json("/tmp/unused");
  j["settings"][2]["mediator"]["colour"] = "blue";
  std::string msg;
  EXPECT_EQ(code_of([&] { plan_from_json(j, support::fixture("")); }, &msg), Errc::PlanInvalid);
  EXPECT_NE(msg.find("settings[2].mediator.colour"), std::string::npos) << msg;

  auto top = plan_json("/tmp/unused");
  top["workers"] = 4;
  EXPECT_EQ(code_of([&] { plan_from_json(top, support::fixture("")); }, &msg), Errc::PlanInvalid);
  EXPECT_NE(msg.find("workers"), std::string::npos) << msg;
}

TEST(Plan, BadValues) {
  for (const auto& [path, value] : std::vector<std::pair<nlohmann::json::json_pointer, nlohmann::json>>{
           {"/settings/0/runs_per_case"_json_pointer, 0},
           {"/settings/1/strategy/mode"_json_pointer, "Aggressive"},
           {"/settings/0/cause"_json_pointer, "Weather"},
           {"/settings/0/session/disabled_stages"_json_pointer, {"Preliminary"}},
           {"/providers/chat/type"_json_pointer, "carrier-pigeon"}}) {
    auto j = plan_json("/tmp/unused");
    j[path] = value;
    EXPECT_EQ(code_of([&] { plan_from_json(j, support::fixture("")); }), Errc::PlanInvalid) << path.to_string();
  }
  EXPECT_EQ(code_of([] { load_plan("/nonexistent/plan.json"); }), Errc::PlanInvalid);
}

TEST(Cells, ScopeAndSeed) {
  EXPECT_EQ(cell_scope("default", "housing", 0), "default/housing/r0");
  EXPECT_EQ(cell_seed(7, "default", "housing", 0), cell_seed(7, "default", "housing", 0));
  std::set<std::uint64_t> seeds;
  for (const char* s : {"default", "competing_all"}) {
    for (const char* c : {"housing", "wages"}) {
      for (std::uint32_t r = 0; r < 3; ++r) seeds.insert(cell_seed(7, s, c, r));
    }
  }
  EXPECT_EQ(seeds.size(), 12u);
  EXPECT_NE(cell_seed(7, "default", "housing", 0), cell_seed(8, "default", "housing", 0));
}

TEST(RunExperiment, CellCount) {
  const auto dir = support::scratch_dir("cells");
  auto j = plan_json(dir, "corpus2.jsonl");
  j["settings"].erase(2);
  const auto records = run_experiment(plan_from_json(j, support::fixture("")));
  ASSERT_EQ(records.size(), 4u);
  std::set<std::tuple<std::string, std::string, std::uint32_t>> keys;
  for (const auto& r : records) {
    keys.insert({r.setting, r.case_id, r.run});
    EXPECT_TRUE(r.outcome.has_value());
    EXPECT_TRUE(run_file_complete(r.path));
  }
  EXPECT_EQ(keys.size(), 4u);
  EXPECT_EQ(list_run_files(dir).size(), 4u);
}

TEST(RunExperiment, RunsPerCase) {
  const auto dir = support::scratch_dir("runs_per_case");
  auto j = plan_json(dir, "corpus2.jsonl");
  j["settings"][0]["runs_per_case"] = 3;
  const auto records = run_experiment(plan_from_json(j, support::fixture("")));
  EXPECT_EQ(records.size(), 2u * 3u + 2u + 2u);
  EXPECT_EQ(list_run_files(dir).size(), records.size());
}

TEST(RunExperiment, ResumeOnlyRunsMissingCells) {
  const auto dir = support::scratch_dir("resume");
  const auto plan = plan_at(dir);
  const auto first = run_experiment(plan);
  ASSERT_EQ(first.size(), 9u);
  const auto before = support::read_tree(dir);

  std::filesystem::remove(first[4].path);
  // A file cut off before its outcome record counts as incomplete.
  {
    auto lines = read_jsonl(first[7].path);
    lines.pop_back();
    write_jsonl(first[7].path, lines);
  }
  const auto second = run_experiment(plan);
  ASSERT_EQ(second.size(), 9u);
  for (std::size_t i = 0; i < second.size(); ++i) {
    EXPECT_EQ(second[i].resumed, i != 4 && i != 7) << i;
  }
  EXPECT_EQ(support::read_tree(dir), before);

  const auto third = run_experiment(plan);
  EXPECT_TRUE(std::all_of(third.begin(), third.end(), [](const RunRecord& r) { return r.resumed; }));
  EXPECT_EQ(list_run_files(dir).size(), 9u);
}

TEST(RunExperiment, WorkerCountDoesNotChangeOutput) {
  const auto one = support::scratch_dir("workers1");
  const auto eight = support::scratch_dir("workers8");
  run_experiment(plan_at(one), RunOptions{1, std::nullopt});
  run_experiment(plan_at(eight), RunOptions{8, std::nullopt});
  const auto a = support::read_tree(one);
  const auto b = support::read_tree(eight);
  EXPECT_EQ(a.size(), 9u);
  EXPECT_EQ(a, b);
}

TEST(RunExperiment, FailuresAreRecordedAndRetried) {
  const auto dir = support::scratch_dir("failures");
  auto plan = plan_at(dir, "corpus2.jsonl");
  ProviderSet broken;
  broken.chat = support::scripted(nlohmann::json{{"mediator_intro", "hello"}}, true);
  broken.retrieval = std::make_shared<MockRetrieval>(MockRetrieval::load(support::fixture("legal_index.jsonl")));
  const auto failed = run_experiment(plan, RunOptions{2, broken});
  ASSERT_EQ(failed.size(), 6u);
  for (const auto& r : failed) {
    ASSERT_TRUE(r.failure.has_value());
    EXPECT_EQ(r.failure->code, "ScriptMiss");
    const auto f = read_run_file(r.path);
    EXPECT_FALSE(f.complete());
    EXPECT_EQ(f.utterances.size(), 2u);
  }
  const auto retried = run_experiment(plan);
  for (const auto& r : retried) {
    EXPECT_FALSE(r.resumed);
    EXPECT_TRUE(r.outcome.has_value());
  }
}

TEST(RunExperiment, CauseAndStrategyPerturbations) {
  const auto dir = support::scratch_dir("perturbations");
  auto j = plan_json(dir, "corpus2.jsonl");
  j["settings"] = {{{"label", "resource"}, {"cause", "Resource Conflict"}},
                   {{"label", "one_avoiding"}, {"strategy", {{"mode", "Avoiding"}, {"num", "one"}}}}};
  const auto records = run_experiment(plan_from_json(j, support::fixture("")));
  const auto corpus = load_corpus(support::fixture("corpus2.jsonl"));
  for (const auto& r : records) {
    const auto f = read_run_file(r.path);
    const auto original = std::find_if(corpus.begin(), corpus.end(), [&](const auto& c) { return c.id == r.case_id; });
    ASSERT_NE(original, corpus.end());
    if (r.setting == "resource") {
      ASSERT_TRUE(f.perturbation.has_value());
      EXPECT_EQ(f.perturbation->subcategory, "Monetary Dispute");
      EXPECT_NE(f.dispute.brief, original->brief);
      auto restored = f.dispute;
      restored.brief = original->brief;
      EXPECT_EQ(restored, *original);
    } else {
      EXPECT_FALSE(f.perturbation.has_value());
      EXPECT_EQ(f.dispute, *original);
      EXPECT_EQ(std::count_if(f.parties.begin(), f.parties.end(),
                              [](const PartyProfile& p) { return p.strategy == TKIMode::Avoiding; }),
                1);
    }
  }
}

TEST(Evaluate, ScriptedBatchToReport) {
  const auto dir = support::scratch_dir("report");
  run_experiment(plan_at(dir), RunOptions{4, std::nullopt});
  auto judge = support::scripted("session_agree.json");
  const auto evals = evaluate_runs(dir, *judge, SimilarityScorer{}, EvalOptions{4, nullptr});
  ASSERT_EQ(evals.size(), 9u);
  for (const auto& e : evals) {
    EXPECT_TRUE(e.completed) << e.setting << "/" << e.case_id << " " << e.failure;
    EXPECT_TRUE(e.consensus.has_value());
    EXPECT_TRUE(e.solution.has_value());
  }
  const auto report = build_report(evals, "default");
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_EQ(report.rows[0].label, "default");
  EXPECT_EQ(report.rows[1].label, "competing_all");
  EXPECT_EQ(report.rows[2].label, "ek_top3");

  // wages rejects in every setting; competing_all parties stay undecided elsewhere.
  // Case-qualified script entries win over setting-qualified ones.
  EXPECT_NEAR(report.rows[0].outcome.success_rate, 200.0 / 3.0, 1e-9);
  EXPECT_DOUBLE_EQ(report.rows[1].outcome.success_rate, 0.0);
  EXPECT_EQ(report.rows[1].outcome.satisfaction_counts.c, (std::array<std::uint64_t, 5>{0, 2, 5, 0, 0}));
  EXPECT_NEAR(report.rows[1].outcome.satisfaction, (2.0 * 1 + 5.0 * 2) / 7 / 4 * 100, 1e-9);
  EXPECT_TRUE(report.rows[1].tests.count("SR"));
  EXPECT_FALSE(report.rows[0].tests.count("SR"));

  const auto evals_again = evaluate_runs(dir, *judge, SimilarityScorer{}, EvalOptions{1, nullptr});
  EXPECT_EQ(render_report_table(build_report(evals_again, "default")), render_report_table(report));
  EXPECT_EQ(report_to_json(build_report(evals_again, "default")).dump(), report_to_json(report).dump());
}

TEST(Evaluate, RoundTrip) {
  auto e = synthetic("default", 1, true, LikertLevel::High);
  e.solution = SolutionReport{0.5, 0.25, 1.0 / 3.0};
  const RunEvaluation back = nlohmann::json(e).get<RunEvaluation>();
  EXPECT_EQ(nlohmann::json(back).dump(), nlohmann::json(e).dump());
}

TEST(Report, EightyTwoPercent) {
  std::vector<RunEvaluation> evals;
  for (int i = 0; i < 100; ++i) evals.push_back(synthetic("default", i, i < 82, LikertLevel::High));
  const auto report = build_report(evals, "default");
  EXPECT_DOUBLE_EQ(report.rows[0].outcome.success_rate, 82.0);
  const auto table = render_report_table(report);
  EXPECT_NE(table.find("82%"), std::string::npos) << table;
}

TEST(Report, IdenticalCountsGetNoMark) {
  std::vector<RunEvaluation> evals;
  for (int i = 0; i < 20; ++i) {
    const auto level = static_cast<LikertLevel>(i % 5);
    evals.push_back(synthetic("default", i, i % 2 == 0, level));
    evals.push_back(synthetic("copy", i, i % 2 == 0, level));
  }
  const auto report = build_report(evals, "default");
  const auto& row = report.rows.at(1);
  for (const auto& metric : {"SR", "Sat", "Con", "LR"}) {
    EXPECT_DOUBLE_EQ(row.tests.at(metric).p_value, 1.0) << metric;
    EXPECT_EQ(row.marks.at(metric), "") << metric;
  }
  const auto table = render_report_table(report);
  const auto start = table.find("copy");
  const auto line = table.substr(start, table.find('\n', start) - start);
  EXPECT_EQ(line.find("†"), std::string::npos) << line;
}

TEST(Report, MarksForLargeDifferences) {
  std::vector<RunEvaluation> evals;
  for (int i = 0; i < 100; ++i) {
    evals.push_back(synthetic("default", i, i < 95, LikertLevel::VeryHigh));
    evals.push_back(synthetic("avoiding", i, i < 29, LikertLevel::Low));
  }
  const auto report = build_report(evals, "default");
  EXPECT_EQ(report.rows[1].marks.at("SR"), "††");
  EXPECT_NE(render_report_table(report).find("29%††"), std::string::npos);
}

TEST(Report, FailedSessionsAreCounted) {
  std::vector<RunEvaluation> evals;
  for (int i = 0; i < 5; ++i) evals.push_back(synthetic("default", i, true, LikertLevel::High));
  RunEvaluation failed;
  failed.setting = "default";
  failed.case_id = "broken";
  failed.failure = "ScriptMiss";
  evals.push_back(failed);
  const auto report = build_report(evals, "default");
  EXPECT_EQ(report.rows[0].outcome.failed_sessions, 1u);
  EXPECT_EQ(report.rows[0].outcome.n_total, 5u);
  EXPECT_DOUBLE_EQ(report.rows[0].outcome.success_rate, 100.0);
  EXPECT_EQ(report_to_json(report)["settings"][0]["failed_sessions"], 1);
  EXPECT_NE(render_report_table(report).find("Failed"), std::string::npos);
}

TEST(Report, MissingBaseline) {
  std::vector<RunEvaluation> evals{synthetic("other", 0, true, LikertLevel::High)};
  EXPECT_EQ(code_of([&] { build_report(evals, "default"); }), Errc::MissingBaseline);
  EXPECT_NO_THROW(build_report(evals, ""));
}
