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

// medsim command-line front end.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "medsim/case_io.hpp"
#include "medsim/error.hpp"
#include "medsim/harness.hpp"
#include "medsim/perturb.hpp"
#include "medsim/preprocess.hpp"
#include "medsim/provider_config.hpp"
#include "medsim/rng.hpp"
#include "medsim/stats.hpp"
#include "medsim/transcript_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kConfig = 2;

int cmd_preprocess(const fs::path& in, const fs::path& out, const fs::path& provider) {
  auto chat = medsim::load_chat_backend(provider);
  const auto raws = medsim::load_raw_corpus(in);
  std::vector<medsim::DisputeCase> cases;
  int failures = 0;
  for (std::size_t i = 0; i < raws.size(); ++i) {
    const auto id = raws[i].id.empty() ? "case-" + std::to_string(i + 1) : raws[i].id;
    try {
      cases.push_back(medsim::extract_structured(raws[i], *chat, medsim::CallOptions{id}, id));
    } catch (const medsim::Error& e) {
      ++failures;
      std::cerr << "preprocess " << id << ": " << e.what() << "\n";
    }
  }
  medsim::save_corpus(out, cases);
  std::cout << "wrote " << cases.size() << " cases to " << out.string() << " (" << failures << " failed)\n";
  return failures ? kPartial : kOk;
}

int cmd_perturb_cause(const std::string& cause, const fs::path& in, const fs::path& out, const fs::path& provider,
                      const std::string& taxonomy_path, const std::string& records_path) {
  auto chat = medsim::load_chat_backend(provider);
  const auto taxonomy = medsim::load_taxonomy(taxonomy_path.empty() ? medsim::default_taxonomy_path()
                                                                    : fs::path(taxonomy_path));
  if (!taxonomy.find(cause)) {
    std::cerr << "unknown top-level cause '" << cause << "'\n";
    return kConfig;
  }
  std::vector<medsim::DisputeCase> modified;
  std::vector<json> records;
  int failures = 0;
  for (const auto& c : medsim::load_corpus(in)) {
    try {
      auto [mc, rec] = medsim::inject_cause(c, cause, taxonomy, *chat, medsim::CallOptions{c.id});
      modified.push_back(std::move(mc));
      records.emplace_back(rec);
    } catch (const medsim::Error& e) {
      ++failures;
      std::cerr << "perturb " << c.id << ": " << e.what() << "\n";
    }
  }
  medsim::save_corpus(out, modified);
  if (!records_path.empty()) medsim::write_jsonl(records_path, records);
  std::cout << "wrote " << modified.size() << " cases to " << out.string() << " (" << failures << " failed)\n";
  return failures ? kPartial : kOk;
}

int cmd_perturb_strategy(const std::string& mode_name, const std::string& num_name, std::uint64_t seed,
                         const fs::path& in, const fs::path& out) {
  const auto mode = medsim::parse_mode(mode_name);
  const auto num = medsim::parse_replace_count(num_name);
  if (!mode || !num) {
    std::cerr << "unknown --mode or --num\n";
    return kConfig;
  }
  std::vector<json> rows;
  for (const auto& c : medsim::load_corpus(in)) {
    medsim::Rng rng(medsim::derive_seed(seed, {c.id}));
    const auto profiles = medsim::assign_strategies(medsim::default_profiles(c), *mode, *num, rng);
    rows.push_back({{"case_id", c.id}, {"parties", profiles}});
  }
  medsim::write_jsonl(out, rows);
  std::cout << "wrote " << rows.size() << " profile sets to " << out.string() << "\n";
  return kOk;
}

int cmd_run(const fs::path& plan_path, std::size_t workers) {
  const auto plan = medsim::load_plan(plan_path);
  const auto records = medsim::run_experiment(plan, {workers, std::nullopt});
  std::size_t done = 0, resumed = 0, failed = 0;
  for (const auto& r : records) {
    if (r.outcome) ++done;
    if (r.resumed) ++resumed;
    if (r.failure) {
      ++failed;
      std::cerr << r.setting << "/" << r.case_id << "/r" << r.run << ": " << r.failure->code << ": "
                << r.failure->message << "\n";
    }
  }
  std::cout << plan.name << ": " << records.size() << " cells, " << done << " completed (" << resumed
            << " from earlier runs), " << failed << " failed; transcripts in " << plan.runs_dir.string() << "\n";
  return failed ? kPartial : kOk;
}

int cmd_eval(const fs::path& runs, const fs::path& judge_path, const std::string& scorer_path, const fs::path& out,
             std::size_t workers) {
  auto judge = medsim::load_chat_backend(judge_path);
  medsim::SimilarityScorer scorer;
  if (!scorer_path.empty()) {
    scorer = medsim::make_scorer(medsim::read_json_file(scorer_path), fs::path(scorer_path).parent_path());
  }
  const auto evals = medsim::evaluate_runs(runs, *judge, scorer, {workers, nullptr});
  json rows = json::array();
  std::size_t problems = 0;
  for (const auto& e : evals) {
    rows.push_back(e);
    if (!e.failure.empty()) ++problems;
  }
  medsim::write_file_atomic(out, json{{"runs", runs.string()}, {"evaluations", rows}}.dump(2) + "\n");
  std::cout << "evaluated " << evals.size() << " runs into " << out.string() << " (" << problems
            << " incomplete or unjudged)\n";
  return problems ? kPartial : kOk;
}

int cmd_report(const fs::path& evals_path, const std::string& baseline, const fs::path& out_dir, bool dichotomized) {
  const auto doc = medsim::read_json_file(evals_path);
  const auto evals = doc.at("evaluations").get<std::vector<medsim::RunEvaluation>>();
  const auto report = medsim::build_report(
      evals, baseline, dichotomized ? medsim::LikertContingency::Dichotomized : medsim::LikertContingency::Full);
  const auto table = medsim::render_report_table(report);
  medsim::write_file_atomic(out_dir / "report.json", medsim::report_to_json(report).dump(2) + "\n");
  medsim::write_file_atomic(out_dir / "report.txt", table);
  std::cout << table;
  return kOk;
}

int cmd_stats(const std::string& test, const fs::path& in) {
  const auto data = medsim::read_json_file(in);
  json out;
  auto result_json = [](const medsim::TestResult& r) {
    return json{{"statistic", r.statistic}, {"p_value", r.p_value}, {"df", r.df}, {"method", r.method},
                {"mark", medsim::significance_mark(r.p_value)}};
  };
  if (test == "chi2") {
    out = result_json(medsim::chi_squared_test(data.at("table").get<std::vector<std::vector<double>>>()));
  } else if (test == "ttest") {
    out = result_json(medsim::paired_t_test(data.at("a").get<std::vector<double>>(),
                                            data.at("b").get<std::vector<double>>()));
  } else if (test == "kappa") {
    const auto k = medsim::cohens_kappa(data.at("a").get<std::vector<std::string>>(),
                                        data.at("b").get<std::vector<std::string>>());
    out = {{"kappa", k.kappa}, {"degenerate", k.degenerate}};
  } else if (test == "corr") {
    const auto c = medsim::correlations(data.at("x").get<std::vector<double>>(), data.at("y").get<std::vector<double>>());
    out = {{"pearson", c.pearson ? json(*c.pearson) : json()},
           {"spearman", c.spearman ? json(*c.spearman) : json()},
           {"kendall_tau", c.kendall_tau ? json(*c.kendall_tau) : json()},
           {"warnings", c.warnings}};
  } else {
    std::cerr << "unknown test '" << test << "'\n";
    return kConfig;
  }
  std::cout << out.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-party mediation simulator"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Only log errors");

  std::string in, out, provider, plan, runs, judge, scorer, baseline = "default", cause, taxonomy, records, mode,
                                                                     num = "one", test;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  bool dichotomized = false;

  auto* pre = app.add_subcommand("preprocess", "Extract structured cases from raw records");
  pre->add_option("--in", in, "Raw cases (JSONL)")->required();
  pre->add_option("--out", out, "Structured cases (JSONL)")->required();
  pre->add_option("--provider", provider, "Chat provider description (JSON)")->required();

  auto* perturb = app.add_subcommand("perturb", "Apply controlled interventions");
  perturb->require_subcommand(1);
  auto* pcause = perturb->add_subcommand("cause", "Inject or amplify a dispute cause");
  pcause->add_option("--cause", cause, "Top-level cause")->required();
  pcause->add_option("--in", in, "Cases (JSONL)")->required();
  pcause->add_option("--out", out, "Modified cases (JSONL)")->required();
  pcause->add_option("--provider", provider, "Chat provider description (JSON)")->required();
  pcause->add_option("--taxonomy", taxonomy, "Taxonomy file (default: shipped)");
  pcause->add_option("--records", records, "Write injection records (JSONL)");
  auto* pstrat = perturb->add_subcommand("strategy", "Assign a conflict-handling mode to parties");
  pstrat->add_option("--mode", mode, "Competing, Collaborating, Compromising, Avoiding or Accommodating")->required();
  pstrat->add_option("--num", num, "one or all");
  pstrat->add_option("--seed", seed, "Seed");
  pstrat->add_option("--in", in, "Cases (JSONL)")->required();
  pstrat->add_option("--out", out, "Party profiles (JSONL)")->required();

  auto* run = app.add_subcommand("run", "Execute an experiment plan");
  run->add_option("--plan", plan, "Plan file (JSON)")->required();
  run->add_option("--workers", workers, "Concurrent sessions")->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "Judge persisted runs");
  eval->add_option("--runs", runs, "Runs directory")->required();
  eval->add_option("--judge", judge, "Judge provider description (JSON)")->required();
  eval->add_option("--scorer", scorer, "Similarity scorer description (JSON)");
  eval->add_option("--out", out, "Evaluation output (JSON)")->required();
  eval->add_option("--workers", workers, "Concurrent judge calls")->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "Build outcome tables from evaluations");
  report->add_option("--evals", in, "Evaluation file from 'eval'")->required();
  report->add_option("--baseline", baseline, "Setting to test against ('' for none)");
  report->add_option("--out", out, "Output directory")->required();
  report->add_flag("--dichotomized", dichotomized, "Test Likert columns on a 2x2 (>= Medium) table");

  auto* stats = app.add_subcommand("stats", "Run a statistical test on JSON input");
  stats->add_option("--test", test, "chi2, ttest, kappa or corr")->required()->check(
      CLI::IsMember({"chi2", "ttest", "kappa", "corr"}));
  stats->add_option("--in", in, "Input data (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }
  spdlog::set_level(quiet ? spdlog::level::err : spdlog::level::info);

  try {
    if (*pre) return cmd_preprocess(in, out, provider);
    if (*pcause) return cmd_perturb_cause(cause, in, out, provider, taxonomy, records);
    if (*pstrat) return cmd_perturb_strategy(mode, num, seed, in, out);
    if (*run) return cmd_run(plan, workers);
    if (*eval) return cmd_eval(runs, judge, scorer, out, workers);
    if (*report) return cmd_report(in, baseline, out, dichotomized);
    if (*stats) return cmd_stats(test, in);
  } catch (const medsim::Error& e) {
    std::cerr << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
