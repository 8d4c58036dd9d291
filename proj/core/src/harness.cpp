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

#include "medsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

#include "medsim/case_io.hpp"
#include "medsim/error.hpp"
#include "medsim/rng.hpp"

namespace medsim {

namespace {

using json = nlohmann::json;

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw Error(Errc::PlanInvalid, field + ": " + what);
}

void only_keys(const json& j, const std::string& field, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) invalid(field, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      invalid(field.empty() ? key : field + "." + key, "unknown key");
    }
  }
}

std::string join_field(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

template <typename T>
std::optional<T> opt(const json& j, const std::string& parent, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(join_field(parent, key), "wrong type");
  }
}

template <typename T>
T req(const json& j, const std::string& parent, const char* key) {
  auto v = opt<T>(j, parent, key);
  if (!v) invalid(join_field(parent, key), "required");
  return *v;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

Setting setting_from_json(const json& j, const std::string& field) {
  only_keys(j, field, {"label", "strategy", "cause", "mediator", "session", "runs_per_case"});
  Setting s;
  s.label = req<std::string>(j, field, "label");
  if (s.label.empty() || s.label.find_first_of("/\\|") != std::string::npos) {
    invalid(field + ".label", "must be non-empty and free of '/', '\\' and '|'");
  }
  if (j.contains("strategy") && !j.at("strategy").is_null()) {
    const auto f = field + ".strategy";
    const auto& sj = j.at("strategy");
    only_keys(sj, f, {"mode", "num"});
    const auto mode = parse_mode(req<std::string>(sj, f, "mode"));
    if (!mode) invalid(f + ".mode", "unknown TKI mode");
    const auto num = parse_replace_count(opt<std::string>(sj, f, "num").value_or("one"));
    if (!num) invalid(f + ".num", "expected \"one\" or \"all\"");
    s.strategy = StrategySetting{*mode, *num};
  }
  if (j.contains("cause") && !j.at("cause").is_null()) {
    const auto cause = req<std::string>(j, field, "cause");
    const bool known = std::any_of(kCauseTopLevels.begin(), kCauseTopLevels.end(),
                                   [&](std::string_view t) { return t == cause; });
    if (!known) invalid(field + ".cause", "unknown top-level cause '" + cause + "'");
    s.cause = cause;
  }
  if (j.contains("mediator")) {
    const auto f = field + ".mediator";
    const auto& mj = j.at("mediator");
    only_keys(mj, f, {"name", "ek", "top_k"});
    s.mediator.name = opt<std::string>(mj, f, "name").value_or("Mediator");
    s.mediator.external_knowledge = opt<bool>(mj, f, "ek").value_or(false);
    const auto top_k = opt<long long>(mj, f, "top_k").value_or(3);
    if (top_k < 1) invalid(f + ".top_k", "must be >= 1");
    s.mediator.top_k = static_cast<std::size_t>(top_k);
  }
  if (j.contains("session")) {
    const auto f = field + ".session";
    const auto& sj = j.at("session");
    only_keys(sj, f, {"bargaining_rounds_max", "disabled_stages", "dynamic_strategies"});
    const auto rounds = opt<long long>(sj, f, "bargaining_rounds_max").value_or(5);
    if (rounds < 1) invalid(f + ".bargaining_rounds_max", "must be >= 1");
    s.session.bargaining_rounds_max = static_cast<std::uint32_t>(rounds);
    for (const auto& name : opt<std::vector<std::string>>(sj, f, "disabled_stages").value_or(std::vector<std::string>{})) {
      const auto stage = parse_stage(name);
      if (!stage) invalid(f + ".disabled_stages", "unknown stage '" + name + "'");
      s.session.enabled_stages.erase(*stage);
    }
    s.session.dynamic_strategies = opt<bool>(sj, f, "dynamic_strategies").value_or(false);
  }
  try {
    validate_session_config(s.session);
  } catch (const Error& e) {
    invalid(field + ".session", e.what());
  }
  const auto runs = opt<long long>(j, field, "runs_per_case").value_or(1);
  if (runs < 1) invalid(field + ".runs_per_case", "must be >= 1");
  s.runs_per_case = static_cast<std::uint32_t>(runs);
  return s;
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

ExperimentPlan plan_from_json(const json& j, const std::filesystem::path& base_dir) {
  only_keys(j, "", {"name", "corpus", "seed", "runs_dir", "case_limit", "providers", "settings", "taxonomy",
                    "prompts_dir"});
  ExperimentPlan p;
  p.base_dir = base_dir;
  p.name = req<std::string>(j, "", "name");
  if (p.name.empty() || p.name.find_first_of("/\\") != std::string::npos) invalid("name", "must be a plain name");
  p.corpus = resolve(base_dir, req<std::string>(j, "", "corpus"));
  p.seed = opt<std::uint64_t>(j, "", "seed").value_or(0);
  p.runs_dir = resolve(base_dir, opt<std::string>(j, "", "runs_dir").value_or("runs/" + p.name));
  if (const auto limit = opt<long long>(j, "", "case_limit")) {
    if (*limit < 1) invalid("case_limit", "must be >= 1");
    p.case_limit = static_cast<std::size_t>(*limit);
  }
  if (j.contains("providers")) {
    p.providers = j.at("providers");
    try {
      (void)make_provider_set(p.providers, base_dir);
    } catch (const Error& e) {
      throw Error(Errc::PlanInvalid, e.what());
    }
  }
  if (const auto t = opt<std::string>(j, "", "taxonomy")) p.taxonomy = resolve(base_dir, *t);
  if (const auto d = opt<std::string>(j, "", "prompts_dir")) p.prompts_dir = resolve(base_dir, *d);

  if (!j.contains("settings") || !j.at("settings").is_array() || j.at("settings").empty()) {
    invalid("settings", "need a non-empty list");
  }
  std::set<std::string> labels;
  for (std::size_t i = 0; i < j.at("settings").size(); ++i) {
    const auto field = "settings[" + std::to_string(i) + "]";
    auto s = setting_from_json(j.at("settings")[i], field);
    if (!labels.insert(s.label).second) invalid(field + ".label", "duplicate label '" + s.label + "'");
    p.settings.push_back(std::move(s));
  }
  return p;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(Errc::PlanInvalid, "plan file not found: " + path.string());
  json j;
  try {
    j = read_json_file(path);
  } catch (const Error& e) {
    throw Error(Errc::PlanInvalid, e.what());
  }
  return plan_from_json(j, std::filesystem::absolute(path).parent_path());
}

std::string cell_scope(std::string_view setting, std::string_view case_id, std::uint32_t run) {
  return std::string(setting) + "/" + std::string(case_id) + "/r" + std::to_string(run);
}

std::uint64_t cell_seed(std::uint64_t plan_seed, std::string_view setting, std::string_view case_id,
                        std::uint32_t run) {
  const auto run_label = std::to_string(run);
  return derive_seed(plan_seed, {setting, case_id, run_label});
}

std::vector<RunRecord> run_experiment(const ExperimentPlan& plan, const RunOptions& options) {
  auto cases = load_corpus(plan.corpus);
  if (plan.case_limit && cases.size() > *plan.case_limit) cases.resize(*plan.case_limit);

  const ProviderSet providers = options.providers ? *options.providers : make_provider_set(plan.providers, plan.base_dir);
  if (!providers.chat) throw Error(Errc::ConfigError, "plan has no chat provider");
  const bool needs_retrieval = std::any_of(plan.settings.begin(), plan.settings.end(),
                                           [](const Setting& s) { return s.mediator.external_knowledge; });
  if (needs_retrieval && !providers.retrieval) {
    throw Error(Errc::ConfigError, "a setting uses external knowledge but no retrieval provider is configured");
  }
  std::optional<CauseTaxonomy> taxonomy;
  if (std::any_of(plan.settings.begin(), plan.settings.end(), [](const Setting& s) { return s.cause.has_value(); })) {
    taxonomy = load_taxonomy(plan.taxonomy.value_or(default_taxonomy_path()));
  }
  PromptLibrary prompts = PromptLibrary::builtin();
  if (plan.prompts_dir) prompts.load_overrides(*plan.prompts_dir);

  struct Cell {
    const Setting* setting;
    const DisputeCase* dispute;
    std::uint32_t run;
  };
  std::vector<Cell> cells;
  for (const auto& s : plan.settings) {
    for (const auto& c : cases) {
      for (std::uint32_t r = 0; r < s.runs_per_case; ++r) cells.push_back({&s, &c, r});
    }
  }

  std::vector<RunRecord> records(cells.size());
  parallel_for(cells.size(), options.workers, [&](std::size_t i) {
    const auto& cell = cells[i];
    const auto& s = *cell.setting;
    auto& rec = records[i];
    rec.plan = plan.name;
    rec.setting = s.label;
    rec.case_id = cell.dispute->id;
    rec.run = cell.run;
    rec.path = run_file_path(plan.runs_dir, s.label, cell.dispute->id, cell.run);

    if (run_file_complete(rec.path)) {
      const auto f = read_run_file(rec.path);
      rec.outcome = f.outcome;
      rec.resumed = true;
      return;
    }

    const auto started = std::chrono::steady_clock::now();
    RunFile f;
    f.plan = plan.name;
    f.setting = s.label;
    f.case_id = cell.dispute->id;
    f.run = cell.run;
    f.seed = cell_seed(plan.seed, s.label, cell.dispute->id, cell.run);
    f.dispute = *cell.dispute;
    f.mediator = s.mediator;

    const CallOptions opts{cell_scope(s.label, cell.dispute->id, cell.run), &prompts};
    try {
      Rng rng(f.seed);
      f.parties = default_profiles(f.dispute);
      if (s.strategy) f.parties = assign_strategies(f.parties, s.strategy->mode, s.strategy->num, rng);
      if (s.cause) {
        auto [modified, record] = inject_cause(f.dispute, *s.cause, *taxonomy, *providers.chat, opts);
        f.dispute = std::move(modified);
        f.perturbation = std::move(record);
      }
      SessionConfig config = s.session;
      config.seed = f.seed;
      const SessionProviders sp{providers.chat.get(),
                                s.mediator.external_knowledge ? providers.retrieval.get() : nullptr};
      auto result = run_session(f.dispute, f.parties, s.mediator, config, sp, opts, s.label + "-r" + std::to_string(cell.run));
      f.utterances = std::move(result.transcript.utterances);
      f.outcome = std::move(result.outcome);
    } catch (const SessionAborted& e) {
      f.utterances = e.partial().utterances;
      f.failure = RunFailure{std::string(errc_name(e.code())), e.what()};
    } catch (const Error& e) {
      f.failure = RunFailure{std::string(errc_name(e.code())), e.what()};
    } catch (const std::exception& e) {
      f.failure = RunFailure{"Internal", e.what()};
    }
    write_run_file(rec.path, f);
    rec.outcome = f.outcome;
    rec.failure = f.failure;
    rec.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  });
  return records;
}

void to_json(json& j, const RunEvaluation& e) {
  j = json{{"setting", e.setting},
           {"case_id", e.case_id},
           {"run", e.run},
           {"completed", e.completed},
           {"failure", e.failure}};
  json decisions = json::array();
  for (auto d : e.decisions) decisions.push_back(std::string(to_string(d)));
  j["decisions"] = std::move(decisions);
  json sat = json::array();
  for (auto l : e.satisfaction) sat.push_back(std::string(label(l)));
  j["satisfaction"] = std::move(sat);
  auto rating = [](const std::optional<JudgeRating>& r) {
    return r ? json{{"level", std::string(label(r->level))}, {"reason", r->reason}} : json();
  };
  j["consensus"] = rating(e.consensus);
  j["litigation_risk"] = rating(e.litigation_risk);
  j["solution"] = e.solution ? json{{"contention_rouge_l", e.solution->contention_rouge_l},
                                    {"contention_similarity", e.solution->contention_similarity},
                                    {"bases_recall", e.solution->bases_recall}}
                             : json();
}

void from_json(const json& j, RunEvaluation& e) {
  e.setting = j.at("setting").get<std::string>();
  e.case_id = j.at("case_id").get<std::string>();
  e.run = j.at("run").get<std::uint32_t>();
  e.completed = j.at("completed").get<bool>();
  e.failure = j.value("failure", std::string{});
  e.decisions.clear();
  for (const auto& d : j.at("decisions")) {
    const auto parsed = parse_decision(d.get<std::string>());
    if (!parsed) throw Error(Errc::UnknownLabel, "unknown decision '" + d.get<std::string>() + "'");
    e.decisions.push_back(*parsed);
  }
  e.satisfaction.clear();
  for (const auto& s : j.at("satisfaction")) e.satisfaction.push_back(likert_from_label(s.get<std::string>()));
  auto rating = [](const json& r) -> std::optional<JudgeRating> {
    if (r.is_null()) return std::nullopt;
    return JudgeRating{likert_from_label(r.at("level").get<std::string>()), r.value("reason", std::string{})};
  };
  e.consensus = rating(j.at("consensus"));
  e.litigation_risk = rating(j.at("litigation_risk"));
  e.solution.reset();
  if (const auto& s = j.at("solution"); !s.is_null()) {
    e.solution = SolutionReport{s.at("contention_rouge_l").get<double>(), s.at("contention_similarity").get<double>(),
                                s.at("bases_recall").get<double>()};
  }
}

std::vector<RunEvaluation> evaluate_runs(const std::filesystem::path& runs_dir, ChatBackend& judge,
                                         const SimilarityScorer& scorer, const EvalOptions& options) {
  const auto files = list_run_files(runs_dir);
  std::vector<RunEvaluation> out(files.size());
  parallel_for(files.size(), options.workers, [&](std::size_t i) {
    const auto f = read_run_file(files[i]);
    auto& e = out[i];
    e.setting = f.setting;
    e.case_id = f.case_id;
    e.run = f.run;
    if (!f.outcome) {
      e.failure = f.failure ? f.failure->code : "Incomplete";
      return;
    }
    e.completed = true;
    for (const auto& party : f.dispute.parties) {
      if (auto it = f.outcome->decisions.find(party); it != f.outcome->decisions.end()) {
        e.decisions.push_back(it->second.decision);
      }
      if (auto it = f.outcome->satisfaction.find(party); it != f.outcome->satisfaction.end()) {
        e.satisfaction.push_back(it->second.level);
      }
    }
    const CallOptions opts{cell_scope(f.setting, f.case_id, f.run), options.prompts};
    const auto transcript = f.transcript();
    try {
      e.consensus = judge_consensus(f.dispute, transcript, f.outcome->proposal, judge, opts);
      e.litigation_risk = judge_litigation_risk(f.dispute, transcript, f.outcome->proposal, judge, opts);
    } catch (const Error& err) {
      e.failure = "judge:" + std::string(errc_name(err.code()));
    }
    try {
      e.solution = evaluate_solution(f.dispute, f.outcome->proposal, scorer);
    } catch (const Error& err) {
      if (e.failure.empty()) e.failure = "solution:" + std::string(errc_name(err.code()));
    }
  });
  std::sort(out.begin(), out.end(), [](const RunEvaluation& a, const RunEvaluation& b) {
    return std::tie(a.setting, a.case_id, a.run) < std::tie(b.setting, b.case_id, b.run);
  });
  return out;
}

}  // namespace medsim
