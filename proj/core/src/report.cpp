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
#include <cmath>
#include <cstdio>
#include <functional>

#include "medsim/error.hpp"
#include "medsim/harness.hpp"
#include "medsim/text.hpp"

namespace medsim {

namespace {

using json = nlohmann::json;

struct Tally {
  std::string label;
  std::uint64_t completed = 0;
  std::uint64_t success = 0;
  std::uint64_t failed = 0;
  std::uint64_t judge_failures = 0;
  LikertCounts sat, con, lr;
  double rouge = 0, sim = 0, recall = 0;
  std::uint64_t solutions = 0;
};

TestResult guarded(const std::function<TestResult()>& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateTable && e.code() != Errc::EmptyCounts) throw;
    return {0.0, 1.0, 0.0, "degenerate"};
  }
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string percent(double v) {
  if (std::abs(v - std::round(v)) < 1e-9) return fixed(std::round(v), 0) + "%";
  return fixed(v, 2) + "%";
}

std::size_t display_width(std::string_view s) { return text::decode_utf8(s).size(); }

std::string pad(const std::string& s, std::size_t width, bool left) {
  const auto w = display_width(s);
  if (w >= width) return s;
  const std::string fill(width - w, ' ');
  return left ? s + fill : fill + s;
}

}  // namespace

Report build_report(const std::vector<RunEvaluation>& evals, const std::string& baseline,
                    LikertContingency contingency) {
  std::vector<Tally> tallies;
  auto tally_for = [&](const std::string& label) -> Tally& {
    for (auto& t : tallies) {
      if (t.label == label) return t;
    }
    Tally t;
    t.label = label;
    tallies.push_back(std::move(t));
    return tallies.back();
  };
  for (const auto& e : evals) {
    auto& t = tally_for(e.setting);
    if (!e.completed) {
      ++t.failed;
      continue;
    }
    ++t.completed;
    if (all_accept(e.decisions)) ++t.success;
    for (auto l : e.satisfaction) t.sat.add(l);
    if (e.consensus) t.con.add(e.consensus->level);
    if (e.litigation_risk) t.lr.add(e.litigation_risk->level);
    if (!e.consensus || !e.litigation_risk) ++t.judge_failures;
    if (e.solution) {
      t.rouge += e.solution->contention_rouge_l;
      t.sim += e.solution->contention_similarity;
      t.recall += e.solution->bases_recall;
      ++t.solutions;
    }
  }

  const Tally* base = nullptr;
  if (!baseline.empty()) {
    const auto it = std::find_if(tallies.begin(), tallies.end(), [&](const Tally& t) { return t.label == baseline; });
    if (it == tallies.end() || it->completed == 0) {
      throw Error(Errc::MissingBaseline, "no completed runs for baseline setting '" + baseline + "'");
    }
    std::rotate(tallies.begin(), it, it + 1);
    base = &tallies.front();
  }

  Report report;
  report.baseline = baseline;
  report.contingency = contingency;
  for (const auto& t : tallies) {
    SettingRow row;
    row.label = t.label;
    auto& o = row.outcome;
    o.n_total = t.completed;
    o.n_success = t.success;
    o.failed_sessions = t.failed;
    o.satisfaction_counts = t.sat;
    o.consensus_counts = t.con;
    o.litigation_counts = t.lr;
    if (t.completed) o.success_rate = success_rate(t.success, t.completed);
    if (t.sat.total()) o.satisfaction = likert_aggregate(t.sat);
    if (t.con.total()) o.consensus = likert_aggregate(t.con);
    if (t.lr.total()) o.litigation_risk = likert_aggregate(t.lr);
    row.judge_failures = t.judge_failures;
    row.solutions = t.solutions;
    if (t.solutions) {
      const auto n = static_cast<double>(t.solutions);
      row.mean_rouge_l = t.rouge / n;
      row.mean_similarity = t.sim / n;
      row.mean_bases_recall = t.recall / n;
    }
    if (base && &t != base && t.completed) {
      row.tests["SR"] = guarded([&] {
        return chi_squared_test({{double(base->success), double(base->completed - base->success)},
                                 {double(t.success), double(t.completed - t.success)}});
      });
      row.tests["Sat"] = guarded([&] { return likert_significance(base->sat.c, t.sat.c, contingency); });
      row.tests["Con"] = guarded([&] { return likert_significance(base->con.c, t.con.c, contingency); });
      row.tests["LR"] = guarded([&] { return likert_significance(base->lr.c, t.lr.c, contingency); });
      for (const auto& [metric, test] : row.tests) row.marks[metric] = significance_mark(test.p_value);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

json report_to_json(const Report& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    const auto& o = row.outcome;
    json tests = json::object();
    for (const auto& [metric, t] : row.tests) {
      tests[metric] = {{"statistic", t.statistic},
                       {"p_value", t.p_value},
                       {"df", t.df},
                       {"method", t.method},
                       {"mark", row.marks.at(metric)}};
    }
    rows.push_back({{"setting", row.label},
                    {"SR", o.success_rate},
                    {"Sat", o.satisfaction},
                    {"Con", o.consensus},
                    {"LR", o.litigation_risk},
                    {"n_total", o.n_total},
                    {"n_success", o.n_success},
                    {"failed_sessions", o.failed_sessions},
                    {"judge_failures", row.judge_failures},
                    {"likert_counts",
                     {{"Sat", o.satisfaction_counts.c}, {"Con", o.consensus_counts.c}, {"LR", o.litigation_counts.c}}},
                    {"solution",
                     {{"n", row.solutions},
                      {"contention_rouge_l", row.mean_rouge_l},
                      {"contention_similarity", row.mean_similarity},
                      {"bases_recall", row.mean_bases_recall}}},
                    {"tests", std::move(tests)}});
  }
  return {{"baseline", r.baseline},
          {"likert_test", r.contingency == LikertContingency::Full ? "chi2_2x5" : "chi2_dichotomized"},
          {"settings", std::move(rows)}};
}

std::string render_report_table(const Report& r) {
  const std::vector<std::string> header{"Setting", "SR↑",     "Sat↑", "Con↑", "LR↓",
                                        "ROUGE-L", "Sim",     "Recall", "N",  "Failed"};
  std::vector<std::vector<std::string>> cells{header};
  auto with_mark = [](const SettingRow& row, const char* metric, std::string value) {
    if (auto it = row.marks.find(metric); it != row.marks.end()) value += it->second;
    return value;
  };
  for (const auto& row : r.rows) {
    const auto& o = row.outcome;
    const bool any = o.n_total > 0;
    cells.push_back({row.label,
                     any ? with_mark(row, "SR", percent(o.success_rate)) : "-",
                     o.satisfaction_counts.total() ? with_mark(row, "Sat", fixed(o.satisfaction, 2)) : "-",
                     o.consensus_counts.total() ? with_mark(row, "Con", fixed(o.consensus, 2)) : "-",
                     o.litigation_counts.total() ? with_mark(row, "LR", fixed(o.litigation_risk, 2)) : "-",
                     row.solutions ? fixed(row.mean_rouge_l, 4) : "-",
                     row.solutions ? fixed(row.mean_similarity, 4) : "-",
                     row.solutions ? fixed(row.mean_bases_recall, 4) : "-",
                     std::to_string(o.n_total),
                     std::to_string(o.failed_sessions)});
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) widths[i] = std::max(widths[i], display_width(line[i]));
  }
  std::string out;
  for (std::size_t l = 0; l < cells.size(); ++l) {
    for (std::size_t i = 0; i < cells[l].size(); ++i) {
      if (i) out += "  ";
      out += pad(cells[l][i], widths[i], i == 0);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
    if (l == 0) {
      std::size_t total = 0;
      for (auto w : widths) total += w;
      out += std::string(total + 2 * (widths.size() - 1), '-') + '\n';
    }
  }
  if (!r.baseline.empty()) {
    out += "† p < 0.05, †† p < 0.01 against '" + r.baseline + "' (chi-squared; Likert columns use the " +
           (r.contingency == LikertContingency::Full ? std::string("2x5 table") : std::string("dichotomized 2x2 table")) +
           ").\n";
  }
  return out;
}

}  // namespace medsim
