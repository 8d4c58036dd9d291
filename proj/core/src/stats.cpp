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

#include "medsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "medsim/error.hpp"

namespace medsim {

double chi_squared_sf(double x, double df) {
  if (!(df > 0)) throw Error(Errc::PreconditionViolation, "chi-squared df must be positive");
  if (x <= 0) return 1.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0)) throw Error(Errc::PreconditionViolation, "t df must be positive");
  if (t == 0) return 1.0;
  return boost::math::ibeta(df / 2.0, 0.5, df / (df + t * t));
}

TestResult chi_squared_test(const std::vector<std::vector<double>>& table) {
  if (table.size() < 2 || table.front().size() < 2) {
    throw Error(Errc::DegenerateTable, "chi-squared test needs at least a 2x2 table");
  }
  const std::size_t r = table.size();
  const std::size_t k = table.front().size();
  std::vector<double> rows(r, 0.0), cols(k, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    if (table[i].size() != k) throw Error(Errc::DegenerateTable, "ragged contingency table");
    for (std::size_t j = 0; j < k; ++j) {
      const double o = table[i][j];
      if (o < 0 || !std::isfinite(o)) throw Error(Errc::DegenerateTable, "counts must be finite and non-negative");
      rows[i] += o;
      cols[j] += o;
      total += o;
    }
  }
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i] <= 0) throw Error(Errc::DegenerateTable, "row " + std::to_string(i) + " sums to zero");
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (cols[j] <= 0) throw Error(Errc::DegenerateTable, "column " + std::to_string(j) + " sums to zero");
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double e = rows[i] * cols[j] / total;
      const double d = table[i][j] - e;
      chi2 += d * d / e;
    }
  }
  const double df = static_cast<double>((r - 1) * (k - 1));
  return {chi2, chi_squared_sf(chi2, df), df, "pearson_chi2"};
}

TestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error(Errc::LengthMismatch, "paired samples differ in length");
  if (a.size() < 2) throw Error(Errc::LengthMismatch, "paired t-test needs at least two pairs");
  const auto n = static_cast<double>(a.size());
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);
  if (std::all_of(d.begin(), d.end(), [&](double x) { return x == d.front(); }) || ss == 0.0) {
    throw Error(Errc::ZeroVariance, "all paired differences are equal");
  }
  const double sd = std::sqrt(ss / (n - 1));
  const double t = mean / (sd / std::sqrt(n));
  const double df = n - 1;
  return {t, student_t_two_sided_p(t, df), df, "paired_t_two_sided"};
}

KappaResult cohens_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() != b.size() || a.empty()) throw Error(Errc::LengthMismatch, "kappa needs two equal, non-empty lists");
  const auto n = static_cast<double>(a.size());
  std::map<std::string, double> ca, cb;
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]] += 1;
    cb[b[i]] += 1;
    if (a[i] == b[i]) agree += 1;
  }
  double pe = 0.0;
  for (const auto& [label, count] : ca) {
    if (auto it = cb.find(label); it != cb.end()) pe += (count / n) * (it->second / n);
  }
  const double po = agree / n;
  if (pe >= 1.0) return {1.0, true};
  return {(po - pe) / (1.0 - pe), false};
}

namespace {

void check_pair(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(Errc::LengthMismatch, "correlation inputs differ in length");
  if (x.size() < 2) throw Error(Errc::LengthMismatch, "correlation needs at least two points");
}

bool constant(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  check_pair(x, y);
  if (constant(x) || constant(y)) throw Error(Errc::ConstantInput, "pearson needs non-constant inputs");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[idx[m]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  check_pair(x, y);
  if (constant(x) || constant(y)) throw Error(Errc::ConstantInput, "spearman needs non-constant inputs");
  return pearson(average_ranks(x), average_ranks(y));
}

double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  check_pair(x, y);
  if (constant(x) || constant(y)) throw Error(Errc::ConstantInput, "kendall needs non-constant inputs");
  double concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ties_x += 1;
      } else if (dy == 0) {
        ties_y += 1;
      } else if ((dx > 0) == (dy > 0)) {
        concordant += 1;
      } else {
        discordant += 1;
      }
    }
  }
  const double denom = std::sqrt((concordant + discordant + ties_x) * (concordant + discordant + ties_y));
  return std::clamp((concordant - discordant) / denom, -1.0, 1.0);
}

Correlations correlations(const std::vector<double>& x, const std::vector<double>& y) {
  check_pair(x, y);
  Correlations c;
  auto attempt = [&](std::optional<double>& slot, const char* name, auto fn) {
    try {
      slot = fn(x, y);
    } catch (const Error& e) {
      if (e.code() != Errc::ConstantInput) throw;
      c.warnings.push_back(std::string(name) + ": " + e.what());
    }
  };
  attempt(c.pearson, "pearson", pearson);
  attempt(c.spearman, "spearman", spearman);
  attempt(c.kendall_tau, "kendall_tau", kendall_tau_b);
  return c;
}

VoteResult majority_vote(const std::vector<std::vector<std::string>>& ratings) {
  if (ratings.size() < 3) throw Error(Errc::PreconditionViolation, "majority vote needs at least three raters");
  const std::size_t n = ratings.front().size();
  for (const auto& r : ratings) {
    if (r.size() != n) throw Error(Errc::LengthMismatch, "raters labelled different numbers of items");
  }
  VoteResult out;
  out.labels.reserve(n);
  out.tie.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> order;
    std::map<std::string, std::size_t> counts;
    for (const auto& r : ratings) {
      if (counts[r[i]]++ == 0) order.push_back(r[i]);
    }
    std::size_t best = 0;
    for (const auto& [_, c] : counts) best = std::max(best, c);
    std::vector<std::string> tied;
    for (const auto& l : order) {
      if (counts[l] == best) tied.push_back(l);
    }
    if (tied.size() == 1) {
      out.labels.push_back(tied.front());
      out.tie.push_back(false);
      continue;
    }
    std::optional<std::pair<LikertLevel, std::string>> lowest;
    bool all_likert = true;
    for (const auto& l : tied) {
      try {
        const auto lv = likert_from_label(l);
        if (!lowest || score(lv) < score(lowest->first)) lowest = std::make_pair(lv, l);
      } catch (const Error&) {
        all_likert = false;
        break;
      }
    }
    out.labels.push_back(all_likert && lowest ? lowest->second : tied.front());
    out.tie.push_back(true);
  }
  return out;
}

TestResult likert_significance(const std::array<std::uint64_t, 5>& a, const std::array<std::uint64_t, 5>& b,
                               LikertContingency mode) {
  std::vector<std::vector<double>> table(2);
  if (mode == LikertContingency::Dichotomized) {
    for (const auto* counts : {&a, &b}) {
      auto& row = table[counts == &a ? 0 : 1];
      row = {static_cast<double>((*counts)[0] + (*counts)[1]),
             static_cast<double>((*counts)[2] + (*counts)[3] + (*counts)[4])};
    }
  } else {
    for (std::size_t j = 0; j < 5; ++j) {
      if (a[j] + b[j] == 0) continue;
      table[0].push_back(static_cast<double>(a[j]));
      table[1].push_back(static_cast<double>(b[j]));
    }
  }
  if (table[0].size() < 2 || (table[0][0] + table[1][0] == 0) || (table[0][1] + table[1][1] == 0)) {
    // a single populated category: the two distributions cannot differ
    return {0.0, 1.0, 0.0, mode == LikertContingency::Full ? "pearson_chi2_2x5" : "pearson_chi2_2x2"};
  }
  auto r = chi_squared_test(table);
  r.method = mode == LikertContingency::Full ? "pearson_chi2_2x5" : "pearson_chi2_2x2";
  return r;
}

std::string significance_mark(double p) {
  if (p < 0.01) return "††";
  if (p < 0.05) return "†";
  return "";
}

}  // namespace medsim
