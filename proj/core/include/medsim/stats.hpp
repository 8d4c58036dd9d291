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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "medsim/model.hpp"

namespace medsim {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double df = 0.0;
  std::string method;
};

/// Upper tail of the chi-squared distribution, Q(df/2, x/2).
double chi_squared_sf(double x, double df);
/// Two-sided Student-t p-value, I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

/// Pearson chi-squared test of independence on an r x k table of counts.
/// Throws DegenerateTable on a zero row/column sum or a ragged table.
TestResult chi_squared_test(const std::vector<std::vector<double>>& table);

/// Two-sided paired t-test on a - b. Throws LengthMismatch (or n < 2) and
/// ZeroVariance when all differences are equal.
TestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

struct KappaResult {
  double kappa = 0.0;
  bool degenerate = false;  // p_e == 1, kappa set to 1 by convention
};
KappaResult cohens_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Throw ConstantInput when either side has no variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);
double spearman(const std::vector<double>& x, const std::vector<double>& y);
double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y);
/// 1-based ranks, ties get the average rank.
std::vector<double> average_ranks(const std::vector<double>& v);

struct Correlations {
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::optional<double> kendall_tau;
  std::vector<std::string> warnings;
};
/// A measure that cannot be computed is left empty with a warning.
Correlations correlations(const std::vector<double>& x, const std::vector<double>& y);

struct VoteResult {
  std::vector<std::string> labels;
  std::vector<bool> tie;
};
/// `ratings[r][i]` is rater r's label for item i. Needs three or more raters of
/// equal length. Likert ties resolve to the lowest level; other ties keep the
/// first rater's label among the tied ones. Ties are flagged either way.
VoteResult majority_vote(const std::vector<std::vector<std::string>>& ratings);

enum class LikertContingency { Full, Dichotomized };
/// Compares two settings' pooled Likert counts. Full: 2x5 table with
/// all-zero columns dropped. Dichotomized: below Medium vs Medium and above.
TestResult likert_significance(const std::array<std::uint64_t, 5>& a, const std::array<std::uint64_t, 5>& b,
                               LikertContingency mode = LikertContingency::Full);

/// "††" for p < 0.01, "†" for p < 0.05, else "".
std::string significance_mark(double p);

}  // namespace medsim
