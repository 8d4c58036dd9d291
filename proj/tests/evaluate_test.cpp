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
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "medsim/error.hpp"
#include "medsim/evaluate.hpp"
#include "medsim/text.hpp"
#include "support.hpp"

using namespace medsim;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected medsim::Error";
  return Errc::IoError;
}

LikertCounts counts(std::array<std::uint64_t, 5> c) {
  LikertCounts out;
  out.c = c;
  return out;
}

// Weighted mean of level indices, rescaled to 0..100, written out longhand.
double likert_oracle(const std::array<std::uint64_t, 5>& c) {
  double num = 0;
  double den = 0;
  for (int i = 1; i <= 5; ++i) {
    num += static_cast<double>(c[i - 1]) * (i - 1);
    den += static_cast<double>(c[i - 1]);
  }
  return num / den / 4.0 * 100.0;
}

// Exponential-time LCS by recursion over suffixes, memoized.
std::size_t lcs_oracle(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size() || j == b.size()) return 0;
    if (auto it = memo.find({i, j}); it != memo.end()) return it->second;
    const std::size_t r = a[i] == b[j] ? 1 + go(i + 1, j + 1) : std::max(go(i + 1, j), go(i, j + 1));
    memo[{i, j}] = r;
    return r;
  };
  return go(0, 0);
}

std::vector<std::string> random_tokens(std::mt19937_64& rng, std::size_t max_len, int vocab) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<int> tok(0, vocab - 1);
  std::vector<std::string> out(len(rng));
  for (auto& t : out) t = "w" + std::to_string(tok(rng));
  return out;
}

LegalBasis article(int n) {
  return LegalBasis{"Civil Code of the People's Republic of China", static_cast<std::uint32_t>(n), {}};
}

DisputeCase small_case() {
  DisputeCase c = support::housing_case();
  return c;
}

}  // namespace

TEST(Likert, Examples) {
  EXPECT_DOUBLE_EQ(likert_aggregate(counts({0, 0, 0, 0, 5})), 100.0);
  EXPECT_DOUBLE_EQ(likert_aggregate(counts({1, 1, 1, 1, 1})), 50.0);
  EXPECT_DOUBLE_EQ(likert_aggregate(counts({2, 3, 5, 6, 4})), 58.75);
  EXPECT_DOUBLE_EQ(likert_aggregate(counts({2, 3, 5, 6, 4})), likert_oracle({2, 3, 5, 6, 4}));
  EXPECT_EQ(code_of([] { likert_aggregate(LikertCounts{}); }), Errc::EmptyCounts);
}

TEST(Likert, AddAndAccumulate) {
  LikertCounts a;
  a.add(LikertLevel::VeryLow);
  a.add(LikertLevel::High, 3);
  EXPECT_EQ(a.c, (std::array<std::uint64_t, 5>{1, 0, 0, 3, 0}));
  a += counts({0, 1, 0, 0, 2});
  EXPECT_EQ(a.total(), 7u);
}

TEST(LikertProperty, ScaleInvariance) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint64_t> d(0, 30);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<std::uint64_t, 5> c{};
    for (auto& x : c) x = d(rng);
    if (std::all_of(c.begin(), c.end(), [](auto x) { return x == 0; })) c[2] = 1;
    const double base = likert_aggregate(counts(c));
    EXPECT_NEAR(base, likert_oracle(c), 1e-12);
    for (std::uint64_t k : {2u, 3u, 17u}) {
      auto scaled = c;
      for (auto& x : scaled) x *= k;
      EXPECT_NEAR(likert_aggregate(counts(scaled)), base, 1e-12);
    }
  }
}

TEST(LikertProperty, MovingUpNeverLowers) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::uint64_t> d(0, 10);
  std::uniform_int_distribution<std::size_t> lvl(0, 4);
  for (int trial = 0; trial < 500; ++trial) {
    std::array<std::uint64_t, 5> c{};
    for (auto& x : c) x = d(rng);
    const auto i = lvl(rng);
    if (c[i] == 0) c[i] = 1;
    const auto j = lvl(rng);
    if (j <= i) continue;
    auto moved = c;
    --moved[i];
    ++moved[j];
    EXPECT_GE(likert_aggregate(counts(moved)), likert_aggregate(counts(c)));
  }
}

TEST(SuccessRate, Examples) {
  std::vector<std::vector<Decision>> cases;
  for (int i = 0; i < 100; ++i) {
    if (i < 82) {
      cases.push_back({Decision::Accept, Decision::Accept});
    } else {
      cases.push_back({Decision::Accept, i % 2 ? Decision::Reject : Decision::Undecided});
    }
  }
  EXPECT_DOUBLE_EQ(success_rate(cases), 82.0);
  EXPECT_DOUBLE_EQ(success_rate({{Decision::Accept, Decision::Accept, Decision::Accept}}), 100.0);
  EXPECT_DOUBLE_EQ(success_rate({{Decision::Accept, Decision::Undecided}}), 0.0);
  EXPECT_FALSE(all_accept({Decision::Accept, Decision::Undecided}));
  EXPECT_EQ(code_of([] { success_rate(std::vector<std::vector<Decision>>{}); }), Errc::NoCases);
  EXPECT_EQ(code_of([] { success_rate(0, 0); }), Errc::NoCases);
}

TEST(SuccessRateProperty, PerCaseEqualsAggregated) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> pick(0, 5);
  std::uniform_int_distribution<std::size_t> n_cases(1, 40);
  std::uniform_int_distribution<std::size_t> n_parties(2, 4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<Decision>> cases(n_cases(rng));
    std::uint64_t succ = 0;
    for (auto& c : cases) {
      c.resize(n_parties(rng));
      for (auto& d : c) {
        const int r = pick(rng);
        d = r < 4 ? Decision::Accept : (r == 4 ? Decision::Reject : Decision::Undecided);
      }
      succ += std::all_of(c.begin(), c.end(), [](Decision d) { return d == Decision::Accept; });
    }
    EXPECT_DOUBLE_EQ(success_rate(cases), success_rate(succ, cases.size()));
  }
}

TEST(Rouge, Examples) {
  const std::vector<std::string> ref{"a", "b", "c", "d"};
  EXPECT_DOUBLE_EQ(rouge_l_f1(ref, ref), 1.0);
  EXPECT_NEAR(rouge_l_f1(ref, {"a", "c", "d"}), 6.0 / 7.0, 1e-12);
  EXPECT_DOUBLE_EQ(rouge_l_f1(ref, {"x", "y"}), 0.0);
  EXPECT_DOUBLE_EQ(rouge_l_f1(ref, {}), 0.0);
  EXPECT_EQ(code_of([&] { rouge_l_f1(std::vector<std::string>{}, ref); }), Errc::EmptyReference);
  EXPECT_EQ(code_of([] { rouge_l_f1(std::string_view("  ,. "), std::string_view("x")); }), Errc::EmptyReference);
}

TEST(Rouge, TextOverloads) {
  EXPECT_NEAR(rouge_l_f1(std::string_view("A, b c d."), std::string_view("a c d")), 6.0 / 7.0, 1e-12);
  // Text without whitespace splits per code point: LCS of 房屋买卖 and 房屋租赁 is 2 of 4.
  EXPECT_NEAR(rouge_l_f1(std::string_view("房屋买卖"), std::string_view("房屋租赁")), 0.5, 1e-12);
}

TEST(RougeProperty, MatchesOracleAndBounds) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    const auto ref = random_tokens(rng, 12, 5);
    const auto cand = random_tokens(rng, 12, 5);
    EXPECT_EQ(lcs_length(ref, cand), lcs_oracle(ref, cand));
    const double f = rouge_l_f1(ref, cand);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    EXPECT_EQ(f == 1.0, ref == cand);
    const double l = static_cast<double>(lcs_oracle(ref, cand));
    const double p = l / cand.size();
    const double r = l / ref.size();
    EXPECT_NEAR(f, p + r == 0 ? 0.0 : 2 * p * r / (p + r), 1e-12);
  }
}

TEST(RougeProperty, PermutationNeverBeatsIdentity) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const auto ref = random_tokens(rng, 10, 8);
    auto perm = ref;
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_LE(rouge_l_f1(ref, perm), rouge_l_f1(ref, ref));
  }
}

TEST(Recall, Examples) {
  const std::vector<LegalBasis> gold{article(533), article(563), article(566)};
  EXPECT_NEAR(legal_basis_recall(gold, {article(533), article(999)}), 1.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(legal_basis_recall(gold, {article(566), article(533), article(563), article(1)}), 1.0);
  EXPECT_DOUBLE_EQ(legal_basis_recall(gold, {}), 0.0);
  EXPECT_EQ(code_of([] { legal_basis_recall({}, {article(1)}); }), Errc::EmptyGold);
}

TEST(Recall, CanonicalKeys) {
  const std::vector<LegalBasis> gold{
      normalize_legal_basis("Civil Code of the People's Republic of China, Article 533")};
  EXPECT_DOUBLE_EQ(legal_basis_recall(gold, {normalize_legal_basis("CIVIL CODE of the People's Republic of China, Art. 533")}),
                   1.0);
}

TEST(RecallProperty, MonotoneInPredicted) {
  std::mt19937_64 rng(16);
  std::uniform_int_distribution<int> art(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LegalBasis> gold{article(art(rng)), article(art(rng)), article(art(rng))};
    std::vector<LegalBasis> predicted;
    double last = legal_basis_recall(gold, predicted);
    for (int k = 0; k < 8; ++k) {
      predicted.push_back(article(art(rng)));
      const double now = legal_basis_recall(gold, predicted);
      EXPECT_GE(now, last);
      last = now;
    }
  }
}

TEST(Judges, ConsensusLevels) {
  const auto c = small_case();
  const MediationProposal p{"points", {}, "solution"};
  auto judge = support::scripted(
      nlohmann::json{{"consensus",
                      {R"({"Consensus Level": "Very High", "Reason": "r"})", R"({"Consensus Level": "Low"})",
                       R"({"Reason": "no level"})", R"({"Reason": "still none"})"}}},
      true);
  EXPECT_EQ(score(judge_consensus(c, {}, p, *judge).level), 4);
  EXPECT_EQ(score(judge_consensus(c, {}, p, *judge).level), 1);
  EXPECT_EQ(code_of([&] { judge_consensus(c, {}, p, *judge); }), Errc::RatingParseError);
}

TEST(Judges, LitigationRiskLevels) {
  const auto c = small_case();
  const MediationProposal p{"points", {}, "solution"};
  auto judge = support::scripted(
      nlohmann::json{{"litigation_risk",
                      {"Reasoning first.\n{\"Conflict Risk Level\": \"Very Low\", \"Reason\": \"calm\"}",
                       R"({"Conflict Risk Level": "Very High"})", R"({"Conflict Risk Level": "High risk"})",
                       R"({"Conflict Risk Level": "High risk"})"}}},
      true);
  EXPECT_EQ(score(judge_litigation_risk(c, {}, p, *judge).level), 0);
  EXPECT_EQ(score(judge_litigation_risk(c, {}, p, *judge).level), 4);
  EXPECT_EQ(code_of([&] { judge_litigation_risk(c, {}, p, *judge); }), Errc::RatingParseError);
}

TEST(Judges, PromptCarriesTranscriptAndProposal) {
  const auto c = small_case();
  Transcript t;
  t.append(Stage::Bargaining, "Sun", Role::Party, "I can accept 20,000 per square meter.");
  const MediationProposal p{"points", {}, "Refund at the assessed price."};
  auto inner = support::scripted(nlohmann::json{{"consensus", R"({"Consensus Level": "High"})"}}, true);
  RecordingChatBackend judge(inner);
  judge_consensus(c, t, p, judge);
  const auto prompt = judge.exchanges().at(0).request.messages.at(0).content;
  EXPECT_NE(prompt.find("I can accept 20,000 per square meter."), std::string::npos);
  EXPECT_NE(prompt.find("Refund at the assessed price."), std::string::npos);
  EXPECT_NE(prompt.find("Consensus Level"), std::string::npos);
}

TEST(Similarity, LlmScore) {
  auto judge = support::scripted(
      nlohmann::json{{"similarity",
                      {R"({"Similarity": 0.85, "Reason": "close"})", R"({"Similarity": 1.4})", "0.3", "very similar",
                       "very similar"}}},
      true);
  auto s = llm_similarity("a", "b", *judge);
  EXPECT_DOUBLE_EQ(s.value, 0.85);
  EXPECT_FALSE(s.clamped);
  s = llm_similarity("a", "b", *judge);
  EXPECT_DOUBLE_EQ(s.value, 1.0);
  EXPECT_TRUE(s.clamped);
  EXPECT_DOUBLE_EQ(llm_similarity("a", "b", *judge).value, 0.3);
  EXPECT_EQ(code_of([&] { llm_similarity("a", "b", *judge); }), Errc::ScoreParseError);
  EXPECT_EQ(code_of([&] { llm_similarity("", "b", *judge); }), Errc::PreconditionViolation);
}

TEST(Similarity, Scorers) {
  const SimilarityScorer fallback;
  EXPECT_DOUBLE_EQ(fallback.score("the refund amount", "the refund amount"), 1.0);
  EXPECT_DOUBLE_EQ(fallback.score("alpha beta", "gamma delta"), 0.0);
  // 2 of 3 candidate tokens match, 2 of 4 reference tokens: F1 = 2*(2/3)(1/2)/(2/3+1/2) = 4/7
  EXPECT_NEAR(fallback.score("a b c d", "a b x"), 4.0 / 7.0, 1e-12);

  auto fixture = std::make_shared<FixtureEmbeddingBackend>(std::map<std::string, std::vector<double>>{
      {"first", {1.0, 0.0}}, {"second", {0.0, 2.0}}, {"third", {-3.0, 0.0}}});
  const SimilarityScorer embedded(fixture);
  EXPECT_DOUBLE_EQ(embedded.score("first", "second"), 0.5);
  EXPECT_DOUBLE_EQ(embedded.score("first", "third"), 0.0);
  EXPECT_DOUBLE_EQ(embedded.score("anything at all", "anything at all"), 1.0);
  EXPECT_EQ(code_of([&] { embedded.score("first", "unknown"); }), Errc::ScorerUnavailable);
}

TEST(Similarity, Cosine) {
  EXPECT_NEAR(cosine_similarity({1, 2, 3}, {2, 4, 6}), 1.0, 1e-12);
  EXPECT_NEAR(cosine_similarity({1, 0}, {1, 1}), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Solution, AgainstAnnotations) {
  const auto c = small_case();
  MediationProposal p;
  p.points_of_contention = c.points_of_contention;
  p.legal_bases = {normalize_legal_basis("Civil Code of the People's Republic of China, Article 533")};
  p.solution = "x";
  const auto r = evaluate_solution(c, p, SimilarityScorer{});
  EXPECT_DOUBLE_EQ(r.contention_rouge_l, 1.0);
  EXPECT_DOUBLE_EQ(r.contention_similarity, 1.0);
  EXPECT_NEAR(r.bases_recall, 1.0 / static_cast<double>(c.legal_bases.size()), 1e-12);
}
