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
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "medsim/agents.hpp"
#include "medsim/model.hpp"
#include "medsim/providers.hpp"

namespace medsim {

/// Response counts per Likert level, index 0 = Very Low.
struct LikertCounts {
  std::array<std::uint64_t, 5> c{};

  void add(LikertLevel level, std::uint64_t n = 1) { c[static_cast<std::size_t>(score(level))] += n; }
  [[nodiscard]] std::uint64_t total() const;
  LikertCounts& operator+=(const LikertCounts& o);
  friend bool operator==(const LikertCounts&, const LikertCounts&) = default;
};

/// (1/4) * (sum c_i (i-1) / sum c_i) * 100. Throws EmptyCounts on all zeros.
double likert_aggregate(const LikertCounts& counts);

/// Percentage of cases in which every party accepted. Throws NoCases.
double success_rate(const std::vector<std::vector<Decision>>& per_case);
double success_rate(std::uint64_t n_success, std::uint64_t n_total);
bool all_accept(const std::vector<Decision>& decisions);

struct JudgeRating {
  LikertLevel level = LikertLevel::Medium;
  std::string reason;
};

/// Third-party judge calls (tags consensus / litigation_risk). One re-ask,
/// then Errc::RatingParseError.
JudgeRating judge_consensus(const DisputeCase& c, const Transcript& transcript, const MediationProposal& proposal,
                            ChatBackend& judge, const CallOptions& opts = {});
JudgeRating judge_litigation_risk(const DisputeCase& c, const Transcript& transcript,
                                  const MediationProposal& proposal, ChatBackend& judge,
                                  const CallOptions& opts = {});

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);
/// ROUGE-L F1 over token lists. Throws EmptyReference.
double rouge_l_f1(const std::vector<std::string>& reference, const std::vector<std::string>& candidate);
/// Same, tokenizing both texts first.
double rouge_l_f1(std::string_view reference, std::string_view candidate);

/// |gold ∩ predicted| / |gold| under canonical-key equality. Throws EmptyGold.
double legal_basis_recall(const std::vector<LegalBasis>& gold, const std::vector<LegalBasis>& predicted);

struct SimilarityScore {
  double value = 0.0;
  std::string reason;
  bool clamped = false;
};
/// Judge call (tag similarity) returning a number in [0, 1]; out-of-range
/// values are clamped and flagged. One re-ask, then Errc::ScoreParseError.
SimilarityScore llm_similarity(std::string_view text_a, std::string_view text_b, ChatBackend& judge,
                               const CallOptions& opts = {});

/// Produces one vector per text.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::vector<double> embed(std::string_view text) = 0;
};

/// POSTs {"model", "input": text} to an OpenAI-style embeddings endpoint and
/// reads data[0].embedding.
class HttpEmbeddingBackend final : public EmbeddingBackend {
 public:
  HttpEmbeddingBackend(HttpEndpoint endpoint, std::string model, Sleeper sleeper = real_sleeper());
  std::vector<double> embed(std::string_view text) override;

 private:
  HttpEndpoint endpoint_;
  std::string model_;
  Sleeper sleeper_;
};

/// Fixed text -> vector table; unknown texts throw ScorerUnavailable.
class FixtureEmbeddingBackend final : public EmbeddingBackend {
 public:
  explicit FixtureEmbeddingBackend(std::map<std::string, std::vector<double>> table) : table_(std::move(table)) {}
  std::vector<double> embed(std::string_view text) override;

 private:
  std::map<std::string, std::vector<double>> table_;
};

/// Multiset token F1 between the tokenized texts.
double token_f1(std::string_view reference, std::string_view candidate);
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

/// Semantic similarity handle: embedding cosine mapped to (1+cos)/2, or the
/// token-F1 fallback when no embedding backend is set.
class SimilarityScorer {
 public:
  SimilarityScorer() = default;
  explicit SimilarityScorer(std::shared_ptr<EmbeddingBackend> embedder) : embedder_(std::move(embedder)) {}

  double score(std::string_view reference, std::string_view candidate) const;
  [[nodiscard]] std::string describe() const { return embedder_ ? "embedding" : "token_f1"; }

 private:
  std::shared_ptr<EmbeddingBackend> embedder_;
};

struct SolutionReport {
  double contention_rouge_l = 0.0;
  double contention_similarity = 0.0;
  double bases_recall = 0.0;
};

/// Compares a mediator proposal against the annotated points and bases.
/// Recall is 0 when the case has no annotated bases.
SolutionReport evaluate_solution(const DisputeCase& c, const MediationProposal& proposal,
                                 const SimilarityScorer& scorer);

struct OutcomeReport {
  double success_rate = 0.0;
  double satisfaction = 0.0;
  double consensus = 0.0;
  double litigation_risk = 0.0;
  std::uint64_t n_total = 0;
  std::uint64_t n_success = 0;
  std::uint64_t failed_sessions = 0;
  LikertCounts satisfaction_counts;
  LikertCounts consensus_counts;
  LikertCounts litigation_counts;
};

}  // namespace medsim
