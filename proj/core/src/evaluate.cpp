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

#include "medsim/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "elicit.hpp"
#include "medsim/error.hpp"
#include "medsim/json_extract.hpp"
#include "medsim/text.hpp"

namespace medsim {

std::uint64_t LikertCounts::total() const {
  std::uint64_t n = 0;
  for (auto v : c) n += v;
  return n;
}

LikertCounts& LikertCounts::operator+=(const LikertCounts& o) {
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
  return *this;
}

double likert_aggregate(const LikertCounts& counts) {
  const auto n = counts.total();
  if (n == 0) throw Error(Errc::EmptyCounts, "no Likert responses to aggregate");
  double weighted = 0.0;
  for (std::size_t i = 0; i < counts.c.size(); ++i) weighted += static_cast<double>(counts.c[i]) * static_cast<double>(i);
  return weighted / static_cast<double>(n) / 4.0 * 100.0;
}

bool all_accept(const std::vector<Decision>& decisions) {
  return !decisions.empty() &&
         std::all_of(decisions.begin(), decisions.end(), [](Decision d) { return d == Decision::Accept; });
}

double success_rate(std::uint64_t n_success, std::uint64_t n_total) {
  if (n_total == 0) throw Error(Errc::NoCases, "success rate over zero cases");
  if (n_success > n_total) throw Error(Errc::PreconditionViolation, "more successes than cases");
  return static_cast<double>(n_success) / static_cast<double>(n_total) * 100.0;
}

double success_rate(const std::vector<std::vector<Decision>>& per_case) {
  const auto n_success = static_cast<std::uint64_t>(std::count_if(per_case.begin(), per_case.end(), all_accept));
  return success_rate(n_success, per_case.size());
}

namespace {

JudgeRating judge(std::string_view template_name, std::string_view key, std::string tag, const DisputeCase& c,
                  const Transcript& transcript, const MediationProposal& proposal, ChatBackend& chat,
                  const CallOptions& opts) {
  const auto& lib = opts.library();
  const PromptVars vars{{"case_background", render_case_background(c, lib)},
                        {"history", render_history(transcript)},
                        {"proposal", proposal.render()}};
  auto req = detail::make_request({}, lib.render(template_name, vars), std::move(tag), opts);
  const auto rating = detail::elicit(chat, std::move(req), lib, Errc::RatingParseError,
                                     [&](const std::string& content, std::string& problem) {
                                       return parse_rating(content, key, &problem);
                                     });
  return {rating.level, rating.reason};
}

}  // namespace

JudgeRating judge_consensus(const DisputeCase& c, const Transcript& transcript, const MediationProposal& proposal,
                            ChatBackend& chat, const CallOptions& opts) {
  return judge("consensus", "Consensus Level", "consensus", c, transcript, proposal, chat, opts);
}

JudgeRating judge_litigation_risk(const DisputeCase& c, const Transcript& transcript,
                                  const MediationProposal& proposal, ChatBackend& chat, const CallOptions& opts) {
  return judge("litigation_risk", "Conflict Risk Level", "litigation_risk", c, transcript, proposal, chat, opts);
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l_f1(const std::vector<std::string>& reference, const std::vector<std::string>& candidate) {
  if (reference.empty()) throw Error(Errc::EmptyReference, "ROUGE-L reference has no tokens");
  if (candidate.empty()) return 0.0;
  const auto l = static_cast<double>(lcs_length(reference, candidate));
  const double recall = l / static_cast<double>(reference.size());
  const double precision = l / static_cast<double>(candidate.size());
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double rouge_l_f1(std::string_view reference, std::string_view candidate) {
  return rouge_l_f1(text::tokenize(reference), text::tokenize(candidate));
}

double legal_basis_recall(const std::vector<LegalBasis>& gold, const std::vector<LegalBasis>& predicted) {
  std::set<std::string> gold_keys;
  for (const auto& b : gold) gold_keys.insert(b.key());
  if (gold_keys.empty()) throw Error(Errc::EmptyGold, "no gold legal bases");
  std::set<std::string> hits;
  for (const auto& b : predicted) {
    if (gold_keys.count(b.key())) hits.insert(b.key());
  }
  return static_cast<double>(hits.size()) / static_cast<double>(gold_keys.size());
}

namespace {

std::optional<double> parse_number(std::string_view s) {
  const auto t = text::trim(s);
  if (t.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

SimilarityScore llm_similarity(std::string_view text_a, std::string_view text_b, ChatBackend& chat,
                               const CallOptions& opts) {
  if (text::trim(text_a).empty() || text::trim(text_b).empty()) {
    throw Error(Errc::PreconditionViolation, "similarity needs two non-empty texts");
  }
  const auto& lib = opts.library();
  auto req = detail::make_request(
      {}, lib.render("similarity", {{"text_a", std::string(text_a)}, {"text_b", std::string(text_b)}}), "similarity",
      opts);
  auto parse = [](const std::string& content, std::string& problem) -> std::optional<SimilarityScore> {
    std::optional<double> value;
    std::string reason;
    if (const auto obj = find_object_with_key(content, "Similarity")) {
      const auto* v = find_key(*obj, "Similarity");
      if (v->is_number()) value = v->get<double>();
      if (v->is_string()) value = parse_number(v->get<std::string>());
      if (const auto* r = find_key(*obj, "Reason"); r && r->is_string()) reason = r->get<std::string>();
    } else {
      value = parse_number(strip_code_fence(content));
    }
    if (!value) {
      problem = "expected a number between 0 and 1 under \"Similarity\"";
      return std::nullopt;
    }
    SimilarityScore s{std::clamp(*value, 0.0, 1.0), reason, false};
    s.clamped = s.value != *value;
    return s;
  };
  return detail::elicit(chat, std::move(req), lib, Errc::ScoreParseError, parse);
}

HttpEmbeddingBackend::HttpEmbeddingBackend(HttpEndpoint endpoint, std::string model, Sleeper sleeper)
    : endpoint_(std::move(endpoint)), model_(std::move(model)), sleeper_(std::move(sleeper)) {}

std::vector<double> HttpEmbeddingBackend::embed(std::string_view text) {
  const nlohmann::json body{{"model", model_}, {"input", std::string(text)}};
  const auto res = post_json_with_retry(endpoint_, body, sleeper_, Errc::ScorerUnavailable);
  if (res.status < 200 || res.status >= 300) {
    throw Error(Errc::ScorerUnavailable, "embedding endpoint returned HTTP " + std::to_string(res.status));
  }
  try {
    return nlohmann::json::parse(res.body).at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ScorerUnavailable, std::string("malformed embedding response: ") + e.what());
  }
}

std::vector<double> FixtureEmbeddingBackend::embed(std::string_view text) {
  const auto it = table_.find(std::string(text));
  if (it == table_.end()) throw Error(Errc::ScorerUnavailable, "no fixture vector for \"" + excerpt(text, 40) + "\"");
  return it->second;
}

double token_f1(std::string_view reference, std::string_view candidate) {
  const auto ref = text::tokenize(reference);
  const auto cand = text::tokenize(candidate);
  if (ref.empty() && cand.empty()) return 1.0;
  if (ref.empty() || cand.empty()) return 0.0;
  std::map<std::string, std::size_t> pool;
  for (const auto& t : ref) ++pool[t];
  std::size_t overlap = 0;
  for (const auto& t : cand) {
    if (auto it = pool.find(t); it != pool.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  const double p = static_cast<double>(overlap) / static_cast<double>(cand.size());
  const double r = static_cast<double>(overlap) / static_cast<double>(ref.size());
  return 2.0 * p * r / (p + r);
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) throw Error(Errc::ScorerUnavailable, "embedding dimensions disagree");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) throw Error(Errc::ScorerUnavailable, "zero-length embedding vector");
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

double SimilarityScorer::score(std::string_view reference, std::string_view candidate) const {
  if (!embedder_) return token_f1(reference, candidate);
  if (reference == candidate) return 1.0;
  return (1.0 + cosine_similarity(embedder_->embed(reference), embedder_->embed(candidate))) / 2.0;
}

SolutionReport evaluate_solution(const DisputeCase& c, const MediationProposal& proposal,
                                 const SimilarityScorer& scorer) {
  SolutionReport r;
  if (!text::tokenize(c.points_of_contention).empty()) {
    r.contention_rouge_l = rouge_l_f1(c.points_of_contention, proposal.points_of_contention);
    r.contention_similarity = scorer.score(c.points_of_contention, proposal.points_of_contention);
  }
  if (!c.legal_bases.empty()) r.bases_recall = legal_basis_recall(c.legal_bases, proposal.legal_bases);
  return r;
}

}  // namespace medsim
