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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace medsim {

using PartyName = std::string;

/// Unprocessed case record as scraped from a case database.
struct RawCase {
  std::string id;  // optional; preprocessing assigns one when blank
  std::string title;
  std::vector<std::string> keywords;
  std::string brief;
  std::string method;
  std::vector<std::string> bases;
};

void validate_raw_case(const RawCase& raw);

/// A statute or normative document, optionally narrowed to one article.
/// Equality is on the canonical key (folded law name + article), never on the
/// raw display text.
struct LegalBasis {
  std::string law;
  std::optional<std::uint32_t> article;
  std::string raw;

  [[nodiscard]] std::string key() const;
  [[nodiscard]] std::string display() const;
  friend bool operator==(const LegalBasis& a, const LegalBasis& b) { return a.key() == b.key(); }
};

/// Parses "Civil Code ..., Article 533", "...第533条", "Art. 12" and plain
/// document names. Throws Errc::EmptyBasis on blank input.
LegalBasis normalize_legal_basis(std::string_view raw);

struct DisputeCase {
  std::string id;
  std::string dispute_type;                 // DT
  std::string brief;                        // DB
  std::vector<std::string> facts;           // DF
  std::vector<PartyName> parties;           // DP
  std::string points_of_contention;         // DPoints
  std::vector<LegalBasis> legal_bases;      // DBases

  friend bool operator==(const DisputeCase&, const DisputeCase&) = default;
};

struct ValidationReport {
  std::vector<std::string> warnings;
};

/// Largest party count observed in the reference corpus; more is allowed but warned.
inline constexpr std::size_t kObservedMaxParties = 6;

/// Throws TooFewParties, DuplicatePartyName or EmptyBrief; returns warnings otherwise.
ValidationReport validate_dispute_case(const DisputeCase& c);

enum class Level { Low, Moderate, High };

enum class TKIMode { Competing, Collaborating, Compromising, Avoiding, Accommodating };

inline constexpr std::array<TKIMode, 5> kAllModes = {
    TKIMode::Competing, TKIMode::Collaborating, TKIMode::Compromising,
    TKIMode::Avoiding, TKIMode::Accommodating};

Level assertiveness(TKIMode mode) noexcept;
Level cooperativeness(TKIMode mode) noexcept;
std::string_view to_string(TKIMode mode) noexcept;
std::string_view to_string(Level level) noexcept;
/// Trim + case-fold match against the five mode names.
std::optional<TKIMode> parse_mode(std::string_view name);

/// Five-point scale; the enumerator value is the score.
enum class LikertLevel : int { VeryLow = 0, Low = 1, Medium = 2, High = 3, VeryHigh = 4 };

inline constexpr std::array<LikertLevel, 5> kAllLikertLevels = {
    LikertLevel::VeryLow, LikertLevel::Low, LikertLevel::Medium, LikertLevel::High,
    LikertLevel::VeryHigh};

constexpr int score(LikertLevel level) noexcept { return static_cast<int>(level); }
std::string_view label(LikertLevel level) noexcept;
/// Throws Errc::UnknownLabel for anything that is not one of the five labels
/// after trim + case-fold.
LikertLevel likert_from_label(std::string_view text);
LikertLevel likert_from_score(int score);

enum class Stage { Preliminary, Statement, OptionGeneration, Bargaining, Closure };

inline constexpr std::array<Stage, 5> kPipelineOrder = {
    Stage::Preliminary, Stage::Statement, Stage::OptionGeneration, Stage::Bargaining,
    Stage::Closure};

std::string_view to_string(Stage stage) noexcept;
std::optional<Stage> parse_stage(std::string_view name);

enum class Role { Mediator, Party, System };
std::string_view to_string(Role role) noexcept;
std::optional<Role> parse_role(std::string_view name);

struct Utterance {
  Stage stage = Stage::Preliminary;
  std::uint32_t turn_index = 0;
  std::string speaker;
  Role role = Role::System;
  std::string content;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct Transcript {
  std::string case_id;
  std::string run_id;
  std::vector<Utterance> utterances;

  /// Appends with the next turn index; enforces stage monotonicity.
  const Utterance& append(Stage stage, std::string speaker, Role role, std::string content);
  /// Distinct stages in order of first appearance.
  [[nodiscard]] std::vector<Stage> stage_sequence() const;
};

/// Checks turn indices strictly increase and stages never go backwards.
/// Throws Errc::PreconditionViolation on the first violation.
void validate_transcript(const Transcript& t);

struct MediationProposal {
  std::string points_of_contention;       // MDPoints
  std::vector<LegalBasis> legal_bases;    // MDBases
  std::string solution;

  [[nodiscard]] std::string render() const;
};

enum class Decision { Accept, Reject, Undecided };
std::string_view to_string(Decision d) noexcept;
/// Closed set {Accept, Reject, Undecided}, trim + case-fold.
std::optional<Decision> parse_decision(std::string_view text);

enum class Termination { Agreement, Impasse, RoundLimit };
std::string_view to_string(Termination t) noexcept;
std::optional<Termination> parse_termination(std::string_view text);

struct PartyDecision {
  Decision decision = Decision::Undecided;
  std::string reason;
};

struct PartyRating {
  LikertLevel level = LikertLevel::Medium;
  std::string reason;
};

struct SessionOutcome {
  MediationProposal proposal;
  std::map<PartyName, PartyDecision> decisions;
  std::map<PartyName, PartyRating> satisfaction;
  Termination termination = Termination::RoundLimit;
  std::uint32_t bargaining_rounds = 0;
  std::vector<std::string> warnings;

  /// True iff every party accepted.
  [[nodiscard]] bool successful() const;
};

/// decisions and satisfaction must cover exactly the case's parties.
void validate_outcome(const SessionOutcome& outcome, const DisputeCase& c);

}  // namespace medsim
