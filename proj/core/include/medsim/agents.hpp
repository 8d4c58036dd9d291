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

#include <optional>
#include <string>
#include <vector>

#include "medsim/model.hpp"
#include "medsim/prompts.hpp"
#include "medsim/providers.hpp"

namespace medsim {

/// Per-call plumbing shared by every agent and judge call.
struct CallOptions {
  std::string scope;                      // scripted-replay namespace
  const PromptLibrary* prompts = nullptr;  // null: built-in templates

  [[nodiscard]] const PromptLibrary& library() const {
    return prompts ? *prompts : PromptLibrary::builtin();
  }
};

struct PartyProfile {
  std::string name;
  std::string stance;  // optional claims summary injected into the system prompt
  std::optional<TKIMode> strategy;
  bool dynamic = false;
};

struct MediatorProfile {
  std::string name = "Mediator";
  bool external_knowledge = false;
  std::size_t top_k = 3;
};

struct ReflectionDecision {
  bool keep = true;
  std::optional<TKIMode> new_strategy;
  std::string rationale;
};

/// Empty for no strategy; otherwise names the mode, its assertiveness and
/// cooperativeness levels and a one-line behavioral description.
std::string render_strategy_directive(std::optional<TKIMode> mode);

std::string render_history(const Transcript& transcript);
std::string render_history(const std::vector<Utterance>& utterances);
std::string render_case_background(const DisputeCase& c, const PromptLibrary& prompts);
std::string render_facts(const DisputeCase& c);

/// Party utterance for Statement / Bargaining / Closure. `round` is the
/// 1-based bargaining round and only used for Bargaining.
/// Tags: statement:<name>, bargain:<name>:round<r>, closure:<name>.
Utterance party_turn(const PartyProfile& profile, const DisputeCase& c, const Transcript& so_far, Stage stage,
                     ChatBackend& chat, const CallOptions& opts = {}, std::uint32_t round = 0);

/// Mediator Statement-stage introduction (tag mediator_intro).
Utterance mediator_intro(const MediatorProfile& mediator, const DisputeCase& c, const Transcript& so_far,
                         ChatBackend& chat, const CallOptions& opts = {});

/// Mediator reply closing a bargaining round (tag mediator_turn:round<r>).
Utterance mediator_turn(const MediatorProfile& mediator, const DisputeCase& c, const Transcript& so_far,
                        std::uint32_t round, ChatBackend& chat, const CallOptions& opts = {});

/// Stage III proposal built from the dispute facts (tag propose). With
/// external knowledge the top-k retrieved bases are injected into the prompt.
/// One re-ask on an unparseable reply, then Errc::ProposalParseError.
MediationProposal mediator_propose(const MediatorProfile& mediator, const DisputeCase& c, const Transcript& so_far,
                                   RetrievalBackend* retrieval, ChatBackend& chat, const CallOptions& opts = {});

/// Closure final solution (tag final_proposal). Same object shape as the
/// Stage III proposal; missing points/bases are taken from `current`.
MediationProposal mediator_final_proposal(const MediatorProfile& mediator, const DisputeCase& c,
                                          const Transcript& so_far, const std::optional<MediationProposal>& current,
                                          Termination reason, ChatBackend& chat, const CallOptions& opts = {});

/// {points_of_contention, legal_bases[], solution}; `require_points` controls
/// whether the first two keys are mandatory. Returns a problem description
/// instead of a proposal on failure.
struct ProposalParse {
  std::optional<MediationProposal> proposal;
  std::string problem;
};
ProposalParse parse_proposal(std::string_view content, bool require_points = true);

/// Accept / Reject / Undecided from a reply holding {"Accept or Not", "Reason"}.
std::optional<PartyDecision> parse_acceptance(std::string_view content, std::string* problem = nullptr);
/// Likert level from a reply holding {key, "Reason"}.
std::optional<PartyRating> parse_rating(std::string_view content, std::string_view key,
                                        std::string* problem = nullptr);

/// Tag accept:<name>. One re-ask, then Errc::DecisionParseError.
PartyDecision decide_acceptance(const PartyProfile& profile, const DisputeCase& c, const Transcript& transcript,
                                const MediationProposal& proposal, ChatBackend& chat, const CallOptions& opts = {});

/// Tag satisfaction:<name>. One re-ask, then Errc::RatingParseError.
PartyRating rate_satisfaction(const PartyProfile& profile, const DisputeCase& c, const Transcript& transcript,
                              const MediationProposal& proposal, ChatBackend& chat, const CallOptions& opts = {});

/// Tag reflect:<name>:round<r>. Never throws on bad output: an unparseable
/// reply or an unknown mode keeps the current strategy and appends a warning.
/// A switch updates `profile.strategy`.
ReflectionDecision reflect_and_maybe_switch(PartyProfile& profile, const DisputeCase& c, const Transcript& so_far,
                                            std::uint32_t round, ChatBackend& chat, const CallOptions& opts = {},
                                            std::vector<std::string>* warnings = nullptr);

}  // namespace medsim
