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

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "medsim/agents.hpp"
#include "medsim/error.hpp"
#include "medsim/model.hpp"

namespace medsim {

struct SessionConfig {
  std::uint32_t bargaining_rounds_max = 5;
  std::set<Stage> enabled_stages{kPipelineOrder.begin(), kPipelineOrder.end()};
  std::uint64_t seed = 0;
  bool dynamic_strategies = false;

  [[nodiscard]] bool enabled(Stage s) const { return enabled_stages.count(s) != 0; }
};

/// Preliminary must be enabled, the round limit positive, and some stage must
/// be able to produce a solution for the parties to judge.
void validate_session_config(const SessionConfig& config);

struct SessionState {
  Stage current_stage = Stage::Preliminary;
  std::uint32_t round = 0;
  std::optional<MediationProposal> proposal;
  std::optional<Termination> terminated;

  /// Sets the termination reason; a second call throws.
  void terminate(Termination reason);
};

enum class RoundStatus { Agreement, Impasse, Continue };
std::string_view to_string(RoundStatus s) noexcept;

struct TerminationCheck {
  RoundStatus status = RoundStatus::Continue;
  std::string reason;
  std::optional<std::string> warning;  // set when the reply was unusable
};

/// Judge-style classification of one completed bargaining round (tag
/// termination:round<r>). Accepts {"Status": ...} or a bare label. Anything
/// else fails open to Continue with a warning.
TerminationCheck detect_termination(const DisputeCase& c, const std::vector<Utterance>& round_utterances,
                                    std::uint32_t round, ChatBackend& chat, const CallOptions& opts = {});

struct SessionProviders {
  ChatBackend* chat = nullptr;
  RetrievalBackend* retrieval = nullptr;
};

struct SessionResult {
  Transcript transcript;
  SessionOutcome outcome;
};

/// Raised when an agent or provider error stops a session; carries the
/// transcript up to the failure.
class SessionAborted : public Error {
 public:
  SessionAborted(Errc code, const std::string& message, Transcript partial);
  [[nodiscard]] const Transcript& partial() const noexcept { return partial_; }

 private:
  Transcript partial_;
};

/// Runs the enabled stages in pipeline order:
///   Preliminary: system utterance presenting the brief;
///   Statement: mediator introduction, then each party;
///   OptionGeneration: mediator proposal from the dispute facts;
///   Bargaining: rounds of every party (case order) then the mediator, with a
///     termination check after each round except the last, and reflection for
///     dynamic parties when the session continues;
///   Closure: mediator final solution;
/// then acceptance and satisfaction from every party.
/// `parties` must name exactly the case's parties; they are reordered to case
/// order. Throws SessionAborted on any agent/provider failure.
SessionResult run_session(const DisputeCase& c, std::vector<PartyProfile> parties, const MediatorProfile& mediator,
                          const SessionConfig& config, const SessionProviders& providers,
                          const CallOptions& opts = {}, std::string run_id = "run-0");

}  // namespace medsim
