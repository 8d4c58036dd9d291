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

#include "medsim/orchestrator.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "elicit.hpp"
#include "medsim/json_extract.hpp"
#include "medsim/text.hpp"

namespace medsim {

void validate_session_config(const SessionConfig& config) {
  if (!config.enabled(Stage::Preliminary)) {
    throw Error(Errc::ConfigError, "the Preliminary stage cannot be disabled");
  }
  if (config.bargaining_rounds_max < 1) {
    throw Error(Errc::ConfigError, "bargaining_rounds_max must be positive");
  }
  if (!config.enabled(Stage::OptionGeneration) && !config.enabled(Stage::Bargaining) &&
      !config.enabled(Stage::Closure)) {
    throw Error(Errc::ConfigError, "with Option Generation, Bargaining and Closure all disabled no solution exists");
  }
}

void SessionState::terminate(Termination reason) {
  if (terminated) throw Error(Errc::PreconditionViolation, "session terminated twice");
  terminated = reason;
}

std::string_view to_string(RoundStatus s) noexcept {
  switch (s) {
    case RoundStatus::Agreement: return "Agreement";
    case RoundStatus::Impasse: return "Impasse";
    case RoundStatus::Continue: return "Continue";
  }
  return "?";
}

TerminationCheck detect_termination(const DisputeCase& c, const std::vector<Utterance>& round_utterances,
                                    std::uint32_t round, ChatBackend& chat, const CallOptions& opts) {
  const auto& lib = opts.library();
  const PromptVars vars{{"case_background", render_case_background(c, lib)},
                        {"round_history", render_history(round_utterances)},
                        {"round", std::to_string(round)}};
  auto req = detail::make_request({}, lib.render("termination", vars), "termination:round" + std::to_string(round),
                                  opts);
  const auto resp = chat_complete(req, chat);

  std::string label_text;
  std::string reason;
  if (const auto obj = find_object_with_key(resp.content, "Status")) {
    const auto* v = find_key(*obj, "Status");
    if (v->is_string()) label_text = v->get<std::string>();
    if (const auto* r = find_key(*obj, "Reason"); r && r->is_string()) reason = r->get<std::string>();
  } else {
    label_text = strip_code_fence(resp.content);
  }
  const auto key = text::label_key(label_text);
  if (key == "agreement") return {RoundStatus::Agreement, reason, std::nullopt};
  if (key == "impasse") return {RoundStatus::Impasse, reason, std::nullopt};
  if (key == "continue") return {RoundStatus::Continue, reason, std::nullopt};

  std::string warning = "termination check after round " + std::to_string(round) +
                        " was unparseable; continuing (reply: " + excerpt(resp.content, 80) + ")";
  spdlog::warn("{}", warning);
  return {RoundStatus::Continue, {}, std::move(warning)};
}

SessionAborted::SessionAborted(Errc code, const std::string& message, Transcript partial)
    : Error(code, message), partial_(std::move(partial)) {}

namespace {

std::vector<PartyProfile> order_profiles(const DisputeCase& c, std::vector<PartyProfile> parties) {
  if (parties.size() != c.parties.size()) {
    throw Error(Errc::PreconditionViolation, "party profiles do not match the parties of case '" + c.id + "'");
  }
  std::vector<PartyProfile> ordered;
  ordered.reserve(parties.size());
  for (const auto& name : c.parties) {
    auto it = std::find_if(parties.begin(), parties.end(), [&](const PartyProfile& p) { return p.name == name; });
    if (it == parties.end()) {
      throw Error(Errc::PreconditionViolation, "no profile for party '" + name + "' of case '" + c.id + "'");
    }
    ordered.push_back(std::move(*it));
    parties.erase(it);
  }
  return ordered;
}

}  // namespace

SessionResult run_session(const DisputeCase& c, std::vector<PartyProfile> parties, const MediatorProfile& mediator,
                          const SessionConfig& config, const SessionProviders& providers, const CallOptions& opts,
                          std::string run_id) {
  validate_session_config(config);
  if (!providers.chat) throw Error(Errc::ConfigError, "run_session needs a chat backend");
  const auto validation = validate_dispute_case(c);
  auto profiles = order_profiles(c, std::move(parties));
  for (auto& p : profiles) {
    if (config.dynamic_strategies) p.dynamic = true;
    if (p.dynamic && !p.strategy) p.strategy = TKIMode::Compromising;
  }

  ChatBackend& chat = *providers.chat;
  const auto& lib = opts.library();
  SessionResult result;
  Transcript& t = result.transcript;
  t.case_id = c.id;
  t.run_id = std::move(run_id);
  SessionOutcome& outcome = result.outcome;
  outcome.warnings = validation.warnings;
  SessionState state;

  auto append = [&](const Utterance& u) { t.append(u.stage, u.speaker, u.role, u.content); };

  try {
    // I. Preliminary
    t.append(Stage::Preliminary, "System", Role::System, lib.render("preliminary", {{"brief", c.brief}}));

    // II. Statement
    if (config.enabled(Stage::Statement)) {
      state.current_stage = Stage::Statement;
      append(mediator_intro(mediator, c, t, chat, opts));
      for (const auto& p : profiles) append(party_turn(p, c, t, Stage::Statement, chat, opts));
    }

    // III. Option Generation
    if (config.enabled(Stage::OptionGeneration)) {
      state.current_stage = Stage::OptionGeneration;
      state.proposal = mediator_propose(mediator, c, t, providers.retrieval, chat, opts);
      t.append(Stage::OptionGeneration, mediator.name, Role::Mediator, state.proposal->render());
    }

    // IV. Bargaining
    std::string last_mediator_reply;
    if (config.enabled(Stage::Bargaining)) {
      state.current_stage = Stage::Bargaining;
      for (std::uint32_t round = 1; round <= config.bargaining_rounds_max; ++round) {
        state.round = round;
        const auto round_start = t.utterances.size();
        for (const auto& p : profiles) append(party_turn(p, c, t, Stage::Bargaining, chat, opts, round));
        const auto reply = mediator_turn(mediator, c, t, round, chat, opts);
        last_mediator_reply = reply.content;
        append(reply);
        if (round == config.bargaining_rounds_max) break;

        const std::vector<Utterance> round_utterances(t.utterances.begin() + static_cast<std::ptrdiff_t>(round_start),
                                                      t.utterances.end());
        const auto check = detect_termination(c, round_utterances, round, chat, opts);
        if (check.warning) outcome.warnings.push_back(*check.warning);
        if (check.status == RoundStatus::Agreement) {
          state.terminate(Termination::Agreement);
          break;
        }
        if (check.status == RoundStatus::Impasse) {
          state.terminate(Termination::Impasse);
          break;
        }
        for (auto& p : profiles) {
          if (p.dynamic) reflect_and_maybe_switch(p, c, t, round, chat, opts, &outcome.warnings);
        }
      }
    }
    if (!state.terminated) state.terminate(Termination::RoundLimit);
    outcome.termination = *state.terminated;
    outcome.bargaining_rounds = state.round;

    // V. Closure
    if (config.enabled(Stage::Closure)) {
      state.current_stage = Stage::Closure;
      auto final_proposal = mediator_final_proposal(mediator, c, t, state.proposal, *state.terminated, chat, opts);
      t.append(Stage::Closure, mediator.name, Role::Mediator, final_proposal.solution);
      state.proposal = std::move(final_proposal);
    } else if (!state.proposal) {
      state.proposal = MediationProposal{{}, {}, last_mediator_reply};
    }
    outcome.proposal = *state.proposal;

    for (const auto& p : profiles) {
      outcome.decisions[p.name] = decide_acceptance(p, c, t, outcome.proposal, chat, opts);
      outcome.satisfaction[p.name] = rate_satisfaction(p, c, t, outcome.proposal, chat, opts);
    }
  } catch (const SessionAborted&) {
    throw;
  } catch (const Error& e) {
    throw SessionAborted(e.code(), "session " + c.id + "/" + t.run_id + " aborted in " +
                                       std::string(to_string(state.current_stage)) + ": " + e.what(),
                         t);
  }
  return result;
}

}  // namespace medsim
