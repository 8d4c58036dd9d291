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

#include "medsim/agents.hpp"

#include <spdlog/spdlog.h>

#include "elicit.hpp"
#include "medsim/error.hpp"
#include "medsim/json_extract.hpp"
#include "medsim/text.hpp"

namespace medsim {

namespace {

std::string_view mode_description(TKIMode mode) {
  switch (mode) {
    case TKIMode::Competing:
      return "You pursue your own interests first, prioritizing self-interest and pressing to prevail over the other side.";
    case TKIMode::Collaborating:
      return "You engage deeply with the other side to reach win-win outcomes that fully address everyone's concerns.";
    case TKIMode::Compromising:
      return "You look for a middle ground in which each side concedes part of its demands.";
    case TKIMode::Avoiding:
      return "You withdraw from the conflict, sidestep contentious issues and postpone confrontation.";
    case TKIMode::Accommodating:
      return "You put the other side's interests ahead of your own and readily yield to their demands.";
  }
  return "";
}

std::string parties_list(const DisputeCase& c) { return text::join(c.parties, ", "); }

PromptVars base_vars(const DisputeCase& c, const Transcript& so_far, const PromptLibrary& lib) {
  return PromptVars{{"case_background", render_case_background(c, lib)},
                    {"history", render_history(so_far)},
                    {"parties", parties_list(c)}};
}

std::string party_system_prompt(const PartyProfile& profile, const PromptLibrary& lib) {
  const std::string stance = text::trim(profile.stance);
  return lib.render("party_system",
                    {{"name", profile.name}, {"stance_line", stance.empty() ? "" : " Your position: " + stance}});
}

std::string mediator_system_prompt(const MediatorProfile& m, const PromptLibrary& lib) {
  return lib.render("mediator_system", {{"name", m.name}});
}

Utterance make_utterance(const Transcript& so_far, Stage stage, std::string speaker, Role role, std::string content) {
  Utterance u;
  u.stage = stage;
  u.turn_index = so_far.utterances.empty() ? 0 : so_far.utterances.back().turn_index + 1;
  u.speaker = std::move(speaker);
  u.role = role;
  u.content = std::move(content);
  return u;
}

std::string require_content(const ChatResponse& r, const std::string& tag) {
  std::string t = text::trim(r.content);
  if (t.empty()) throw Error(Errc::EmptyUtterance, "'" + tag + "' produced a blank utterance");
  return t;
}

std::optional<std::string> string_field(const nlohmann::json& obj, std::string_view key) {
  const auto* v = find_key(obj, key);
  if (!v || !v->is_string()) return std::nullopt;
  return v->get<std::string>();
}

}  // namespace

std::string render_strategy_directive(std::optional<TKIMode> mode) {
  if (!mode) return {};
  std::string out = "Behavioral strategy: ";
  out += to_string(*mode);
  out += " (assertiveness: ";
  out += to_string(assertiveness(*mode));
  out += ", cooperativeness: ";
  out += to_string(cooperativeness(*mode));
  out += "). ";
  out += mode_description(*mode);
  out += " Keep to this strategy in everything you say.";
  return out;
}

std::string render_history(const std::vector<Utterance>& utterances) {
  if (utterances.empty()) return "(no dialogue yet)";
  std::string out;
  for (const auto& u : utterances) {
    if (!out.empty()) out.push_back('\n');
    out += "[";
    out += to_string(u.stage);
    out += "] ";
    out += u.speaker;
    out += " (";
    out += to_string(u.role);
    out += "): ";
    out += u.content;
  }
  return out;
}

std::string render_history(const Transcript& transcript) { return render_history(transcript.utterances); }

std::string render_case_background(const DisputeCase& c, const PromptLibrary& lib) {
  return lib.render("case_background",
                    {{"dispute_type", c.dispute_type}, {"parties", parties_list(c)}, {"brief", c.brief}});
}

std::string render_facts(const DisputeCase& c) {
  std::string out;
  for (std::size_t i = 0; i < c.facts.size(); ++i) {
    if (i) out.push_back('\n');
    out += std::to_string(i + 1) + ". " + c.facts[i];
  }
  return out;
}

Utterance party_turn(const PartyProfile& profile, const DisputeCase& c, const Transcript& so_far, Stage stage,
                     ChatBackend& chat, const CallOptions& opts, std::uint32_t round) {
  const auto& lib = opts.library();
  std::string tag;
  std::string instruction;
  switch (stage) {
    case Stage::Statement:
      tag = "statement:" + profile.name;
      instruction = lib.render("instruction_statement", {});
      break;
    case Stage::Bargaining:
      tag = "bargain:" + profile.name + ":round" + std::to_string(round);
      instruction = lib.render("instruction_bargaining", {{"round", std::to_string(round)}});
      break;
    case Stage::Closure:
      tag = "closure:" + profile.name;
      instruction = lib.render("instruction_closure", {});
      break;
    default:
      throw Error(Errc::PreconditionViolation,
                  "party turns happen in Statement, Bargaining or Closure, not " + std::string(to_string(stage)));
  }
  auto vars = base_vars(c, so_far, lib);
  const auto directive = render_strategy_directive(profile.strategy);
  vars["strategy_block"] = directive.empty() ? std::string{} : "\n" + directive + "\n";
  vars["stage"] = std::string(to_string(stage));
  vars["stage_instruction"] = instruction;
  auto req = detail::make_request(party_system_prompt(profile, lib), lib.render("party_turn", vars), tag, opts);
  const auto resp = chat_complete(req, chat);
  return make_utterance(so_far, stage, profile.name, Role::Party, require_content(resp, tag));
}

Utterance mediator_intro(const MediatorProfile& mediator, const DisputeCase& c, const Transcript& so_far,
                         ChatBackend& chat, const CallOptions& opts) {
  const auto& lib = opts.library();
  auto req = detail::make_request(mediator_system_prompt(mediator, lib),
                                  lib.render("mediator_intro", base_vars(c, so_far, lib)), "mediator_intro", opts);
  const auto resp = chat_complete(req, chat);
  return make_utterance(so_far, Stage::Statement, mediator.name, Role::Mediator, require_content(resp, req.tag));
}

Utterance mediator_turn(const MediatorProfile& mediator, const DisputeCase& c, const Transcript& so_far,
                        std::uint32_t round, ChatBackend& chat, const CallOptions& opts) {
  const auto& lib = opts.library();
  auto vars = base_vars(c, so_far, lib);
  vars["round"] = std::to_string(round);
  auto req = detail::make_request(mediator_system_prompt(mediator, lib), lib.render("mediator_turn", vars),
                                  "mediator_turn:round" + std::to_string(round), opts);
  const auto resp = chat_complete(req, chat);
  return make_utterance(so_far, Stage::Bargaining, mediator.name, Role::Mediator, require_content(resp, req.tag));
}

ProposalParse parse_proposal(std::string_view content, bool require_points) {
  auto obj = find_object_with_key(content, "solution");
  if (!obj) return {std::nullopt, "no JSON object with a \"solution\" key"};
  MediationProposal p;
  const auto solution = string_field(*obj, "solution");
  if (!solution || text::trim(*solution).empty()) return {std::nullopt, "\"solution\" must be a non-empty string"};
  p.solution = text::trim(*solution);

  if (const auto* points = find_key(*obj, "points_of_contention")) {
    if (points->is_string()) {
      p.points_of_contention = text::trim(points->get<std::string>());
    } else if (points->is_array()) {
      std::vector<std::string> parts;
      for (const auto& x : *points) {
        if (x.is_string()) parts.push_back(text::trim(x.get<std::string>()));
      }
      p.points_of_contention = text::join(parts, " ");
    } else {
      return {std::nullopt, "\"points_of_contention\" must be a string"};
    }
  } else if (require_points) {
    return {std::nullopt, "missing \"points_of_contention\""};
  }

  if (const auto* bases = find_key(*obj, "legal_bases")) {
    if (!bases->is_array()) return {std::nullopt, "\"legal_bases\" must be a list"};
    for (const auto& b : *bases) {
      if (!b.is_string()) return {std::nullopt, "\"legal_bases\" entries must be strings"};
      if (text::trim(b.get<std::string>()).empty()) continue;
      p.legal_bases.push_back(normalize_legal_basis(b.get<std::string>()));
    }
  } else if (require_points) {
    return {std::nullopt, "missing \"legal_bases\""};
  }
  return {std::move(p), {}};
}

MediationProposal mediator_propose(const MediatorProfile& mediator, const DisputeCase& c, const Transcript& so_far,
                                   RetrievalBackend* retrieval, ChatBackend& chat, const CallOptions& opts) {
  if (c.facts.empty()) {
    throw Error(Errc::PreconditionViolation, "case '" + c.id + "' has no dispute facts for option generation");
  }
  const auto& lib = opts.library();
  auto vars = base_vars(c, so_far, lib);
  vars["facts"] = render_facts(c);
  vars["retrieval_block"] = "";
  if (mediator.external_knowledge) {
    if (!retrieval) throw Error(Errc::ConfigError, "external knowledge requested but no retrieval backend bound");
    const auto result = retrieve_legal_bases(c.brief, mediator.top_k, *retrieval);
    std::string listing;
    for (std::size_t i = 0; i < result.bases.size(); ++i) {
      if (i) listing.push_back('\n');
      listing += std::to_string(i + 1) + ". " + result.bases[i].basis.display();
    }
    vars["retrieval_block"] = lib.render("retrieval_block", {{"retrieved", listing}});
  }
  auto req = detail::make_request(mediator_system_prompt(mediator, lib), lib.render("propose", vars), "propose", opts);
  return detail::elicit(chat, std::move(req), lib, Errc::ProposalParseError,
                        [](const std::string& content, std::string& problem) {
                          auto parsed = parse_proposal(content, true);
                          problem = parsed.problem;
                          return parsed.proposal;
                        });
}

MediationProposal mediator_final_proposal(const MediatorProfile& mediator, const DisputeCase& c,
                                          const Transcript& so_far, const std::optional<MediationProposal>& current,
                                          Termination reason, ChatBackend& chat, const CallOptions& opts) {
  const auto& lib = opts.library();
  auto vars = base_vars(c, so_far, lib);
  vars["proposal"] = current ? current->render() : "(no proposal was drafted; rely on the dialogue)";
  vars["termination"] = std::string(to_string(reason));
  auto req = detail::make_request(mediator_system_prompt(mediator, lib), lib.render("final_proposal", vars),
                                  "final_proposal", opts);
  auto p = detail::elicit(chat, std::move(req), lib, Errc::ProposalParseError,
                          [](const std::string& content, std::string& problem) {
                            auto parsed = parse_proposal(content, false);
                            problem = parsed.problem;
                            return parsed.proposal;
                          });
  if (current) {
    if (p.points_of_contention.empty()) p.points_of_contention = current->points_of_contention;
    if (p.legal_bases.empty()) p.legal_bases = current->legal_bases;
  }
  return p;
}

std::optional<PartyDecision> parse_acceptance(std::string_view content, std::string* problem) {
  auto set_problem = [&](std::string p) {
    if (problem) *problem = std::move(p);
    return std::nullopt;
  };
  const auto obj = find_object_with_key(content, "Accept or Not");
  if (!obj) return set_problem("no JSON object with an \"Accept or Not\" key");
  const auto value = string_field(*obj, "Accept or Not");
  if (!value) return set_problem("\"Accept or Not\" must be a string");
  const auto d = parse_decision(*value);
  if (!d) return set_problem("\"" + *value + "\" is not one of Accept / Reject / Undecided");
  return PartyDecision{*d, string_field(*obj, "Reason").value_or("")};
}

std::optional<PartyRating> parse_rating(std::string_view content, std::string_view key, std::string* problem) {
  auto set_problem = [&](std::string p) {
    if (problem) *problem = std::move(p);
    return std::nullopt;
  };
  const auto obj = find_object_with_key(content, key);
  if (!obj) return set_problem("no JSON object with a \"" + std::string(key) + "\" key");
  const auto value = string_field(*obj, key);
  if (!value) return set_problem("\"" + std::string(key) + "\" must be a string");
  try {
    return PartyRating{likert_from_label(*value), string_field(*obj, "Reason").value_or("")};
  } catch (const Error&) {
    return set_problem("\"" + *value + "\" is not one of Very Low / Low / Medium / High / Very High");
  }
}

PartyDecision decide_acceptance(const PartyProfile& profile, const DisputeCase& c, const Transcript& transcript,
                                const MediationProposal& proposal, ChatBackend& chat, const CallOptions& opts) {
  const auto& lib = opts.library();
  auto vars = base_vars(c, transcript, lib);
  vars["proposal"] = proposal.render();
  vars["name"] = profile.name;
  auto req = detail::make_request(party_system_prompt(profile, lib), lib.render("accept", vars),
                                  "accept:" + profile.name, opts);
  return detail::elicit(chat, std::move(req), lib, Errc::DecisionParseError,
                        [](const std::string& content, std::string& problem) {
                          return parse_acceptance(content, &problem);
                        });
}

PartyRating rate_satisfaction(const PartyProfile& profile, const DisputeCase& c, const Transcript& transcript,
                              const MediationProposal& proposal, ChatBackend& chat, const CallOptions& opts) {
  const auto& lib = opts.library();
  auto vars = base_vars(c, transcript, lib);
  vars["proposal"] = proposal.render();
  vars["name"] = profile.name;
  auto req = detail::make_request(party_system_prompt(profile, lib), lib.render("satisfaction", vars),
                                  "satisfaction:" + profile.name, opts);
  return detail::elicit(chat, std::move(req), lib, Errc::RatingParseError,
                        [](const std::string& content, std::string& problem) {
                          return parse_rating(content, "Satisfaction Level", &problem);
                        });
}

ReflectionDecision reflect_and_maybe_switch(PartyProfile& profile, const DisputeCase& c, const Transcript& so_far,
                                            std::uint32_t round, ChatBackend& chat, const CallOptions& opts,
                                            std::vector<std::string>* warnings) {
  if (!profile.strategy) profile.strategy = TKIMode::Compromising;
  const auto& lib = opts.library();
  auto vars = base_vars(c, so_far, lib);
  vars["name"] = profile.name;
  vars["current_mode"] = std::string(to_string(*profile.strategy));
  auto req = detail::make_request(party_system_prompt(profile, lib), lib.render("reflect", vars),
                                  "reflect:" + profile.name + ":round" + std::to_string(round), opts);
  const auto resp = chat_complete(req, chat);

  auto keep_with_warning = [&](const std::string& why) {
    const std::string msg = "reflection for " + profile.name + " in round " + std::to_string(round) +
                            " ignored (" + why + "); keeping " + std::string(to_string(*profile.strategy));
    spdlog::warn("{}", msg);
    if (warnings) warnings->push_back(msg);
    return ReflectionDecision{true, std::nullopt, why};
  };

  const auto obj = find_object_with_key(resp.content, "Decision");
  if (!obj) return keep_with_warning("no JSON object with a \"Decision\" key");
  const auto decision = string_field(*obj, "Decision");
  const auto reason = string_field(*obj, "Reason").value_or("");
  if (!decision) return keep_with_warning("\"Decision\" must be a string");
  const auto key = text::label_key(*decision);
  if (key == "keep") return ReflectionDecision{true, std::nullopt, reason};
  if (key != "switch") return keep_with_warning("decision \"" + *decision + "\" is neither Keep nor Switch");
  const auto mode_text = string_field(*obj, "New Strategy");
  if (!mode_text) return keep_with_warning("switch without a \"New Strategy\"");
  const auto mode = parse_mode(*mode_text);
  if (!mode) return keep_with_warning("\"" + *mode_text + "\" is not a conflict mode");
  profile.strategy = *mode;
  return ReflectionDecision{false, *mode, reason};
}

}  // namespace medsim
