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

#include "medsim/model.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

#include "medsim/error.hpp"
#include "medsim/text.hpp"

namespace medsim {

void validate_raw_case(const RawCase& raw) {
  if (text::trim(raw.title).empty()) throw Error(Errc::InvalidCase, "raw case title is empty");
  if (text::trim(raw.brief).empty()) throw Error(Errc::InvalidCase, "raw case brief is empty");
  if (raw.keywords.empty()) throw Error(Errc::InvalidCase, "raw case has no keywords");
}

namespace {

std::string fold_quotes(std::string s) {
  static const std::pair<std::string_view, std::string_view> kMap[] = {
      {"‘", "'"}, {"’", "'"}, {"“", "\""}, {"”", "\""}};
  for (const auto& [from, to] : kMap) {
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
      s.replace(pos, from.size(), to);
    }
  }
  return s;
}

std::string strip_trailing_separators(std::string s) {
  // ASCII separators plus fullwidth comma/colon/semicolon and ideographic comma.
  static const std::string_view kWide[] = {"，", "：", "；", "、"};
  bool changed = true;
  while (changed && !s.empty()) {
    changed = false;
    const char c = s.back();
    if (c == ',' || c == ';' || c == ':' || c == ' ' || c == '\t' || c == '-') {
      s.pop_back();
      changed = true;
      continue;
    }
    for (auto w : kWide) {
      if (s.size() >= w.size() && s.compare(s.size() - w.size(), w.size(), w) == 0) {
        s.resize(s.size() - w.size());
        changed = true;
        break;
      }
    }
  }
  return text::trim(s);
}

}  // namespace

std::string LegalBasis::key() const {
  std::string k = fold_quotes(text::casefold(text::collapse_whitespace(law)));
  k.push_back('#');
  if (article) k += std::to_string(*article);
  return k;
}

std::string LegalBasis::display() const {
  if (!article) return law;
  return law + ", Article " + std::to_string(*article);
}

LegalBasis normalize_legal_basis(std::string_view raw) {
  const std::string trimmed = text::trim(raw);
  if (trimmed.empty()) throw Error(Errc::EmptyBasis, "legal basis text is blank");
  const std::string collapsed = text::collapse_whitespace(trimmed);

  static const std::regex kEnglish(R"((?:^|[^A-Za-z])(?:articles?|art\.?)\s*(\d+))",
                                   std::regex::icase);
  static const std::regex kChinese("\xE7\xAC\xAC\\s*(\\d+)\\s*\xE6\x9D\xA1");  // 第 N 条

  LegalBasis basis;
  basis.raw = std::string(raw);
  std::smatch m;
  std::size_t marker = std::string::npos;
  if (std::regex_search(collapsed, m, kEnglish)) {
    marker = static_cast<std::size_t>(m.position(0));
    // The leading [^A-Za-z] guard may have consumed one separator character.
    if (marker < collapsed.size() && !std::isalpha(static_cast<unsigned char>(collapsed[marker]))) {
      ++marker;
    }
  } else if (std::regex_search(collapsed, m, kChinese)) {
    marker = static_cast<std::size_t>(m.position(0));
  }
  if (marker != std::string::npos) {
    const auto digits = m.str(1);
    try {
      const unsigned long v = std::stoul(digits);
      if (v > 0 && v <= 0xFFFFFFFFul) basis.article = static_cast<std::uint32_t>(v);
    } catch (const std::exception&) {
      // out of range: keep the basis as a plain document reference
    }
    basis.law = strip_trailing_separators(collapsed.substr(0, marker));
    if (basis.law.empty()) basis.law = collapsed;
  } else {
    basis.law = collapsed;
  }
  return basis;
}

ValidationReport validate_dispute_case(const DisputeCase& c) {
  if (c.parties.size() < 2) {
    throw Error(Errc::TooFewParties,
                "case '" + c.id + "' has " + std::to_string(c.parties.size()) + " parties; need at least 2");
  }
  std::set<std::string> seen;
  for (const auto& p : c.parties) {
    const auto k = text::label_key(p);
    if (k.empty()) throw Error(Errc::InvalidCase, "case '" + c.id + "' has a blank party name");
    if (!seen.insert(k).second) {
      throw Error(Errc::DuplicatePartyName, "case '" + c.id + "' lists party '" + p + "' twice");
    }
  }
  if (text::trim(c.brief).empty()) throw Error(Errc::EmptyBrief, "case '" + c.id + "' has an empty brief");

  ValidationReport report;
  if (c.parties.size() > kObservedMaxParties) {
    report.warnings.push_back("case '" + c.id + "' has " + std::to_string(c.parties.size()) +
                              " parties, more than the " + std::to_string(kObservedMaxParties) +
                              " observed in the reference corpus");
  }
  return report;
}

Level assertiveness(TKIMode mode) noexcept {
  switch (mode) {
    case TKIMode::Competing: return Level::High;
    case TKIMode::Collaborating: return Level::High;
    case TKIMode::Compromising: return Level::Moderate;
    case TKIMode::Avoiding: return Level::Low;
    case TKIMode::Accommodating: return Level::Low;
  }
  return Level::Moderate;
}

Level cooperativeness(TKIMode mode) noexcept {
  switch (mode) {
    case TKIMode::Competing: return Level::Low;
    case TKIMode::Collaborating: return Level::High;
    case TKIMode::Compromising: return Level::Moderate;
    case TKIMode::Avoiding: return Level::Low;
    case TKIMode::Accommodating: return Level::High;
  }
  return Level::Moderate;
}

std::string_view to_string(TKIMode mode) noexcept {
  switch (mode) {
    case TKIMode::Competing: return "Competing";
    case TKIMode::Collaborating: return "Collaborating";
    case TKIMode::Compromising: return "Compromising";
    case TKIMode::Avoiding: return "Avoiding";
    case TKIMode::Accommodating: return "Accommodating";
  }
  return "?";
}

std::string_view to_string(Level level) noexcept {
  switch (level) {
    case Level::Low: return "Low";
    case Level::Moderate: return "Moderate";
    case Level::High: return "High";
  }
  return "?";
}

std::optional<TKIMode> parse_mode(std::string_view name) {
  const auto k = text::label_key(name);
  for (auto m : kAllModes) {
    if (text::casefold(to_string(m)) == k) return m;
  }
  return std::nullopt;
}

std::string_view label(LikertLevel level) noexcept {
  switch (level) {
    case LikertLevel::VeryLow: return "Very Low";
    case LikertLevel::Low: return "Low";
    case LikertLevel::Medium: return "Medium";
    case LikertLevel::High: return "High";
    case LikertLevel::VeryHigh: return "Very High";
  }
  return "?";
}

LikertLevel likert_from_label(std::string_view text_in) {
  const auto k = text::label_key(text_in);
  for (auto l : kAllLikertLevels) {
    if (text::casefold(label(l)) == k) return l;
  }
  throw Error(Errc::UnknownLabel, "'" + std::string(text_in) + "' is not one of Very Low / Low / Medium / High / Very High");
}

LikertLevel likert_from_score(int s) {
  if (s < 0 || s > 4) throw Error(Errc::UnknownLabel, "Likert score out of range: " + std::to_string(s));
  return static_cast<LikertLevel>(s);
}

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::Preliminary: return "Preliminary";
    case Stage::Statement: return "Statement";
    case Stage::OptionGeneration: return "OptionGeneration";
    case Stage::Bargaining: return "Bargaining";
    case Stage::Closure: return "Closure";
  }
  return "?";
}

std::optional<Stage> parse_stage(std::string_view name) {
  const auto k = text::label_key(name);
  for (auto s : kPipelineOrder) {
    if (text::casefold(to_string(s)) == k) return s;
  }
  if (k == "option generation" || k == "option_generation") return Stage::OptionGeneration;
  return std::nullopt;
}

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::Mediator: return "Mediator";
    case Role::Party: return "Party";
    case Role::System: return "System";
  }
  return "?";
}

std::optional<Role> parse_role(std::string_view name) {
  const auto k = text::label_key(name);
  if (k == "mediator") return Role::Mediator;
  if (k == "party") return Role::Party;
  if (k == "system") return Role::System;
  return std::nullopt;
}

const Utterance& Transcript::append(Stage stage, std::string speaker, Role role, std::string content) {
  std::uint32_t next = 0;
  if (!utterances.empty()) {
    if (static_cast<int>(stage) < static_cast<int>(utterances.back().stage)) {
      throw Error(Errc::PreconditionViolation,
                  "stage " + std::string(to_string(stage)) + " after " +
                      std::string(to_string(utterances.back().stage)));
    }
    next = utterances.back().turn_index + 1;
  }
  utterances.push_back(Utterance{stage, next, std::move(speaker), role, std::move(content)});
  return utterances.back();
}

std::vector<Stage> Transcript::stage_sequence() const {
  std::vector<Stage> seq;
  for (const auto& u : utterances) {
    if (seq.empty() || seq.back() != u.stage) seq.push_back(u.stage);
  }
  return seq;
}

void validate_transcript(const Transcript& t) {
  for (std::size_t i = 1; i < t.utterances.size(); ++i) {
    const auto& prev = t.utterances[i - 1];
    const auto& cur = t.utterances[i];
    if (cur.turn_index <= prev.turn_index) {
      throw Error(Errc::PreconditionViolation, "turn index not strictly increasing at position " + std::to_string(i));
    }
    if (static_cast<int>(cur.stage) < static_cast<int>(prev.stage)) {
      throw Error(Errc::PreconditionViolation, "stage order regresses at position " + std::to_string(i));
    }
  }
}

std::string MediationProposal::render() const {
  std::string out;
  if (!points_of_contention.empty()) out += "Points of contention: " + points_of_contention + "\n";
  if (!legal_bases.empty()) {
    out += "Legal bases:\n";
    for (std::size_t i = 0; i < legal_bases.size(); ++i) {
      out += std::to_string(i + 1) + ". " + legal_bases[i].display() + "\n";
    }
  }
  out += "Solution: " + solution;
  return out;
}

std::string_view to_string(Decision d) noexcept {
  switch (d) {
    case Decision::Accept: return "Accept";
    case Decision::Reject: return "Reject";
    case Decision::Undecided: return "Undecided";
  }
  return "?";
}

std::optional<Decision> parse_decision(std::string_view t) {
  const auto k = text::label_key(t);
  if (k == "accept") return Decision::Accept;
  if (k == "reject") return Decision::Reject;
  if (k == "undecided") return Decision::Undecided;
  return std::nullopt;
}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::Agreement: return "Agreement";
    case Termination::Impasse: return "Impasse";
    case Termination::RoundLimit: return "RoundLimit";
  }
  return "?";
}

std::optional<Termination> parse_termination(std::string_view t) {
  const auto k = text::label_key(t);
  if (k == "agreement") return Termination::Agreement;
  if (k == "impasse") return Termination::Impasse;
  if (k == "roundlimit") return Termination::RoundLimit;
  return std::nullopt;
}

bool SessionOutcome::successful() const {
  return !decisions.empty() &&
         std::all_of(decisions.begin(), decisions.end(),
                     [](const auto& kv) { return kv.second.decision == Decision::Accept; });
}

void validate_outcome(const SessionOutcome& outcome, const DisputeCase& c) {
  const std::set<std::string> expected(c.parties.begin(), c.parties.end());
  std::set<std::string> got_d;
  std::set<std::string> got_s;
  for (const auto& [k, v] : outcome.decisions) got_d.insert(k);
  for (const auto& [k, v] : outcome.satisfaction) got_s.insert(k);
  if (got_d != expected || got_s != expected) {
    throw Error(Errc::PreconditionViolation, "outcome does not cover exactly the parties of case '" + c.id + "'");
  }
}

}  // namespace medsim
