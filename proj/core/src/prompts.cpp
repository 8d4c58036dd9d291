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

#include "medsim/prompts.hpp"

#include <algorithm>

#include "medsim/case_io.hpp"
#include "medsim/error.hpp"

namespace medsim {

namespace {

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

// Returns the identifier length if `s` starting at `open` is `{ident}`, else 0.
std::size_t placeholder_at(std::string_view s, std::size_t open) {
  std::size_t i = open + 1;
  if (i >= s.size() || !ident_start(s[i])) return 0;
  while (i < s.size() && ident_char(s[i])) ++i;
  if (i >= s.size() || s[i] != '}') return 0;
  return i - open - 1;
}

// Acceptance / satisfaction / consensus / litigation-risk prompts keep the
// section markers and JSON contracts of the reference evaluation prompts.
constexpr std::string_view kAccept = R"(CASE BACKGROUND START
{case_background}
CASE BACKGROUND END

DIALOGUE HISTORY START
{history}
DIALOGUE HISTORY END

FINAL MEDIATION PROPOSAL START
{proposal}
FINAL MEDIATION PROPOSAL END

You are "{name}". Based on the above mediation dialogue and the final proposal, please make a genuine decision on whether you accept the mediation outcome. Do not rush to a conclusion. Instead, carefully reflect on your true concerns and interests.

Think through your reasoning step by step first, then end your reply with the JSON object.

Please output strictly in the following JSON format:
{"Accept or Not": "Accept / Reject / Undecided", "Reason": "Brief explanation of your reasoning"})";

constexpr std::string_view kSatisfaction = R"(CASE BACKGROUND START
{case_background}
CASE BACKGROUND END

DIALOGUE HISTORY START
{history}
DIALOGUE HISTORY END

FINAL MEDIATION PROPOSAL START
{proposal}
FINAL MEDIATION PROPOSAL END

You are "{name}". Based on the above mediation dialogue and the final proposal, please express your true and honest level of satisfaction. This is not for others, not to appear cooperative - it's a reflection for yourself:
- Have I been able to express my true concerns during this mediation?
- Were my most important needs directly addressed?
- To what extent does the final agreement fulfill my core expectations?
- Although there may still be disagreements or worries, is this outcome acceptable to me?

Please choose one of the following five levels that best represents your genuine internal feeling, and briefly explain your reason:
- Very Low: I didn't express my true concerns, or they were ignored, rejected, or suppressed. My core needs were unmet, and the process made me feel powerless, marginalized, or antagonized. I find the outcome hard to accept.
- Low: I expressed some views, but important concerns were suppressed or dismissed. My apparent cooperation was mostly to avoid conflict or not embarrass others. I outwardly accepted the result, but feel unsatisfied or regretful inside.
- Medium: I was able to express my stance, and some concerns were addressed. I felt partially heard, though some core issues were not deeply explored. The result is acceptable, but I remain hesitant or uncertain about some parts.
- High: I clearly expressed my stance, and both the other party and mediator responded positively. While I made some concessions, they were within reason. Key issues were addressed, and I basically agree with the outcome.
- Very High: I was able to fully express my thoughts, and my core needs were understood and addressed. The proposal fits my main concerns, and the process made me feel respected and supported. I feel at ease and satisfied with the result.

Think through your reasoning step by step first, then end your reply with the JSON object.

Please output strictly in the following JSON format:
{"Satisfaction Level": "Very Low / Low / Medium / High / Very High", "Reason": "Brief explanation of your judgment"})";

constexpr std::string_view kConsensus = R"(Please evaluate the degree of consensus currently achieved among the disputing parties in the following mediation dialogue, and assign it a level from the following five categories: Very Low / Low / Medium / High / Very High. Provide a brief explanation of your judgment.

CASE BACKGROUND START
{case_background}
CASE BACKGROUND END

DIALOGUE HISTORY START
{history}
DIALOGUE HISTORY END

FINAL MEDIATION PROPOSAL START
{proposal}
FINAL MEDIATION PROPOSAL END

Rating Criteria:
- Very Low: The parties show little meaningful expression or response. Silence, avoidance, or hostile language are common. Key issues are sidestepped. The dialogue remains superficial with no basis for negotiation and no signs of progress.
- Low: Some willingness to listen and understand is present, but interaction is mostly attitudinal. There is no deep engagement with concrete issues, and consensus intentions remain vague.
- Medium: Initial signs of consensus are emerging. Both parties show a willingness to solve problems. Positions converge on some issues or preliminary solutions begin to form. However, key matters remain unresolved and progress is still fragile.
- High: A preliminary agreement is forming on major issues. Language is concrete and interaction is constructive. A shared framework for resolution is largely in place, and substantive negotiation is underway.
- Very High: The parties have reached a clear agreement on major issues. Collaboration is active, and the direction of resolution is well-defined and executable. The process is ready for conclusion or formal agreement drafting.

Think through your reasoning step by step first, then end your reply with the JSON object.

Please output strictly in the following JSON format:
{"Consensus Level": "Very Low / Low / Medium / High / Very High", "Reason": "Brief explanation of your judgment"})";

constexpr std::string_view kLitigationRisk = R"(Please evaluate the current level of conflict escalation risk based on the following mediation dialogue, and assign it a level from the following five categories: Very Low / Low / Medium / High / Very High. Provide a brief explanation of your judgment.

CASE BACKGROUND START
{case_background}
CASE BACKGROUND END

DIALOGUE HISTORY START
{history}
DIALOGUE HISTORY END

FINAL MEDIATION PROPOSAL START
{proposal}
FINAL MEDIATION PROPOSAL END

Rating Criteria:
- Very Low: Communication is smooth and emotions are calm. Views are expressed fully and rationally. Differences are minor or a preliminary consensus has been reached. Mediation is progressing substantively with little need for external intervention.
- Low: Although differences exist, parties communicate openly and use measured language. There is a clear willingness to negotiate and interactions are constructive. Mediation is sustainable and can proceed productively.
- Medium: Clear disagreements exist or mediation is slow-moving. Indicators include vague statements, frequent concessions, avoidance of substantive issues, or over-accommodation that suppresses core demands. No direct confrontation yet, but lacks meaningful progress. Close attention and timely guidance are needed.
- High: Confrontational language is frequent and communication is near breakdown. Mediation has largely stalled or been resisted. Some parties may begin favoring litigation.
- Very High: Emotions are severely out of control and communication has collapsed. Some parties explicitly express intent to resort to legal or external means.

Think through your reasoning step by step first, then end your reply with the JSON object.

Please output strictly in the following JSON format:
{"Conflict Risk Level": "Very Low / Low / Medium / High / Very High", "Reason": "Brief explanation of your judgment"})";

constexpr std::string_view kCaseBackground = R"(Dispute type: {dispute_type}
Parties: {parties}
Dispute brief: {brief})";

constexpr std::string_view kPreliminary = R"(The mediation session is now open. Dispute brief: {brief})";

constexpr std::string_view kPartySystem =
    R"(You are "{name}", one of the disputing parties in a civil dispute mediation. Speak only as {name}, in the first person, and never write lines for other participants.{stance_line})";

constexpr std::string_view kMediatorSystem =
    R"(You are "{name}", a neutral, professional mediator of civil disputes. You guide the parties, keep order, stay impartial, and ground proposals in the facts and the applicable law.)";

constexpr std::string_view kMediatorIntro = R"(CASE BACKGROUND START
{case_background}
CASE BACKGROUND END

DIALOGUE HISTORY START
{history}
DIALOGUE HISTORY END

The Statement stage begins. Introduce yourself, state that you are neutral, explain how the session will proceed, and invite the parties ({parties}) to state their positions in turn. Reply with your utterance only.)";

constexpr std::string_view kPartyTurn = R"(CASE BACKGROUND START
{case_background}
CASE BACKGROUND END
{strategy_block}
DIALOGUE HISTORY START
{history}
DIALOGUE HISTORY END

Current stage: {stage}
{stage_instruction}
Reply with your next utterance only.)";

constexpr std::string_view kStatementInstruction =
    R"(Introduce yourself and state your position and your claims clearly, based on the facts you know.)";

constexpr std::string_view kBargainingInstruction =
    R"(Respond to the mediator's proposal and to the other parties. You may agree, disagree, or propose an alternative. This is bargaining round {round}.)";

constexpr std::string_view kClosureInstruction =
    R"(The mediation is closing. Give your final remarks on the mediator's final solution.)";

constexpr std::string_view kPropose = R"(CASE BACKGROUND START
{case_background}
CASE BACKGROUND END

DISPUTE FACTS START
{facts}
DISPUTE FACTS END
{retrieval_block}
DIALOGUE HISTORY START
{history}
DIALOGUE HISTORY END

The Option Generation stage begins. Based on the dispute facts, draft a preliminary mediation proposal that identifies the points of contention, cites the supporting legal bases (statute name and article number), and proposes a concrete solution.

Please output strictly in the following JSON format:
{"points_of_contention": "The core issues in dispute", "legal_bases": ["Statute name, Article N", "..."], "solution": "The proposed resolution"})";

constexpr std::string_view kRetrievalBlock = R"(
RETRIEVED LEGAL BASES START
{retrieved}
RETRIEVED LEGAL BASES END
)";

constexpr std::string_view kMediatorTurn = R"(CASE BACKGROUND START
{case_background}
CASE BACKGROUND END

DIALOGUE HISTORY START
{history}
DIALOGUE HISTORY END

Bargaining round {round} has heard from every party. As mediator, respond: address each party's concerns, narrow the differences, and adjust or defend the proposal. Reply with your utterance only.)";

constexpr std::string_view kFinalProposal = R"(CASE BACKGROUND START
{case_background}
CASE BACKGROUND END

DIALOGUE HISTORY START
{history}
DIALOGUE HISTORY END

CURRENT PROPOSAL START
{proposal}
CURRENT PROPOSAL END

The bargaining stage has ended ({termination}). As mediator, state the final mediation solution, taking the whole dialogue into account.

Please output strictly in the following JSON format:
{"points_of_contention": "The core issues in dispute", "legal_bases": ["Statute name, Article N", "..."], "solution": "The final mediation solution"})";

constexpr std::string_view kTermination = R"(CASE BACKGROUND START
{case_background}
CASE BACKGROUND END

ROUND DIALOGUE START
{round_history}
ROUND DIALOGUE END

Classify the state of the mediation after bargaining round {round}:
- Agreement: all parties have agreed to a resolution.
- Impasse: a party has confirmed a firm disagreement and further bargaining is pointless.
- Continue: neither of the above.

Think step by step first, then end your reply with the JSON object.

Please output strictly in the following JSON format:
{"Status": "Agreement / Impasse / Continue", "Reason": "One-line explanation"})";

constexpr std::string_view kReflect = R"(CASE BACKGROUND START
{case_background}
CASE BACKGROUND END

DIALOGUE HISTORY START
{history}
DIALOGUE HISTORY END

You are "{name}". Your current behavioral strategy is {current_mode}. Assess the current state of the dialogue, how the other parties are behaving, and which topics are in focus. Then decide whether to keep your strategy or switch to one of: Competing, Collaborating, Compromising, Avoiding, Accommodating.

Please output strictly in the following JSON format:
{"Decision": "Keep / Switch", "New Strategy": "Competing / Collaborating / Compromising / Avoiding / Accommodating", "Reason": "Brief explanation"})";

constexpr std::string_view kSimilarity = R"(Rate the semantic similarity of the two texts below on a scale from 0 (unrelated) to 1 (same meaning).

TEXT A START
{text_a}
TEXT A END

TEXT B START
{text_b}
TEXT B END

Please output strictly in the following JSON format:
{"Similarity": 0.0, "Reason": "One-line explanation"})";

constexpr std::string_view kExtract = R"(You are a legal data annotator. Extract the structured elements of the mediation case below.

TITLE: {title}
KEYWORDS: {keywords}
BRIEF START
{brief}
BRIEF END
METHOD START
{method}
METHOD END
BASES START
{bases}
BASES END

Return:
- dispute_type: a short dispute type label (for example "housing contract").
- facts: the key dispute facts as a list of short statements.
- parties: the names of all disputing parties.
- points_of_contention: one paragraph, drawn from the brief and the method, describing the core issues in dispute.
- legal_bases: every legal basis, one statute article or document per entry (for example "Civil Code of the People's Republic of China, Article 533").

Please output strictly in the following JSON format:
{"dispute_type": "...", "facts": ["..."], "parties": ["..."], "points_of_contention": "...", "legal_bases": ["..."]})";

constexpr std::string_view kCausePick = R"(DISPUTE BRIEF START
{brief}
DISPUTE BRIEF END

We want to strengthen the "{top_level}" cause of this dispute. Choose the single most contextually appropriate sub-cause from this list:
{subcategories}

Please output strictly in the following JSON format:
{"Subcategory": "<one name from the list>", "Reason": "Brief explanation"})";

constexpr std::string_view kCauseRewrite = R"(DISPUTE BRIEF START
{brief}
DISPUTE BRIEF END

Rewrite the dispute brief so that the cause "{subcategory}" (a kind of {top_level}) is introduced or clearly amplified. Keep every party ({parties}) and keep the other facts consistent. Change nothing but the brief.

Please output strictly in the following JSON format:
{"Brief": "The rewritten dispute brief"})";

constexpr std::string_view kFormatReminder =
    R"(Your previous reply could not be used: {problem}. Reply again and end with exactly one JSON object in the required format.)";

}  // namespace

PromptLibrary::PromptLibrary() {
  templates_ = {
      {"accept", std::string(kAccept)},
      {"satisfaction", std::string(kSatisfaction)},
      {"consensus", std::string(kConsensus)},
      {"litigation_risk", std::string(kLitigationRisk)},
      {"case_background", std::string(kCaseBackground)},
      {"preliminary", std::string(kPreliminary)},
      {"party_system", std::string(kPartySystem)},
      {"mediator_system", std::string(kMediatorSystem)},
      {"mediator_intro", std::string(kMediatorIntro)},
      {"party_turn", std::string(kPartyTurn)},
      {"instruction_statement", std::string(kStatementInstruction)},
      {"instruction_bargaining", std::string(kBargainingInstruction)},
      {"instruction_closure", std::string(kClosureInstruction)},
      {"propose", std::string(kPropose)},
      {"retrieval_block", std::string(kRetrievalBlock)},
      {"mediator_turn", std::string(kMediatorTurn)},
      {"final_proposal", std::string(kFinalProposal)},
      {"termination", std::string(kTermination)},
      {"reflect", std::string(kReflect)},
      {"similarity", std::string(kSimilarity)},
      {"extract", std::string(kExtract)},
      {"cause_pick", std::string(kCausePick)},
      {"cause_rewrite", std::string(kCauseRewrite)},
      {"format_reminder", std::string(kFormatReminder)},
  };
}

const PromptLibrary& PromptLibrary::builtin() {
  static const PromptLibrary lib;
  return lib;
}

void PromptLibrary::load_overrides(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(Errc::TemplateError, "prompt override directory not found: " + dir.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    set(entry.path().stem().string(), read_file(entry.path()));
  }
}

void PromptLibrary::set(std::string_view name, std::string tmpl) {
  auto it = templates_.find(name);
  if (it == templates_.end()) {
    throw Error(Errc::TemplateError, "unknown prompt template '" + std::string(name) + "'");
  }
  it->second = std::move(tmpl);
}

const std::string& PromptLibrary::get(std::string_view name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) {
    throw Error(Errc::TemplateError, "unknown prompt template '" + std::string(name) + "'");
  }
  return it->second;
}

std::string PromptLibrary::render(std::string_view name, const PromptVars& vars) const {
  try {
    return render_template(get(name), vars);
  } catch (const Error& e) {
    throw Error(Errc::TemplateError, "template '" + std::string(name) + "': " + e.what());
  }
}

std::vector<std::string> PromptLibrary::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : templates_) out.push_back(k);
  return out;
}

std::string render_template(std::string_view tmpl, const PromptVars& vars) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      if (const auto len = placeholder_at(tmpl, i)) {
        const auto name = tmpl.substr(i + 1, len);
        auto it = vars.find(name);
        if (it == vars.end()) {
          throw Error(Errc::TemplateError, "no value for placeholder {" + std::string(name) + "}");
        }
        out += it->second;
        i += len + 2;
        continue;
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

std::vector<std::string> template_placeholders(std::string_view tmpl) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] != '{') continue;
    if (const auto len = placeholder_at(tmpl, i)) {
      std::string name(tmpl.substr(i + 1, len));
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
      i += len + 1;
    }
  }
  return out;
}

}  // namespace medsim
