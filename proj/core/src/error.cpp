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

#include "medsim/error.hpp"

namespace medsim {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyBasis: return "EmptyBasis";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::TooFewParties: return "TooFewParties";
    case Errc::DuplicatePartyName: return "DuplicatePartyName";
    case Errc::EmptyBrief: return "EmptyBrief";
    case Errc::InvalidCase: return "InvalidCase";
    case Errc::ProviderExhausted: return "ProviderExhausted";
    case Errc::ScriptMiss: return "ScriptMiss";
    case Errc::MalformedResponse: return "MalformedResponse";
    case Errc::RetrievalUnavailable: return "RetrievalUnavailable";
    case Errc::ExtractionParseError: return "ExtractionParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::EmptyUtterance: return "EmptyUtterance";
    case Errc::ProposalParseError: return "ProposalParseError";
    case Errc::DecisionParseError: return "DecisionParseError";
    case Errc::RatingParseError: return "RatingParseError";
    case Errc::ScoreParseError: return "ScoreParseError";
    case Errc::ScorerUnavailable: return "ScorerUnavailable";
    case Errc::NoCases: return "NoCases";
    case Errc::EmptyCounts: return "EmptyCounts";
    case Errc::EmptyReference: return "EmptyReference";
    case Errc::EmptyGold: return "EmptyGold";
    case Errc::TaxonomyInvalid: return "TaxonomyInvalid";
    case Errc::SubcausePickError: return "SubcausePickError";
    case Errc::RewriteError: return "RewriteError";
    case Errc::DegenerateTable: return "DegenerateTable";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ConstantInput: return "ConstantInput";
    case Errc::PlanInvalid: return "PlanInvalid";
    case Errc::MissingBaseline: return "MissingBaseline";
    case Errc::TemplateError: return "TemplateError";
    case Errc::PreconditionViolation: return "PreconditionViolation";
    case Errc::IoError: return "IoError";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

}  // namespace medsim
