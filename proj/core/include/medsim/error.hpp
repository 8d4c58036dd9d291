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

#include <stdexcept>
#include <string>
#include <string_view>

namespace medsim {

enum class Errc {
  // core-model
  EmptyBasis,
  UnknownLabel,
  TooFewParties,
  DuplicatePartyName,
  EmptyBrief,
  InvalidCase,
  // providers
  ProviderExhausted,
  ScriptMiss,
  MalformedResponse,
  RetrievalUnavailable,
  // preprocess / agents
  ExtractionParseError,
  ValidationError,
  EmptyUtterance,
  ProposalParseError,
  DecisionParseError,
  RatingParseError,
  // evaluate
  ScoreParseError,
  ScorerUnavailable,
  NoCases,
  EmptyCounts,
  EmptyReference,
  EmptyGold,
  // perturb
  TaxonomyInvalid,
  SubcausePickError,
  RewriteError,
  // stats
  DegenerateTable,
  ZeroVariance,
  LengthMismatch,
  ConstantInput,
  // harness / plumbing
  PlanInvalid,
  MissingBaseline,
  TemplateError,
  PreconditionViolation,
  IoError,
  ConfigError,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by medsim carries a machine-checkable code plus a
/// human-readable message; callers switch on code(), logs print what().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace medsim
