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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "medsim/agents.hpp"
#include "medsim/model.hpp"
#include "medsim/rng.hpp"

namespace medsim {

inline constexpr std::array<std::string_view, 5> kCauseTopLevels = {
    "Information Conflict", "Resource Conflict", "Behavioral Misconduct", "Legal Issues", "External Factors"};

struct CauseCategory {
  std::string name;
  std::vector<std::string> subcategories;

  friend bool operator==(const CauseCategory&, const CauseCategory&) = default;
};

/// Five fixed top-level causes, each with its own subcategory list (which
/// must contain "Other"). Subcategory lists may grow beyond the shipped file.
struct CauseTaxonomy {
  std::vector<CauseCategory> top_levels;

  [[nodiscard]] const CauseCategory* find(std::string_view top_level) const;
  [[nodiscard]] std::size_t subcategory_count() const;

  friend bool operator==(const CauseTaxonomy&, const CauseTaxonomy&) = default;
};

/// {top_level: [subcategory, ...]}; keys starting with '_' are comments.
/// Throws Errc::TaxonomyInvalid on a missing or unknown top level, an empty or
/// duplicated subcategory, or a list without "Other".
CauseTaxonomy taxonomy_from_json(const nlohmann::json& j);
nlohmann::json taxonomy_to_json(const CauseTaxonomy& t);
CauseTaxonomy load_taxonomy(const std::filesystem::path& path);
/// Path of the shipped 29-subcategory taxonomy.
std::filesystem::path default_taxonomy_path();

struct CauseInjectionRecord {
  std::string case_id;
  std::string top_level;
  std::string subcategory;
  std::string original_brief;
  std::string modified_brief;
};
void to_json(nlohmann::json& j, const CauseInjectionRecord& r);
void from_json(const nlohmann::json& j, CauseInjectionRecord& r);

/// Two calls: "cause_pick" chooses a listed subcategory of `top_level`
/// (one re-ask, then SubcausePickError); "cause_rewrite" rewrites the brief to
/// amplify it. Only the brief changes. RewriteError when the new brief is
/// blank, unchanged, or drops a party named in the original brief.
std::pair<DisputeCase, CauseInjectionRecord> inject_cause(const DisputeCase& c, std::string_view top_level,
                                                          const CauseTaxonomy& taxonomy, ChatBackend& chat,
                                                          const CallOptions& opts = {});

enum class ReplaceCount { One, All };
std::string_view to_string(ReplaceCount n) noexcept;
std::optional<ReplaceCount> parse_replace_count(std::string_view s);

/// One: exactly one uniformly chosen party takes `mode`, the rest are left as
/// they were. All: every party takes `mode`. Requires at least two parties.
std::vector<PartyProfile> assign_strategies(std::vector<PartyProfile> parties, TKIMode mode, ReplaceCount num,
                                            Rng& rng);

/// Default profiles (no strategy, not dynamic) in case party order.
std::vector<PartyProfile> default_profiles(const DisputeCase& c);

}  // namespace medsim
