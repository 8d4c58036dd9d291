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

#include "medsim/perturb.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "elicit.hpp"
#include "medsim/case_io.hpp"
#include "medsim/error.hpp"
#include "medsim/json_extract.hpp"
#include "medsim/text.hpp"

#ifndef MEDSIM_DEFAULT_DATA_DIR
#define MEDSIM_DEFAULT_DATA_DIR "data"
#endif

namespace medsim {

const CauseCategory* CauseTaxonomy::find(std::string_view top_level) const {
  const auto k = text::label_key(top_level);
  for (const auto& t : top_levels) {
    if (text::label_key(t.name) == k) return &t;
  }
  return nullptr;
}

std::size_t CauseTaxonomy::subcategory_count() const {
  std::size_t n = 0;
  for (const auto& t : top_levels) n += t.subcategories.size();
  return n;
}

CauseTaxonomy taxonomy_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(Errc::TaxonomyInvalid, "taxonomy must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!key.empty() && key.front() == '_') continue;
    const bool known = std::any_of(kCauseTopLevels.begin(), kCauseTopLevels.end(),
                                   [&](std::string_view t) { return t == key; });
    if (!known) throw Error(Errc::TaxonomyInvalid, "unknown top-level cause '" + key + "'");
  }
  CauseTaxonomy tax;
  for (auto name : kCauseTopLevels) {
    const std::string key(name);
    if (!j.contains(key)) throw Error(Errc::TaxonomyInvalid, "missing top-level cause '" + key + "'");
    const auto& list = j.at(key);
    if (!list.is_array() || list.empty()) {
      throw Error(Errc::TaxonomyInvalid, "'" + key + "' needs a non-empty list of subcategories");
    }
    CauseCategory cat{key, {}};
    std::set<std::string> seen;
    for (const auto& s : list) {
      if (!s.is_string() || text::trim(s.get<std::string>()).empty()) {
        throw Error(Errc::TaxonomyInvalid, "'" + key + "' has a blank or non-string subcategory");
      }
      const auto sub = text::trim(s.get<std::string>());
      if (!seen.insert(text::casefold(sub)).second) {
        throw Error(Errc::TaxonomyInvalid, "'" + key + "' lists subcategory '" + sub + "' twice");
      }
      cat.subcategories.push_back(sub);
    }
    if (!seen.count("other")) throw Error(Errc::TaxonomyInvalid, "'" + key + "' has no \"Other\" subcategory");
    tax.top_levels.push_back(std::move(cat));
  }
  return tax;
}

nlohmann::json taxonomy_to_json(const CauseTaxonomy& t) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& cat : t.top_levels) j[cat.name] = cat.subcategories;
  return j;
}

CauseTaxonomy load_taxonomy(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(Errc::IoError, "taxonomy file not found: " + path.string());
  return taxonomy_from_json(read_json_file(path));
}

std::filesystem::path default_taxonomy_path() {
  if (const char* dir = std::getenv("MEDSIM_DATA_DIR"); dir && *dir) {
    return std::filesystem::path(dir) / "taxonomy_default.json";
  }
  return std::filesystem::path(MEDSIM_DEFAULT_DATA_DIR) / "taxonomy_default.json";
}

void to_json(nlohmann::json& j, const CauseInjectionRecord& r) {
  j = nlohmann::json{{"case_id", r.case_id},
                     {"top_level", r.top_level},
                     {"subcategory", r.subcategory},
                     {"original_brief", r.original_brief},
                     {"modified_brief", r.modified_brief}};
}

void from_json(const nlohmann::json& j, CauseInjectionRecord& r) {
  r.case_id = j.at("case_id").get<std::string>();
  r.top_level = j.at("top_level").get<std::string>();
  r.subcategory = j.at("subcategory").get<std::string>();
  r.original_brief = j.at("original_brief").get<std::string>();
  r.modified_brief = j.at("modified_brief").get<std::string>();
}

namespace {

std::string field_or_text(std::string_view content, std::string_view key) {
  if (const auto obj = find_object_with_key(content, key)) {
    const auto* v = find_key(*obj, key);
    return v->is_string() ? text::trim(v->get<std::string>()) : std::string{};
  }
  std::string t = strip_code_fence(content);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = t.substr(1, t.size() - 2);
  return text::trim(t);
}

}  // namespace

std::pair<DisputeCase, CauseInjectionRecord> inject_cause(const DisputeCase& c, std::string_view top_level,
                                                          const CauseTaxonomy& taxonomy, ChatBackend& chat,
                                                          const CallOptions& opts) {
  const auto* category = taxonomy.find(top_level);
  if (!category) {
    throw Error(Errc::PreconditionViolation, "'" + std::string(top_level) + "' is not a top-level dispute cause");
  }
  const auto& lib = opts.library();

  std::string listing;
  for (const auto& s : category->subcategories) listing += "- " + s + "\n";
  auto pick_req = detail::make_request(
      {}, lib.render("cause_pick", {{"brief", c.brief}, {"top_level", category->name}, {"subcategories", listing}}),
      "cause_pick", opts);
  const std::string subcategory = detail::elicit(
      chat, std::move(pick_req), lib, Errc::SubcausePickError,
      [&](const std::string& content, std::string& problem) -> std::optional<std::string> {
        const auto picked = field_or_text(content, "Subcategory");
        for (const auto& s : category->subcategories) {
          if (text::label_key(s) == text::label_key(picked)) return s;
        }
        problem = "\"" + excerpt(picked, 60) + "\" is not a subcategory of " + category->name;
        return std::nullopt;
      });

  auto rewrite_req = detail::make_request({},
                                          lib.render("cause_rewrite", {{"brief", c.brief},
                                                                       {"subcategory", subcategory},
                                                                       {"top_level", category->name},
                                                                       {"parties", text::join(c.parties, ", ")}}),
                                          "cause_rewrite", opts);
  const auto rewritten = field_or_text(chat_complete(rewrite_req, chat).content, "Brief");
  if (rewritten.empty()) throw Error(Errc::RewriteError, "rewrite of case '" + c.id + "' returned an empty brief");
  if (rewritten == c.brief) throw Error(Errc::RewriteError, "rewrite of case '" + c.id + "' left the brief unchanged");
  for (const auto& p : c.parties) {
    if (text::contains_folded(c.brief, p) && !text::contains_folded(rewritten, p)) {
      throw Error(Errc::RewriteError, "rewrite of case '" + c.id + "' dropped party '" + p + "' from the brief");
    }
  }

  DisputeCase modified = c;
  modified.brief = rewritten;
  try {
    validate_dispute_case(modified);
  } catch (const Error& e) {
    throw Error(Errc::RewriteError, e.what());
  }
  CauseInjectionRecord record{c.id, category->name, subcategory, c.brief, rewritten};
  return {std::move(modified), std::move(record)};
}

std::string_view to_string(ReplaceCount n) noexcept { return n == ReplaceCount::One ? "one" : "all"; }

std::optional<ReplaceCount> parse_replace_count(std::string_view s) {
  const auto k = text::label_key(s);
  if (k == "one" || k == "1") return ReplaceCount::One;
  if (k == "all") return ReplaceCount::All;
  return std::nullopt;
}

std::vector<PartyProfile> assign_strategies(std::vector<PartyProfile> parties, TKIMode mode, ReplaceCount num,
                                            Rng& rng) {
  if (parties.size() < 2) throw Error(Errc::PreconditionViolation, "strategy assignment needs at least two parties");
  if (num == ReplaceCount::All) {
    for (auto& p : parties) p.strategy = mode;
  } else {
    parties[uniform_below(rng, parties.size())].strategy = mode;
  }
  return parties;
}

std::vector<PartyProfile> default_profiles(const DisputeCase& c) {
  std::vector<PartyProfile> out;
  out.reserve(c.parties.size());
  for (const auto& p : c.parties) out.push_back(PartyProfile{p, {}, std::nullopt, false});
  return out;
}

}  // namespace medsim
