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

#include "medsim/preprocess.hpp"

#include <spdlog/spdlog.h>

#include "elicit.hpp"
#include "medsim/error.hpp"
#include "medsim/json_extract.hpp"
#include "medsim/text.hpp"

namespace medsim {

namespace {

std::string span_note(std::string_view content, const ObjectSpan& span) {
  return " in span [" + std::to_string(span.begin) + ", " + std::to_string(span.end) + "): " +
         excerpt(content.substr(span.begin, span.end - span.begin));
}

std::vector<std::string> string_list(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto* v = find_key(obj, key);
  if (!v) throw Error(Errc::ExtractionParseError, std::string("missing \"") + key + "\"" + where);
  if (!v->is_array()) throw Error(Errc::ExtractionParseError, std::string("\"") + key + "\" must be a list" + where);
  std::vector<std::string> out;
  for (const auto& x : *v) {
    if (!x.is_string()) {
      throw Error(Errc::ExtractionParseError, std::string("\"") + key + "\" entries must be strings" + where);
    }
    auto t = text::trim(x.get<std::string>());
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

std::string string_value(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto* v = find_key(obj, key);
  if (!v) throw Error(Errc::ExtractionParseError, std::string("missing \"") + key + "\"" + where);
  if (!v->is_string()) throw Error(Errc::ExtractionParseError, std::string("\"") + key + "\" must be a string" + where);
  return text::trim(v->get<std::string>());
}

}  // namespace

ExtractionResult parse_extraction(std::string_view content) {
  const std::string body = strip_code_fence(content);
  const auto spans = balanced_object_spans(body);
  std::optional<nlohmann::json> obj;
  ObjectSpan where_span{};
  for (const auto& s : spans) {
    auto j = nlohmann::json::parse(body.substr(s.begin, s.end - s.begin), nullptr, false);
    if (!j.is_discarded() && j.is_object()) {
      obj = std::move(j);
      where_span = s;
      break;
    }
  }
  if (!obj) {
    throw Error(Errc::ExtractionParseError, "no complete JSON object in reply: " + excerpt(body));
  }
  const auto where = span_note(body, where_span);
  ExtractionResult r;
  r.dispute_type = string_value(*obj, "dispute_type", where);
  r.facts = string_list(*obj, "facts", where);
  r.parties = string_list(*obj, "parties", where);
  r.points_of_contention = string_value(*obj, "points_of_contention", where);
  r.legal_bases = string_list(*obj, "legal_bases", where);
  if (r.parties.size() < 2) {
    throw Error(Errc::ExtractionParseError, "\"parties\" must name at least two parties" + where);
  }
  return r;
}

DisputeCase extract_structured(const RawCase& raw, ChatBackend& chat, const CallOptions& opts, std::string id) {
  validate_raw_case(raw);
  const auto& lib = opts.library();
  const PromptVars vars{{"title", raw.title},
                        {"keywords", text::join(raw.keywords, ", ")},
                        {"brief", raw.brief},
                        {"method", raw.method},
                        {"bases", text::join(raw.bases, "\n")}};
  auto req = detail::make_request({}, lib.render("extract", vars), "extract", opts);
  const auto extraction = detail::elicit(chat, std::move(req), lib, Errc::ExtractionParseError,
                                         [](const std::string& content, std::string& problem) {
                                           try {
                                             return std::optional<ExtractionResult>(parse_extraction(content));
                                           } catch (const Error& e) {
                                             problem = e.what();
                                             return std::optional<ExtractionResult>{};
                                           }
                                         });

  DisputeCase c;
  c.id = id.empty() ? raw.id : std::move(id);
  c.dispute_type = extraction.dispute_type;
  c.brief = raw.brief;
  c.facts = extraction.facts;
  c.parties = extraction.parties;
  c.points_of_contention = extraction.points_of_contention;
  for (const auto& b : extraction.legal_bases) c.legal_bases.push_back(normalize_legal_basis(b));
  try {
    const auto report = validate_dispute_case(c);
    for (const auto& w : report.warnings) spdlog::warn("{}", w);
  } catch (const Error& e) {
    throw Error(Errc::ValidationError, e.what());
  }
  return c;
}

}  // namespace medsim
