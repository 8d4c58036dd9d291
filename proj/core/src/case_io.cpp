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

#include "medsim/case_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "medsim/error.hpp"

namespace medsim {

using nlohmann::json;

namespace {

template <typename T>
T required(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(Errc::InvalidCase, std::string(what) + " is missing key '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidCase, std::string(what) + " key '" + key + "' has the wrong type: " + e.what());
  }
}

}  // namespace

void to_json(json& j, const LegalBasis& b) {
  j = json{{"law", b.law}, {"article", nullptr}, {"raw", b.raw.empty() ? b.display() : b.raw}};
  if (b.article) j["article"] = *b.article;
}

void from_json(const json& j, LegalBasis& b) {
  if (j.is_string()) {
    b = normalize_legal_basis(j.get<std::string>());
    return;
  }
  b.law = required<std::string>(j, "law", "legal basis");
  if (b.law.empty()) throw Error(Errc::EmptyBasis, "legal basis has an empty law name");
  b.article.reset();
  if (j.contains("article") && !j.at("article").is_null()) {
    const auto& a = j.at("article");
    if (!a.is_number_unsigned() || a.get<std::uint64_t>() == 0 || a.get<std::uint64_t>() > 0xFFFFFFFFull) {
      throw Error(Errc::InvalidCase, "legal basis article must be a positive integer or null");
    }
    b.article = a.get<std::uint32_t>();
  }
  b.raw = j.value("raw", b.display());
}

void to_json(json& j, const RawCase& c) {
  j = json{{"title", c.title}, {"keywords", c.keywords}, {"brief", c.brief},
           {"method", c.method}, {"bases", c.bases}};
  if (!c.id.empty()) j["id"] = c.id;
}

void from_json(const json& j, RawCase& c) {
  c.id = j.value("id", std::string{});
  c.title = required<std::string>(j, "title", "raw case");
  c.keywords = required<std::vector<std::string>>(j, "keywords", "raw case");
  c.brief = required<std::string>(j, "brief", "raw case");
  c.method = j.value("method", std::string{});
  c.bases = j.value("bases", std::vector<std::string>{});
}

void to_json(json& j, const DisputeCase& c) {
  j = json{{"id", c.id},
           {"dispute_type", c.dispute_type},
           {"brief", c.brief},
           {"facts", c.facts},
           {"parties", c.parties},
           {"points_of_contention", c.points_of_contention},
           {"legal_bases", c.legal_bases}};
}

void from_json(const json& j, DisputeCase& c) {
  c.id = required<std::string>(j, "id", "case");
  c.dispute_type = required<std::string>(j, "dispute_type", "case");
  c.brief = required<std::string>(j, "brief", "case");
  c.facts = required<std::vector<std::string>>(j, "facts", "case");
  c.parties = required<std::vector<std::string>>(j, "parties", "case");
  c.points_of_contention = required<std::string>(j, "points_of_contention", "case");
  if (!j.contains("legal_bases") || !j.at("legal_bases").is_array()) {
    throw Error(Errc::InvalidCase, "case is missing array 'legal_bases'");
  }
  c.legal_bases.clear();
  for (const auto& b : j.at("legal_bases")) c.legal_bases.push_back(b.get<LegalBasis>());
}

void to_json(json& j, const Utterance& u) {
  j = json{{"stage", to_string(u.stage)},
           {"turn_index", u.turn_index},
           {"speaker", u.speaker},
           {"role", to_string(u.role)},
           {"content", u.content}};
}

void from_json(const json& j, Utterance& u) {
  const auto stage = parse_stage(required<std::string>(j, "stage", "utterance"));
  const auto role = parse_role(required<std::string>(j, "role", "utterance"));
  if (!stage || !role) throw Error(Errc::InvalidCase, "utterance has an unknown stage or role");
  u.stage = *stage;
  u.role = *role;
  u.turn_index = required<std::uint32_t>(j, "turn_index", "utterance");
  u.speaker = required<std::string>(j, "speaker", "utterance");
  u.content = required<std::string>(j, "content", "utterance");
}

void to_json(json& j, const MediationProposal& p) {
  j = json{{"points_of_contention", p.points_of_contention},
           {"legal_bases", p.legal_bases},
           {"solution", p.solution}};
}

void from_json(const json& j, MediationProposal& p) {
  p.points_of_contention = j.value("points_of_contention", std::string{});
  p.legal_bases.clear();
  if (j.contains("legal_bases")) {
    for (const auto& b : j.at("legal_bases")) p.legal_bases.push_back(b.get<LegalBasis>());
  }
  p.solution = required<std::string>(j, "solution", "proposal");
}

void to_json(json& j, const SessionOutcome& o) {
  json decisions = json::object();
  for (const auto& [party, d] : o.decisions) {
    decisions[party] = json{{"decision", to_string(d.decision)}, {"reason", d.reason}};
  }
  json satisfaction = json::object();
  for (const auto& [party, r] : o.satisfaction) {
    satisfaction[party] = json{{"level", label(r.level)}, {"score", score(r.level)}, {"reason", r.reason}};
  }
  j = json{{"proposal", o.proposal},
           {"decisions", decisions},
           {"satisfaction", satisfaction},
           {"termination", to_string(o.termination)},
           {"bargaining_rounds", o.bargaining_rounds},
           {"warnings", o.warnings}};
}

void from_json(const json& j, SessionOutcome& o) {
  o.proposal = required<json>(j, "proposal", "outcome").get<MediationProposal>();
  o.decisions.clear();
  const auto decisions = required<json>(j, "decisions", "outcome");
  for (const auto& [party, d] : decisions.items()) {
    const auto dec = parse_decision(d.at("decision").get<std::string>());
    if (!dec) throw Error(Errc::InvalidCase, "outcome has an unknown decision for '" + party + "'");
    o.decisions[party] = PartyDecision{*dec, d.value("reason", std::string{})};
  }
  o.satisfaction.clear();
  const auto satisfaction = required<json>(j, "satisfaction", "outcome");
  for (const auto& [party, r] : satisfaction.items()) {
    o.satisfaction[party] = PartyRating{likert_from_label(r.at("level").get<std::string>()),
                                        r.value("reason", std::string{})};
  }
  const auto term = parse_termination(required<std::string>(j, "termination", "outcome"));
  if (!term) throw Error(Errc::InvalidCase, "outcome has an unknown termination");
  o.termination = *term;
  o.bargaining_rounds = j.value("bargaining_rounds", 0u);
  o.warnings = j.value("warnings", std::vector<std::string>{});
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::filesystem::path& path) {
  const auto body = read_file(path);
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw Error(Errc::IoError, path.string() + ": " + e.what());
  }
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::vector<json> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw Error(Errc::IoError, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error(Errc::IoError, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows) {
  std::string body;
  for (const auto& r : rows) {
    body += r.dump();
    body.push_back('\n');
  }
  write_file_atomic(path, body);
}

std::vector<DisputeCase> load_corpus(const std::filesystem::path& path) {
  std::vector<DisputeCase> cases;
  std::set<std::string> ids;
  std::size_t index = 0;
  for (const auto& row : read_jsonl(path)) {
    ++index;
    DisputeCase c;
    try {
      c = row.get<DisputeCase>();
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + " case #" + std::to_string(index) + ": " + e.what());
    }
    validate_dispute_case(c);
    if (!ids.insert(c.id).second) {
      throw Error(Errc::InvalidCase, path.string() + ": duplicate case id '" + c.id + "'");
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

void save_corpus(const std::filesystem::path& path, const std::vector<DisputeCase>& cases) {
  std::vector<json> rows;
  rows.reserve(cases.size());
  for (const auto& c : cases) rows.emplace_back(c);
  write_jsonl(path, rows);
}

std::vector<RawCase> load_raw_corpus(const std::filesystem::path& path) {
  std::vector<RawCase> out;
  for (const auto& row : read_jsonl(path)) {
    auto raw = row.get<RawCase>();
    validate_raw_case(raw);
    out.push_back(std::move(raw));
  }
  return out;
}

}  // namespace medsim
