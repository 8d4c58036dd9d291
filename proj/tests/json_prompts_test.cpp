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

#include <fstream>

#include <gtest/gtest.h>

#include "medsim/agents.hpp"
#include "medsim/error.hpp"
#include "medsim/json_extract.hpp"
#include "medsim/prompts.hpp"
#include "support.hpp"

using namespace medsim;

TEST(JsonExtract, FindsObjectAfterProse) {
  const auto obj = first_json_object("Let me think {not json} about it.\n{\"a\": 1, \"b\": \"}\"}\ntrailing");
  ASSERT_TRUE(obj.has_value());
  EXPECT_EQ(obj->at("a"), 1);
  EXPECT_EQ(obj->at("b"), "}");
}

TEST(JsonExtract, SpansRespectStringsAndEscapes) {
  const std::string s = R"(x {"q": "a \" { b"} y {"n": {"m": 2}})";
  const auto spans = balanced_object_spans(s);
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(s.substr(spans[0].begin, spans[0].end - spans[0].begin), R"({"q": "a \" { b"})");
  EXPECT_EQ(s.substr(spans[1].begin, spans[1].end - spans[1].begin), R"({"n": {"m": 2}})");
}

TEST(JsonExtract, KeyLookupIsCaseAndSpaceInsensitive) {
  const auto obj = find_object_with_key(R"(Example {"Other": 1}. Final: {" consensus level ": "High"})",
                                        "Consensus Level");
  ASSERT_TRUE(obj.has_value());
  ASSERT_NE(find_key(*obj, "Consensus Level"), nullptr);
  EXPECT_EQ(*find_key(*obj, "consensus LEVEL"), "High");
}

TEST(JsonExtract, CodeFence) {
  EXPECT_EQ(strip_code_fence("```json\n{\"a\":1}\n```"), "{\"a\":1}");
  EXPECT_EQ(strip_code_fence("  plain  "), "plain");
}

TEST(Templates, RendersIdentifiersAndLeavesJsonAlone) {
  const std::string out = render_template("Hi {name}. Reply {\"Status\": \"x\"} {name}", {{"name", "Sun"}});
  EXPECT_EQ(out, "Hi Sun. Reply {\"Status\": \"x\"} Sun");
  EXPECT_EQ(template_placeholders("{a} {b} {a} {\"c\"}"), (std::vector<std::string>{"a", "b"}));
}

TEST(Templates, MissingValueIsAnError) {
  try {
    render_template("{missing}", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TemplateError);
  }
}

TEST(Templates, OverridesFromDirectory) {
  const auto dir = support::scratch_dir("prompts");
  {
    std::ofstream(dir / "instruction_closure.txt") << "Say goodbye, {name}.";
  }
  PromptLibrary lib;
  lib.load_overrides(dir);
  EXPECT_EQ(lib.get("instruction_closure"), "Say goodbye, {name}.");
  {
    std::ofstream(dir / "no_such_prompt.txt") << "x";
  }
  PromptLibrary other;
  EXPECT_THROW(other.load_overrides(dir), Error);
}

TEST(Templates, EveryBuiltinRendersWithItsPlaceholders) {
  const auto& lib = PromptLibrary::builtin();
  for (const auto& name : lib.names()) {
    PromptVars vars;
    for (const auto& p : template_placeholders(lib.get(name))) vars[p] = "<" + p + ">";
    EXPECT_NO_THROW((void)lib.render(name, vars)) << name;
  }
}

namespace {

std::string render_judge(const std::string& name) {
  const auto& lib = PromptLibrary::builtin();
  return lib.render(name, {{"case_background", "BACKGROUND-TEXT"},
                           {"history", "HISTORY-TEXT"},
                           {"proposal", "PROPOSAL-TEXT"},
                           {"name", "Sun"}});
}

void expect_sections(const std::string& p) {
  for (const char* marker : {"CASE BACKGROUND START", "BACKGROUND-TEXT", "CASE BACKGROUND END", "DIALOGUE HISTORY START",
                             "HISTORY-TEXT", "DIALOGUE HISTORY END", "FINAL MEDIATION PROPOSAL START", "PROPOSAL-TEXT",
                             "FINAL MEDIATION PROPOSAL END", "JSON format"}) {
    EXPECT_NE(p.find(marker), std::string::npos) << marker;
  }
  EXPECT_LT(p.find("CASE BACKGROUND START"), p.find("DIALOGUE HISTORY START"));
  EXPECT_LT(p.find("DIALOGUE HISTORY START"), p.find("FINAL MEDIATION PROPOSAL START"));
}

}  // namespace

TEST(JudgePrompts, AcceptanceSectionsAndLabels) {
  const auto p = render_judge("accept");
  expect_sections(p);
  EXPECT_NE(p.find("\"Accept or Not\": \"Accept / Reject / Undecided\""), std::string::npos);
}

TEST(JudgePrompts, LikertRubrics) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"satisfaction", "Satisfaction Level"}, {"consensus", "Consensus Level"}, {"litigation_risk", "Conflict Risk Level"}};
  for (const auto& [name, key] : cases) {
    const auto p = render_judge(name);
    expect_sections(p);
    EXPECT_NE(p.find("\"" + key + "\": \"Very Low / Low / Medium / High / Very High\""), std::string::npos) << name;
    for (const char* level : {"- Very Low:", "- Low:", "- Medium:", "- High:", "- Very High:"}) {
      EXPECT_NE(p.find(level), std::string::npos) << name << " " << level;
    }
    EXPECT_NE(p.find("step by step"), std::string::npos) << name;
  }
}

TEST(JudgeParsers, AcceptanceClosedSet) {
  for (const char* ok : {"Accept", "Reject", "Undecided", " accept "}) {
    const std::string reply = std::string("{\"Accept or Not\": \"") + ok + "\", \"Reason\": \"r\"}";
    EXPECT_TRUE(parse_acceptance(reply).has_value()) << ok;
  }
  for (const char* bad : {"Accepted", "Uncertain", "Accept / Reject", "Yes", ""}) {
    const std::string reply = std::string("{\"Accept or Not\": \"") + bad + "\", \"Reason\": \"r\"}";
    EXPECT_FALSE(parse_acceptance(reply).has_value()) << bad;
  }
  EXPECT_FALSE(parse_acceptance("I accept.").has_value());
}

TEST(JudgeParsers, LikertClosedSet) {
  for (const char* key : {"Satisfaction Level", "Consensus Level", "Conflict Risk Level"}) {
    for (auto l : kAllLikertLevels) {
      const std::string reply =
          "Reasoning first.\n{\"" + std::string(key) + "\": \"" + std::string(label(l)) + "\", \"Reason\": \"r\"}";
      const auto r = parse_rating(reply, key);
      ASSERT_TRUE(r.has_value()) << key;
      EXPECT_EQ(r->level, l);
    }
    for (const char* bad : {"High risk", "Very", "Medium-High", "VeryHigh", "5"}) {
      const std::string reply = "{\"" + std::string(key) + "\": \"" + bad + "\"}";
      EXPECT_FALSE(parse_rating(reply, key).has_value()) << key << " " << bad;
    }
    EXPECT_FALSE(parse_rating("{\"Level\": \"High\"}", key).has_value());
  }
}
