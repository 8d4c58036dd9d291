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

#include <gtest/gtest.h>

#include "medsim/case_io.hpp"
#include "medsim/error.hpp"
#include "medsim/model.hpp"
#include "medsim/text.hpp"
#include "support.hpp"

using namespace medsim;

namespace {

template <typename F>
Errc error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no medsim::Error thrown";
  return Errc::IoError;
}

}  // namespace

TEST(Text, TokenizeSplitsOnWhitespaceAndPunctuation) {
  EXPECT_EQ(text::tokenize("The refund, per  square-meter!"),
            (std::vector<std::string>{"the", "refund", "per", "square", "meter"}));
  EXPECT_TRUE(text::tokenize("  ,.;  ").empty());
}

TEST(Text, TokenizeCjkPerCodePoint) {
  EXPECT_EQ(text::tokenize("退款金额，合理"), (std::vector<std::string>{"退", "款", "金", "额", "合", "理"}));
  EXPECT_EQ(text::tokenize("Article 第533条"), (std::vector<std::string>{"article", "第", "533", "条"}));
}

TEST(Text, TrimAndCollapse) {
  EXPECT_EQ(text::trim("\t  hello \n"), "hello");
  EXPECT_EQ(text::collapse_whitespace("  a \t b\n\nc "), "a b c");
  EXPECT_EQ(text::label_key("  Very HIGH "), "very high");
  EXPECT_TRUE(text::contains_folded("Sun and GONG met", "gong"));
}

TEST(Text, Utf8RoundTrip) {
  const std::string s = "Sun 与 Gong ✓";
  EXPECT_EQ(text::encode_utf8(text::decode_utf8(s)), s);
}

TEST(LegalBasisTest, ParsesEnglishArticle) {
  const auto b = normalize_legal_basis("Civil Code of the People’s Republic of China, Article 533");
  EXPECT_EQ(b.law, "Civil Code of the People’s Republic of China");
  ASSERT_TRUE(b.article.has_value());
  EXPECT_EQ(*b.article, 533u);
}

TEST(LegalBasisTest, VariantsShareOneKey) {
  const auto a = normalize_legal_basis("Civil Code of the People’s Republic of China, Article 533");
  const auto b = normalize_legal_basis("  civil code of the people's republic of china   article   533 ");
  const auto c = normalize_legal_basis("CIVIL CODE OF THE PEOPLE'S REPUBLIC OF CHINA, Art. 533");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_NE(a, normalize_legal_basis("Civil Code of the People's Republic of China, Article 563"));
}

TEST(LegalBasisTest, ChineseArticleMarker) {
  const auto b = normalize_legal_basis("中华人民共和国民法典第533条");
  EXPECT_EQ(b.law, "中华人民共和国民法典");
  EXPECT_EQ(b.article.value_or(0), 533u);
}

TEST(LegalBasisTest, DocumentWithoutArticle) {
  const auto b = normalize_legal_basis("Opinion on Deepening Price Dispute Mediation (Fa Fa [2019] No. 32)");
  EXPECT_FALSE(b.article.has_value());
  EXPECT_EQ(b.display(), "Opinion on Deepening Price Dispute Mediation (Fa Fa [2019] No. 32)");
}

TEST(LegalBasisTest, BlankIsRejected) {
  EXPECT_EQ(error_code_of([] { normalize_legal_basis("   "); }), Errc::EmptyBasis);
}

TEST(DisputeCaseTest, HousingFixtureIsValid) {
  const auto c = support::housing_case();
  EXPECT_EQ(c.parties, (std::vector<std::string>{"Sun", "Gong"}));
  EXPECT_EQ(c.legal_bases.size(), 4u);
  EXPECT_TRUE(validate_dispute_case(c).warnings.empty());
}

TEST(DisputeCaseTest, ValidationErrors) {
  auto c = support::housing_case();
  c.parties = {"Sun"};
  EXPECT_EQ(error_code_of([&] { validate_dispute_case(c); }), Errc::TooFewParties);
  c.parties = {"Sun", " sun "};
  EXPECT_EQ(error_code_of([&] { validate_dispute_case(c); }), Errc::DuplicatePartyName);
  c = support::housing_case();
  c.brief = " \n";
  EXPECT_EQ(error_code_of([&] { validate_dispute_case(c); }), Errc::EmptyBrief);
}

TEST(DisputeCaseTest, ManyPartiesWarn) {
  auto c = support::housing_case();
  c.parties = {"A", "B", "C", "D", "E", "F", "G"};
  EXPECT_EQ(validate_dispute_case(c).warnings.size(), 1u);
}

TEST(DisputeCaseTest, JsonRoundTrip) {
  const auto c = support::housing_case();
  const nlohmann::json j = c;
  EXPECT_EQ(j.get<DisputeCase>(), c);
}

TEST(Tki, Dimensions) {
  EXPECT_EQ(assertiveness(TKIMode::Competing), Level::High);
  EXPECT_EQ(cooperativeness(TKIMode::Competing), Level::Low);
  EXPECT_EQ(assertiveness(TKIMode::Collaborating), Level::High);
  EXPECT_EQ(cooperativeness(TKIMode::Collaborating), Level::High);
  EXPECT_EQ(assertiveness(TKIMode::Compromising), Level::Moderate);
  EXPECT_EQ(cooperativeness(TKIMode::Compromising), Level::Moderate);
  EXPECT_EQ(assertiveness(TKIMode::Avoiding), Level::Low);
  EXPECT_EQ(cooperativeness(TKIMode::Avoiding), Level::Low);
  EXPECT_EQ(assertiveness(TKIMode::Accommodating), Level::Low);
  EXPECT_EQ(cooperativeness(TKIMode::Accommodating), Level::High);
  for (auto m : kAllModes) EXPECT_EQ(parse_mode(to_string(m)), m);
  EXPECT_FALSE(parse_mode("Bargaining").has_value());
}

TEST(Likert, LabelsAndScores) {
  EXPECT_EQ(likert_from_label("Very High"), LikertLevel::VeryHigh);
  EXPECT_EQ(score(likert_from_label(" very low ")), 0);
  for (auto l : kAllLikertLevels) {
    EXPECT_EQ(likert_from_label(label(l)), l);
    EXPECT_EQ(likert_from_score(score(l)), l);
  }
  EXPECT_EQ(error_code_of([] { likert_from_label("Extremely High"); }), Errc::UnknownLabel);
  EXPECT_EQ(error_code_of([] { likert_from_label("High risk"); }), Errc::UnknownLabel);
}

TEST(Decisions, ClosedSet) {
  EXPECT_EQ(parse_decision("accept"), Decision::Accept);
  EXPECT_EQ(parse_decision(" Reject "), Decision::Reject);
  EXPECT_EQ(parse_decision("Undecided"), Decision::Undecided);
  EXPECT_FALSE(parse_decision("Uncertain").has_value());
  EXPECT_FALSE(parse_decision("Accepted").has_value());
}

TEST(TranscriptTest, TurnIndicesAndStageOrder) {
  Transcript t;
  t.append(Stage::Preliminary, "System", Role::System, "brief");
  t.append(Stage::Statement, "Sun", Role::Party, "hi");
  t.append(Stage::Statement, "Gong", Role::Party, "hello");
  EXPECT_EQ(t.utterances.back().turn_index, 2u);
  EXPECT_EQ(t.stage_sequence(), (std::vector<Stage>{Stage::Preliminary, Stage::Statement}));
  EXPECT_EQ(error_code_of([&] { t.append(Stage::Preliminary, "System", Role::System, "again"); }),
            Errc::PreconditionViolation);
  EXPECT_NO_THROW(validate_transcript(t));
}

TEST(OutcomeTest, SuccessNeedsEveryParty) {
  SessionOutcome o;
  o.decisions["Sun"] = {Decision::Accept, ""};
  o.decisions["Gong"] = {Decision::Accept, ""};
  EXPECT_TRUE(o.successful());
  o.decisions["Gong"] = {Decision::Undecided, ""};
  EXPECT_FALSE(o.successful());
}
