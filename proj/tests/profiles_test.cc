// Copyright 2026 The Duet Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "duet/profiles.h"

#include <gtest/gtest.h>

#include "duet/error.h"
#include "duet/records.h"
#include "test_util.h"

namespace duet {
namespace {

TEST(ProfilesTest, FixtureProfilesAreValid) {
  EXPECT_TRUE(ValidateProfile(testing::FixtureGiverProfile()).empty());
  EXPECT_TRUE(ValidateProfile(testing::FixtureGuesserProfile()).empty());
  EXPECT_TRUE(testing::FixtureGiverProfile().IsComplete());
  EXPECT_FALSE(testing::FixtureGuesserProfile().IsComplete());
}

TEST(ProfilesTest, LikertOutOfRangeNamesTheField) {
  SocioProfile p;
  p.big5 = std::array<int, kBig5Items>{0, 0, 7, 0, 0, 0, 0, 0, 0, -3};
  p.mfq = std::array<int, kMfqItems>{0, 6, 0, 0, 0, 0, 0, 0, 0, 0};
  auto errors = ValidateProfile(p);
  ASSERT_EQ(errors.size(), 3u);
  EXPECT_EQ(errors[0], "big5[3]: 7 outside [-2, 2]");
  EXPECT_EQ(errors[1], "big5[10]: -3 outside [-2, 2]");
  EXPECT_EQ(errors[2], "mfq[b]: 6 outside [0, 5]");
}

TEST(ProfilesTest, DemoAllOptionsAreCheckedCaseInsensitively) {
  SocioProfile p;
  DemoAll a;
  a.gender = "woman";
  a.continent = "Other";
  p.demo_all = a;
  EXPECT_TRUE(ValidateProfile(p).empty());
  p.demo_all->continent = "Atlantis";
  ASSERT_EQ(ValidateProfile(p).size(), 1u);
}

TEST(ProfilesTest, ImplausibleAgeIsRejected) {
  SocioProfile p;
  p.demo_req = DemoReq{200, "Peru", true};
  EXPECT_EQ(ValidateProfile(p).size(), 1u);
}

TEST(ProfilesTest, Big5ReverseKeying) {
  // Item 2 reversed, item 3 forward for extraversion, and so on.
  std::array<int, kBig5Items> a{2, -2, 1, 1, -1, 0, 2, -2, 1, 2};
  Big5Scores s = ScoreBig5(a);
  EXPECT_DOUBLE_EQ(s.extraversion, (2 + 1) / 2.0);
  EXPECT_DOUBLE_EQ(s.agreeableness, (-2 + -2) / 2.0);
  EXPECT_DOUBLE_EQ(s.conscientiousness, (2 - 1) / 2.0);
  EXPECT_DOUBLE_EQ(s.neuroticism, (1 - 0) / 2.0);
  EXPECT_DOUBLE_EQ(s.openness, (1 + 2) / 2.0);
  std::array<int, kBig5Items> bad{0, 0, 0, 0, 0, 0, 0, 0, 0, 3};
  EXPECT_THROW(ScoreBig5(bad), ValidationError);
}

TEST(ProfilesTest, MfqSkipsTheAttentionItem) {
  std::array<int, kMfqItems> a{4, 2, 1, 0, 5, 3, 2, 4, 3, 2};
  MfqScores s = ScoreMfq(a);
  EXPECT_DOUBLE_EQ(s.care, 3.0);
  EXPECT_DOUBLE_EQ(s.fairness, 3.0);
  EXPECT_DOUBLE_EQ(s.loyalty, 2.0);
  EXPECT_DOUBLE_EQ(s.authority, 1.0);
  EXPECT_DOUBLE_EQ(s.sanctity, 5.0);
  EXPECT_TRUE(s.attention_flag);
  a[kMfqAttentionItem] = 2;
  EXPECT_FALSE(ScoreMfq(a).attention_flag);
}

TEST(ProfilesTest, CompletenessLevels) {
  SocioProfile full = testing::FixtureGiverProfile();
  SocioProfile partial = testing::FixtureGuesserProfile();
  EXPECT_EQ(CompletenessOf(full, full), SurveyCompleteness::kBoth);
  EXPECT_EQ(CompletenessOf(full, partial), SurveyCompleteness::kOne);
  EXPECT_EQ(CompletenessOf(partial, partial), SurveyCompleteness::kRequiredOnly);
}

TEST(ProfilesTest, JsonRoundTrip) {
  for (const SocioProfile& p : {testing::FixtureGiverProfile(), testing::FixtureGuesserProfile(),
                                SocioProfile{}}) {
    EXPECT_EQ(ProfileFromJson(ToJson(p)), p);
  }
  EXPECT_THROW(ProfileFromJson(Json::parse(R"({"demo_req": {"age": "old"}})")), ParseError);
  EXPECT_THROW(ProfileFromJson(Json::parse(R"({"big5": [1, 2]})")), ValidationError);
  EXPECT_THROW(ProfileFromJson(Json::parse(R"({"political": "royalist"})")), ValidationError);
}

}  // namespace
}  // namespace duet
