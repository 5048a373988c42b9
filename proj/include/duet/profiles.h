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

#ifndef DUET_PROFILES_H_
#define DUET_PROFILES_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace duet {

inline constexpr int kBig5Items = 10;
inline constexpr int kMfqItems = 10;
inline constexpr int kLikertMin = -2;
inline constexpr int kLikertMax = 2;
inline constexpr int kMfqMin = 0;
inline constexpr int kMfqMax = 5;
// MFQ item (f), "good at math", is a catch item and never scored.
inline constexpr int kMfqAttentionItem = 5;
inline constexpr int kMfqAttentionThreshold = 2;

// Required block collected in the game UI.
struct DemoReq {
  std::optional<int> age;
  std::optional<std::string> country;
  std::optional<bool> native_english;

  bool operator==(const DemoReq&) const = default;
};

// Extended demographics from the qualifier survey; every answer optional.
struct DemoAll {
  std::optional<std::string> gender;
  std::optional<std::string> age_range;
  std::optional<std::string> race;
  std::optional<std::string> continent;
  std::optional<std::string> education;
  std::optional<std::string> marital_status;
  std::optional<std::string> native_language;
  std::optional<std::string> religion;

  bool operator==(const DemoAll&) const = default;
};

enum class Political { kLiberal, kModerateLiberal, kModerateConservative, kConservative, kLibertarian };

std::string_view ToString(Political p);  // "liberal", "moderate liberal", ...
Political ParsePolitical(std::string_view s);

struct SocioProfile {
  std::optional<DemoReq> demo_req;
  std::optional<DemoAll> demo_all;
  std::optional<std::array<int, kBig5Items>> big5;  // items 1..10, each in [-2, 2]
  std::optional<std::array<int, kMfqItems>> mfq;    // items a..j, each in [0, 5]
  std::optional<Political> political;

  bool HasDemoReq() const;
  // Every block answered (demo_req complete, demo_all present, big5, mfq,
  // political).
  bool IsComplete() const;

  bool operator==(const SocioProfile&) const = default;
};

// Multiple-choice vocabularies of the qualifier survey; "Other" is always
// accepted as well.
struct DemoAllField {
  std::string_view name;
  std::vector<std::string_view> options;
};
const std::vector<DemoAllField>& DemoAllVocabulary();

// Field-level validation; an empty result means valid. Messages name the
// offending field, e.g. "big5[3]: 7 outside [-2, 2]".
std::vector<std::string> ValidateProfile(const SocioProfile& profile);

struct Big5Scores {
  double extraversion = 0;
  double agreeableness = 0;
  double conscientiousness = 0;
  double neuroticism = 0;
  double openness = 0;
};

// BFI-10 keying: each trait is the mean of two items, reverse-keyed items
// negated. Extraversion {2R,3}, Agreeableness {7R,8}, Conscientiousness
// {1,9R}, Neuroticism {4,6R}, Openness {5R,10}.
// Throws ValidationError naming the first missing or out-of-range item.
Big5Scores ScoreBig5(std::span<const int> answers);

struct MfqScores {
  double care = 0;
  double fairness = 0;
  double loyalty = 0;
  double authority = 0;
  double sanctity = 0;
  bool attention_flag = false;  // item (f) answered above 2
};

MfqScores ScoreMfq(std::span<const int> answers);

enum class SurveyCompleteness { kBoth, kOne, kRequiredOnly };
std::string_view ToString(SurveyCompleteness c);
SurveyCompleteness ParseSurveyCompleteness(std::string_view s);
SurveyCompleteness CompletenessOf(const SocioProfile& a, const SocioProfile& b);

}  // namespace duet

#endif  // DUET_PROFILES_H_
