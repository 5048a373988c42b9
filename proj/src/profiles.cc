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

#include <algorithm>

#include "duet/error.h"
#include "duet/text.h"

namespace duet {
namespace {

struct Item {
  int index;     // 0-based
  bool reverse;
};

// BFI-10 key, one pair of items per trait.
constexpr Item kExtraversion[] = {{1, true}, {2, false}};
constexpr Item kAgreeableness[] = {{6, true}, {7, false}};
constexpr Item kConscientiousness[] = {{0, false}, {8, true}};
constexpr Item kNeuroticism[] = {{3, false}, {5, true}};
constexpr Item kOpenness[] = {{4, true}, {9, false}};

double TraitMean(std::span<const int> answers, std::span<const Item> items) {
  double sum = 0;
  for (const Item& it : items) sum += it.reverse ? -answers[it.index] : answers[it.index];
  return sum / static_cast<double>(items.size());
}

double Mean(std::span<const int> answers, std::initializer_list<int> items) {
  double sum = 0;
  for (int i : items) sum += answers[i];
  return sum / static_cast<double>(items.size());
}

void CheckItems(std::span<const int> answers, int expected, int lo, int hi,
                std::string_view block, bool letters) {
  auto name = [&](int i) {
    return letters ? std::string(block) + " item (" + static_cast<char>('a' + i) + ")"
                   : std::string(block) + " item " + std::to_string(i + 1);
  };
  for (int i = 0; i < expected; ++i) {
    if (static_cast<std::size_t>(i) >= answers.size())
      throw ValidationError(name(i) + " is missing");
    if (answers[i] < lo || answers[i] > hi)
      throw ValidationError(name(i) + ": " + std::to_string(answers[i]) + " outside [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  if (answers.size() > static_cast<std::size_t>(expected))
    throw ValidationError(std::string(block) + ": expected " + std::to_string(expected) +
                          " answers, got " + std::to_string(answers.size()));
}

bool OptionAllowed(const DemoAllField& field, const std::string& value) {
  if (ToLower(value) == "other") return true;
  return std::any_of(field.options.begin(), field.options.end(),
                     [&](std::string_view o) { return ToLower(o) == ToLower(value); });
}

}  // namespace

std::string_view ToString(Political p) {
  switch (p) {
    case Political::kLiberal: return "liberal";
    case Political::kModerateLiberal: return "moderate liberal";
    case Political::kModerateConservative: return "moderate conservative";
    case Political::kConservative: return "conservative";
    case Political::kLibertarian: return "libertarian";
  }
  return "?";
}

Political ParsePolitical(std::string_view s) {
  std::string v = ToLower(Trim(s));
  for (Political p : {Political::kLiberal, Political::kModerateLiberal,
                      Political::kModerateConservative, Political::kConservative,
                      Political::kLibertarian})
    if (v == ToString(p)) return p;
  throw ValidationError("unknown political leaning '" + std::string(s) + "'");
}

bool SocioProfile::HasDemoReq() const {
  return demo_req && demo_req->age && demo_req->country && demo_req->native_english;
}

bool SocioProfile::IsComplete() const {
  return HasDemoReq() && demo_all && big5 && mfq && political;
}

const std::vector<DemoAllField>& DemoAllVocabulary() {
  static const std::vector<DemoAllField> vocab = {
      {"gender", {"Woman", "Man", "Transgender", "Non-binary / non-conforming"}},
      {"age_range",
       {"0-17 years old", "18-22 years old", "22-30 years old", "30-45 years old", "45+"}},
      {"race",
       {"African-American/Black", "Asian", "Latino or Hispanic", "Native American",
        "Native Hawaiian or Pacific Islander", "White / Caucasian"}},
      {"continent",
       {"North America", "Central / South America", "Europe", "Africa", "Asia", "Australia"}},
      {"education",
       {"Some High School / No Diploma", "High School Diploma",
        "Associate's Degree / Trade School", "Master's Degree", "Doctorate Degree"}},
      {"marital_status",
       {"Single and never married", "Married or in a domestic partnership", "Widowed",
        "Divorced", "Separated"}},
      {"native_language", {"English", "Arabic", "French", "Mandarin", "Spanish"}},
      {"religion",
       {"Buddhism", "Catholicism/Christianity", "Hinduism", "Islam", "Judaism"}},
  };
  return vocab;
}

std::vector<std::string> ValidateProfile(const SocioProfile& profile) {
  std::vector<std::string> errors;
  if (profile.demo_req) {
    const DemoReq& d = *profile.demo_req;
    if (d.age && (*d.age < 0 || *d.age > 130))
      errors.push_back("demo_req.age: " + std::to_string(*d.age) + " is not a plausible age");
    if (d.country && Trim(*d.country).empty())
      errors.push_back("demo_req.country: empty");
  }
  if (profile.demo_all) {
    const DemoAll& d = *profile.demo_all;
    const std::optional<std::string>* values[] = {&d.gender,    &d.age_range,      &d.race,
                                                  &d.continent, &d.education,      &d.marital_status,
                                                  &d.native_language, &d.religion};
    const auto& vocab = DemoAllVocabulary();
    for (std::size_t i = 0; i < vocab.size(); ++i)
      if (values[i]->has_value() && !OptionAllowed(vocab[i], **values[i]))
        errors.push_back("demo_all." + std::string(vocab[i].name) + ": '" + **values[i] +
                         "' is not an offered option");
  }
  if (profile.big5)
    for (int i = 0; i < kBig5Items; ++i) {
      int v = (*profile.big5)[i];
      if (v < kLikertMin || v > kLikertMax)
        errors.push_back("big5[" + std::to_string(i + 1) + "]: " + std::to_string(v) +
                         " outside [-2, 2]");
    }
  if (profile.mfq)
    for (int i = 0; i < kMfqItems; ++i) {
      int v = (*profile.mfq)[i];
      if (v < kMfqMin || v > kMfqMax)
        errors.push_back(std::string("mfq[") + static_cast<char>('a' + i) +
                         "]: " + std::to_string(v) + " outside [0, 5]");
    }
  return errors;
}

Big5Scores ScoreBig5(std::span<const int> answers) {
  CheckItems(answers, kBig5Items, kLikertMin, kLikertMax, "big5", false);
  Big5Scores s;
  s.extraversion = TraitMean(answers, kExtraversion);
  s.agreeableness = TraitMean(answers, kAgreeableness);
  s.conscientiousness = TraitMean(answers, kConscientiousness);
  s.neuroticism = TraitMean(answers, kNeuroticism);
  s.openness = TraitMean(answers, kOpenness);
  return s;
}

MfqScores ScoreMfq(std::span<const int> answers) {
  CheckItems(answers, kMfqItems, kMfqMin, kMfqMax, "mfq", true);
  MfqScores s;
  s.care = Mean(answers, {0, 6});
  s.fairness = Mean(answers, {1, 7});
  s.loyalty = Mean(answers, {2, 8});
  s.authority = Mean(answers, {3, 9});
  s.sanctity = Mean(answers, {4});
  s.attention_flag = answers[kMfqAttentionItem] > kMfqAttentionThreshold;
  return s;
}

std::string_view ToString(SurveyCompleteness c) {
  switch (c) {
    case SurveyCompleteness::kBoth: return "both";
    case SurveyCompleteness::kOne: return "one";
    case SurveyCompleteness::kRequiredOnly: return "required_only";
  }
  return "?";
}

SurveyCompleteness ParseSurveyCompleteness(std::string_view s) {
  if (s == "both") return SurveyCompleteness::kBoth;
  if (s == "one") return SurveyCompleteness::kOne;
  if (s == "required_only") return SurveyCompleteness::kRequiredOnly;
  throw ValidationError("unknown survey completeness '" + std::string(s) + "'");
}

SurveyCompleteness CompletenessOf(const SocioProfile& a, const SocioProfile& b) {
  int complete = (a.IsComplete() ? 1 : 0) + (b.IsComplete() ? 1 : 0);
  if (complete == 2) return SurveyCompleteness::kBoth;
  if (complete == 1) return SurveyCompleteness::kOne;
  return SurveyCompleteness::kRequiredOnly;
}

}  // namespace duet
