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

#include "duet/word_bank.h"

#include <gtest/gtest.h>

#include <set>

#include "duet/error.h"
#include "duet/rng.h"
#include "test_util.h"

namespace duet {
namespace {

const std::vector<std::string>& kPublished = testing::PublishedWordList();

TEST(WordBankTest, CanonicalListMatchesPublishedList) {
  const WordList& list = CanonicalWordList();
  ASSERT_EQ(list.size(), kCanonicalListSize);
  EXPECT_EQ(list.words(), kPublished);
  std::set<std::string> distinct(list.words().begin(), list.words().end());
  EXPECT_EQ(distinct.size(), 100u);
}

TEST(WordBankTest, FilterReproducesCanonicalList) {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto lex = testing::SyntheticLexicon(seed);
    EXPECT_EQ(FilterCandidates(lex, 100), CanonicalWordList());
  }
}

TEST(WordBankTest, FilterBreaksConcretenessTiesLexicographically) {
  std::vector<LexiconEntry> lex = {{"zeta", 2, 2.0}, {"alpha", 3, 2.0}, {"mid", 2, 1.5},
                                   {"single", 1, 1.0}};
  EXPECT_EQ(FilterCandidates(lex, 3).words(), (std::vector<std::string>{"mid", "alpha", "zeta"}));
}

TEST(WordBankTest, FilterNeedsEnoughCandidates) {
  std::vector<LexiconEntry> lex = {{"one", 2, 2.0}};
  EXPECT_THROW(FilterCandidates(lex, 2), ValidationError);
}

TEST(WordBankTest, ParseLexiconSkipsCommentsAndFoldsCase) {
  auto lex = ParseLexicon("# word,senses,conc\nLuck,3,1.8\n\ngrace\t5\t1.9\n");
  ASSERT_EQ(lex.size(), 2u);
  EXPECT_EQ(lex[0], (LexiconEntry{"luck", 3, 1.8}));
  EXPECT_EQ(lex[1], (LexiconEntry{"grace", 5, 1.9}));
  EXPECT_THROW(ParseLexicon("luck,three,1.0\n"), ParseError);
}

TEST(WordBankTest, SampleBoardIsDeterministicAndDistinct) {
  Board a = SampleBoard(CanonicalWordList(), 99);
  Board b = SampleBoard(CanonicalWordList(), 99);
  Board c = SampleBoard(CanonicalWordList(), 100);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.words, c.words);
  ASSERT_EQ(a.words.size(), kBoardSize);
  std::set<std::string> s(a.words.begin(), a.words.end());
  EXPECT_EQ(s.size(), kBoardSize);
  for (const auto& w : a.words) EXPECT_TRUE(CanonicalWordList().contains(w));
  EXPECT_NO_THROW(ValidateBoard(a, CanonicalWordList()));
}

TEST(WordBankTest, ValidateBoardRejectsBadBoards) {
  Board b = SampleBoard(CanonicalWordList(), 1);
  Board dup = b;
  dup.words[1] = dup.words[0];
  EXPECT_THROW(ValidateBoard(dup, CanonicalWordList()), ValidationError);
  Board foreign = b;
  foreign.words[0] = "zebra";
  EXPECT_THROW(ValidateBoard(foreign, CanonicalWordList()), ValidationError);
  Board small = b;
  small.words.pop_back();
  EXPECT_THROW(ValidateBoard(small, CanonicalWordList()), ValidationError);
}

TEST(WordBankTest, WordListRejectsDuplicatesAndBadWords) {
  EXPECT_THROW(WordList({"a", "a"}), ValidationError);
  EXPECT_THROW(WordList({"two words"}), ValidationError);
  EXPECT_EQ(ParseWordList("luck\n\ngrace\n").words(), (std::vector<std::string>{"luck", "grace"}));
}

}  // namespace
}  // namespace duet
