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

#ifndef DUET_WORD_BANK_H_
#define DUET_WORD_BANK_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace duet {

inline constexpr std::size_t kBoardSize = 25;
inline constexpr std::size_t kCanonicalListSize = 100;
inline constexpr double kMinConcreteness = 1.0;
inline constexpr double kMaxConcreteness = 5.0;

struct LexiconEntry {
  std::string word;
  int sense_count = 0;   // WordNet noun senses
  double concreteness = kMinConcreteness;  // mean rating, 1 abstract .. 5 concrete

  bool operator==(const LexiconEntry&) const = default;
};

// Ordered list of distinct lowercase words.
class WordList {
 public:
  WordList() = default;
  // Throws ValidationError on duplicates or malformed words.
  explicit WordList(std::vector<std::string> words);

  const std::vector<std::string>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  bool contains(std::string_view word) const;

  bool operator==(const WordList&) const = default;

 private:
  std::vector<std::string> words_;
};

struct Board {
  std::vector<std::string> words;  // exactly kBoardSize, canonical order
  std::uint64_t seed = 0;

  // Position of `word` on the board, or kBoardSize if absent.
  std::size_t IndexOf(std::string_view word) const;
  bool Contains(std::string_view word) const {
    return IndexOf(word) < words.size();
  }

  bool operator==(const Board&) const = default;
};

// A board word is a single lowercase token with no whitespace.
bool IsValidWord(std::string_view word);

// The shipped 100-word board vocabulary, in its published order.
const WordList& CanonicalWordList();

// Parses "word,senses,concreteness" (comma or tab separated) records.
// '#' comment lines and blank lines are skipped; words are case-folded.
std::vector<LexiconEntry> ParseLexicon(std::string_view text);
std::vector<LexiconEntry> LoadLexicon(const std::filesystem::path& path);

// One word per line, blank lines ignored.
WordList ParseWordList(std::string_view text);
WordList LoadWordList(const std::filesystem::path& path);

// The n polysemous (sense_count >= 2) entries with the lowest concreteness,
// ascending, equal concreteness ordered lexicographically.
WordList FilterCandidates(std::span<const LexiconEntry> lexicon, std::size_t n);

// 25 distinct words drawn uniformly without replacement; the board keeps
// the draw order. Same list and seed give the same board.
Board SampleBoard(const WordList& list, std::uint64_t seed);

// Checks the Board invariants against `vocabulary`; throws ValidationError.
void ValidateBoard(const Board& board, const WordList& vocabulary);

}  // namespace duet

#endif  // DUET_WORD_BANK_H_
