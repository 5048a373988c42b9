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

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "duet/error.h"
#include "duet/rng.h"
#include "duet/text.h"

namespace duet {
namespace {

constexpr std::array<std::string_view, kCanonicalListSize> kCanonicalWords = {
    "luck",      "grace",       "soul",       "fair",       "life",
    "pass",      "revolution",  "change",     "charge",     "degree",
    "force",     "code",        "genius",     "compound",   "time",
    "wake",      "plot",        "draft",      "ghost",      "play",
    "part",      "spell",       "well",       "point",      "link",
    "mass",      "disease",     "sub",        "state",      "alien",
    "space",     "mine",        "ray",        "millionaire", "agent",
    "bond",      "unicorn",     "figure",     "war",        "cycle",
    "boom",      "sound",       "trip",       "centaur",    "death",
    "club",      "crash",       "angel",      "cold",       "center",
    "spring",    "round",       "date",       "press",      "cast",
    "day",       "row",         "wind",       "fighter",    "embassy",
    "beat",      "leprechaun",  "comic",      "pitch",      "mount",
    "march",     "fall",        "undertaker", "green",      "switch",
    "strike",    "king",        "superhero",  "capital",    "slip",
    "lead",      "check",       "lap",        "mammoth",    "air",
    "match",     "spy",         "roulette",   "contract",   "witch",
    "stock",     "light",       "drop",       "spot",       "novel",
    "vacuum",    "cover",       "scientist",  "tag",        "conductor",
    "field",     "racket",      "poison",     "ninja",      "opera",
};

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string LineError(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

}  // namespace

bool IsValidWord(std::string_view word) {
  if (word.empty()) return false;
  return std::none_of(word.begin(), word.end(), [](unsigned char c) {
    return std::isspace(c) || std::isupper(c);
  });
}

WordList::WordList(std::vector<std::string> words) : words_(std::move(words)) {
  std::unordered_set<std::string_view> seen;
  for (const auto& w : words_) {
    if (!IsValidWord(w)) throw ValidationError("invalid word '" + w + "'");
    if (!seen.insert(w).second)
      throw ValidationError("duplicate word '" + w + "'");
  }
}

bool WordList::contains(std::string_view word) const {
  return std::find(words_.begin(), words_.end(), word) != words_.end();
}

std::size_t Board::IndexOf(std::string_view word) const {
  auto it = std::find(words.begin(), words.end(), word);
  return it == words.end() ? kBoardSize : static_cast<std::size_t>(it - words.begin());
}

const WordList& CanonicalWordList() {
  static const WordList list(
      std::vector<std::string>(kCanonicalWords.begin(), kCanonicalWords.end()));
  return list;
}

std::vector<LexiconEntry> ParseLexicon(std::string_view text) {
  std::vector<LexiconEntry> entries;
  std::size_t line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    line = Trim(line);
    if (line.empty() || line.front() == '#') continue;
    const char sep = line.find('\t') != std::string_view::npos ? '\t' : ',';
    std::vector<std::string_view> fields = Split(line, sep);
    if (fields.size() != 3)
      throw ParseError(LineError(line_no, "expected 3 fields, got " +
                                              std::to_string(fields.size())),
                       line_no);
    LexiconEntry entry;
    entry.word = ToLower(Trim(fields[0]));
    if (!IsValidWord(entry.word))
      throw ParseError(LineError(line_no, "invalid word"), line_no);
    std::string_view senses = Trim(fields[1]);
    auto [sp, sec] =
        std::from_chars(senses.data(), senses.data() + senses.size(), entry.sense_count);
    if (sec != std::errc() || sp != senses.data() + senses.size() || entry.sense_count < 0)
      throw ParseError(LineError(line_no, "bad sense count '" + std::string(senses) + "'"),
                       line_no);
    std::string_view conc = Trim(fields[2]);
    auto [cp, cec] =
        std::from_chars(conc.data(), conc.data() + conc.size(), entry.concreteness);
    if (cec != std::errc() || cp != conc.data() + conc.size())
      throw ParseError(LineError(line_no, "bad concreteness '" + std::string(conc) + "'"),
                       line_no);
    if (!(entry.concreteness >= kMinConcreteness && entry.concreteness <= kMaxConcreteness))
      throw ValidationError(LineError(
          line_no, "concreteness " + std::string(conc) + " outside [1, 5]"));
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<LexiconEntry> LoadLexicon(const std::filesystem::path& path) {
  return ParseLexicon(ReadFile(path));
}

WordList ParseWordList(std::string_view text) {
  std::vector<std::string> words;
  for (std::string_view line : SplitLines(text)) {
    line = Trim(line);
    if (line.empty()) continue;
    words.emplace_back(line);
  }
  return WordList(std::move(words));
}

WordList LoadWordList(const std::filesystem::path& path) {
  return ParseWordList(ReadFile(path));
}

WordList FilterCandidates(std::span<const LexiconEntry> lexicon, std::size_t n) {
  if (n == 0) throw ValidationError("filter_candidates: n must be positive");
  std::vector<const LexiconEntry*> polysemous;
  for (const auto& e : lexicon)
    if (e.sense_count >= 2) polysemous.push_back(&e);
  if (polysemous.size() < n)
    throw ValidationError("filter_candidates: requested " + std::to_string(n) +
                          " words but only " + std::to_string(polysemous.size()) +
                          " polysemous entries available");
  auto less = [](const LexiconEntry* a, const LexiconEntry* b) {
    if (a->concreteness != b->concreteness) return a->concreteness < b->concreteness;
    return a->word < b->word;
  };
  std::partial_sort(polysemous.begin(), polysemous.begin() + static_cast<std::ptrdiff_t>(n),
                    polysemous.end(), less);
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(polysemous[i]->word);
  return WordList(std::move(out));
}

Board SampleBoard(const WordList& list, std::uint64_t seed) {
  if (list.size() < kBoardSize)
    throw ValidationError("sample_board: need at least 25 words, got " +
                          std::to_string(list.size()));
  Rng rng(seed);
  Board board;
  board.seed = seed;
  for (std::size_t idx : rng.SampleIndices(list.size(), kBoardSize))
    board.words.push_back(list.words()[idx]);
  return board;
}

void ValidateBoard(const Board& board, const WordList& vocabulary) {
  if (board.words.size() != kBoardSize)
    throw ValidationError("board must have 25 words, has " +
                          std::to_string(board.words.size()));
  std::unordered_set<std::string_view> seen;
  for (const auto& w : board.words) {
    if (!vocabulary.contains(w))
      throw ValidationError("board word '" + w + "' not in vocabulary");
    if (!seen.insert(w).second)
      throw ValidationError("duplicate board word '" + w + "'");
  }
}

}  // namespace duet
