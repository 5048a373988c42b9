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

#ifndef DUET_RECORDS_H_
#define DUET_RECORDS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "duet/error.h"
#include "duet/game.h"
#include "duet/profiles.h"
#include "json.hpp"

namespace duet {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

class SchemaVersionError : public Error {
 public:
  SchemaVersionError(int found, int expected)
      : Error("schema_version " + std::to_string(found) + " found, " +
              std::to_string(expected) + " expected"),
        found_(found),
        expected_(expected) {}
  int found() const { return found_; }
  int expected() const { return expected_; }

 private:
  int found_;
  int expected_;
};

enum class GameOutcome { kWin, kLoss };
enum class Termination { kCompleted, kAbandoned };
std::string_view ToString(GameOutcome o);
std::string_view ToString(Termination t);

// Normalized rationale text for one turn, parallel to the raw fields.
struct NormalizedTurn {
  std::vector<std::string> targets;
  std::vector<std::string> guesses;
  // The external normalizer failed and identity cleanup was used instead.
  bool fallback = false;

  bool operator==(const NormalizedTurn&) const = default;
};

struct GameRecord {
  std::string game_id;
  std::array<std::string, kNumPlayers> players;
  std::array<SocioProfile, kNumPlayers> profiles;
  Board board;
  std::array<KeyCard, kNumPlayers> key_cards;
  GameConfig config;
  std::vector<TurnRecord> turns;
  GameOutcome outcome = GameOutcome::kLoss;
  Termination termination = Termination::kCompleted;
  SurveyCompleteness completeness = SurveyCompleteness::kRequiredOnly;
  std::vector<NormalizedTurn> normalized;  // empty, or one per turn

  const std::string& GiverId(const TurnRecord& turn) const { return players.at(turn.giver); }
  bool operator==(const GameRecord&) const = default;
};

// Builds a record from a finished (or abandoned) game. Only completed turns
// are kept.
GameRecord MakeRecord(std::string game_id, std::array<std::string, kNumPlayers> players,
                      std::array<SocioProfile, kNumPlayers> profiles, const GameState& state,
                      Termination termination = Termination::kCompleted);

// Replays the record through the engine. Throws RuleViolation on an illegal
// move and ValidationError when the stored outcome disagrees with replay.
GameState ReplayRecord(const GameRecord& record);
void ValidateRecord(const GameRecord& record);

// Game state right before turn `turn_index` starts.
GameState StateBeforeTurn(const GameRecord& record, std::size_t turn_index);

Json ToJson(const SocioProfile& profile);
SocioProfile ProfileFromJson(const Json& j);
Json ToJson(const TurnRecord& turn);
Json ToJson(const GameRecord& record);
GameRecord RecordFromJson(const Json& j);
Json ToJson(const PlayerView& view);
PlayerView PlayerViewFromJson(const Json& j);

// One compact JSON object, no trailing newline. Field order is fixed and
// absent survey blocks are omitted.
std::string SerializeGame(const GameRecord& record);
// Throws ParseError carrying the byte offset of malformed input, or
// SchemaVersionError.
GameRecord ParseGame(std::string_view bytes);

// Line-delimited archive: one SerializeGame line per record.
std::vector<GameRecord> ParseArchive(std::string_view text);
std::vector<GameRecord> ReadArchive(const std::filesystem::path& path);
void WriteArchive(const std::filesystem::path& path, std::span<const GameRecord> records);

// Single-writer append-only archive. Opening drops a torn final line left
// by a crash so the file stays parseable; every Append is flushed and
// fsync'd before returning.
class ArchiveWriter {
 public:
  explicit ArchiveWriter(const std::filesystem::path& path);
  ~ArchiveWriter();
  ArchiveWriter(const ArchiveWriter&) = delete;
  ArchiveWriter& operator=(const ArchiveWriter&) = delete;

  void Append(const GameRecord& record);
  // Bytes that were discarded while repairing the file on open.
  std::size_t repaired_bytes() const { return repaired_bytes_; }

 private:
  std::mutex mu_;
  int fd_ = -1;
  std::size_t repaired_bytes_ = 0;
};

struct DatasetStats {
  std::size_t games = 0;
  std::size_t turns = 0;
  std::size_t targets = 0;
  std::size_t wins = 0;
  std::size_t losses = 0;
  double AvgTurns() const { return games ? double(turns) / double(games) : 0.0; }
  double AvgTargetsPerTurn() const { return turns ? double(targets) / double(turns) : 0.0; }
};

DatasetStats ComputeStats(std::span<const GameRecord> records);
// games=.. turns=.. avg_turns=9.70 ...
std::string FormatStats(const DatasetStats& stats);

struct TurnRef {
  std::size_t game = 0;
  std::size_t turn = 0;
  bool operator==(const TurnRef&) const = default;
};

struct SplitPart {
  std::vector<std::string> givers;  // sorted
  std::vector<TurnRef> turns;       // record order
};

struct DatasetSplit {
  SplitPart train;
  SplitPart val;
  SplitPart test;
  const SplitPart& part(int i) const { return i == 0 ? train : (i == 1 ? val : test); }
};

inline constexpr std::array<int, 3> kDefaultSplitRatios = {80, 10, 10};

// Largest-remainder apportionment of n units; ties go to the earlier part.
std::array<std::size_t, 3> Apportion(std::size_t n, std::array<int, 3> ratios);

// Assigns every clue-giver identity to exactly one part; each turn follows
// its giver.
DatasetSplit SplitByClueGiver(std::span<const GameRecord> records,
                              std::array<int, 3> ratios = kDefaultSplitRatios,
                              std::uint64_t seed = 0);

}  // namespace duet

#endif  // DUET_RECORDS_H_
