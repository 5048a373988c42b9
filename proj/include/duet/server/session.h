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

#ifndef DUET_SERVER_SESSION_H_
#define DUET_SERVER_SESSION_H_

#include <array>
#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "duet/game.h"
#include "duet/records.h"
#include "duet/server/protocol.h"
#include "duet/word_bank.h"

namespace duet::server {

using Clock = std::chrono::steady_clock;

inline constexpr std::chrono::seconds kDefaultIdleTimeout{300};
inline constexpr std::size_t kMaxTokenLength = 64;

// Tokens are 1..64 characters of [A-Za-z0-9_-].
bool IsValidToken(std::string_view token);

struct SessionConfig {
  std::uint64_t seed = 0;
  GameConfig game;  // first_giver is drawn per session
  std::chrono::milliseconds idle_timeout = kDefaultIdleTimeout;
  // When set, only tokens it accepts may JOIN.
  std::function<bool(const std::string&)> allowlist;
  const WordList* vocabulary = nullptr;  // defaults to the canonical list
};

struct Outgoing {
  std::string token;
  SessionMessage message;
};

// Receives every record that qualifies for the archive.
using ArchiveSink = std::function<void(GameRecord)>;

struct ManagerCounts {
  std::size_t sessions = 0;
  std::size_t waiting = 0;
  std::size_t surveyed = 0;
  std::size_t persisted = 0;
  std::size_t abandoned_dropped = 0;
};

// Matchmaking, surveys and game sessions with no I/O. Every call returns
// the messages to deliver, addressed by player token. Messages are handled
// one at a time in call order, so each session sees a sequential history.
class SessionManager {
 public:
  SessionManager(SessionConfig config, ArchiveSink sink);

  std::vector<Outgoing> Handle(const SessionMessage& in, Clock::time_point now);
  // Ends sessions idle for longer than the timeout. Sessions with at least
  // kMinQualifyingTurns completed turns are archived as abandoned.
  std::vector<Outgoing> Tick(Clock::time_point now);

  ManagerCounts counts() const;
  // Session id of an active game for `token`, or "".
  std::string SessionOf(const std::string& token) const;
  const GameState* StateOf(const std::string& session) const;

 private:
  struct Session {
    std::string id;
    std::uint64_t seed = 0;
    std::array<std::string, kNumPlayers> tokens;
    GameState state;
    Clock::time_point last_activity;
    std::uint64_t seq = 0;
  };

  std::vector<Outgoing> HandleSurvey(const SessionMessage& in);
  std::vector<Outgoing> HandleJoin(const SessionMessage& in, Clock::time_point now);
  std::vector<Outgoing> HandleAction(const SessionMessage& in, Clock::time_point now);
  std::vector<Outgoing> StartSession(const std::string& a, const std::string& b,
                                     Clock::time_point now);

  Outgoing ErrorTo(const std::string& token, const std::string& session, std::string reason,
                   Json details = nullptr);
  Outgoing SessionMessageTo(Session& s, PlayerId player, MessageKind kind, Json payload);
  void BroadcastState(Session& s, std::vector<Outgoing>& out);
  void Finish(Session& s, Termination termination, std::vector<Outgoing>& out);

  SessionConfig config_;
  ArchiveSink sink_;
  std::map<std::string, SocioProfile, std::less<>> profiles_;
  std::deque<std::string> queue_;
  std::map<std::string, Session, std::less<>> sessions_;
  std::map<std::string, std::string, std::less<>> session_of_;
  std::uint64_t next_session_ = 0;
  std::size_t persisted_ = 0;
  std::size_t dropped_ = 0;
};

}  // namespace duet::server

#endif  // DUET_SERVER_SESSION_H_
