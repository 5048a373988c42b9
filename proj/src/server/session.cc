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

#include "duet/server/session.h"

#include <algorithm>
#include <cstdio>

#include "duet/error.h"
#include "duet/rng.h"

namespace duet::server {
namespace {

std::string HexId(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "s%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void MergeProfile(SocioProfile& into, const SocioProfile& from) {
  if (from.demo_req) into.demo_req = from.demo_req;
  if (from.demo_all) into.demo_all = from.demo_all;
  if (from.big5) into.big5 = from.big5;
  if (from.mfq) into.mfq = from.mfq;
  if (from.political) into.political = from.political;
}

}  // namespace

bool IsValidToken(std::string_view token) {
  if (token.empty() || token.size() > kMaxTokenLength) return false;
  return std::all_of(token.begin(), token.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-';
  });
}

SessionManager::SessionManager(SessionConfig config, ArchiveSink sink)
    : config_(std::move(config)), sink_(std::move(sink)) {
  if (!config_.vocabulary) config_.vocabulary = &CanonicalWordList();
}

std::vector<Outgoing> SessionManager::Handle(const SessionMessage& in, Clock::time_point now) {
  if (!IsValidToken(in.token)) return {ErrorTo(in.token, in.session, "invalid player token")};
  switch (in.kind) {
    case MessageKind::kSurvey:
      return HandleSurvey(in);
    case MessageKind::kJoin:
      return HandleJoin(in, now);
    case MessageKind::kSubmitClue:
    case MessageKind::kSubmitGuess:
    case MessageKind::kEndTurn:
      return HandleAction(in, now);
    default:
      return {ErrorTo(in.token, in.session,
                      "clients may not send " + std::string(ToString(in.kind)))};
  }
}

std::vector<Outgoing> SessionManager::HandleSurvey(const SessionMessage& in) {
  SocioProfile incoming;
  try {
    incoming = ProfileFromJson(in.payload);
  } catch (const Error& e) {
    return {ErrorTo(in.token, in.session, "invalid survey", Json::array({e.what()}))};
  }
  SocioProfile merged = profiles_.count(in.token) ? profiles_[in.token] : SocioProfile{};
  MergeProfile(merged, incoming);
  auto errors = ValidateProfile(merged);
  if (incoming.demo_req && !incoming.HasDemoReq())
    errors.push_back("demo_req: age, country and native_english are required");
  if (!errors.empty()) {
    Json details = Json::array();
    for (auto& e : errors) details.push_back(e);
    return {ErrorTo(in.token, in.session, "invalid survey", std::move(details))};
  }
  profiles_[in.token] = merged;
  SessionMessage ack;
  ack.kind = MessageKind::kSurvey;
  ack.token = in.token;
  ack.payload = {{"accepted", true}, {"complete", merged.IsComplete()},
                 {"profile", ToJson(merged)}};
  return {{in.token, std::move(ack)}};
}

std::vector<Outgoing> SessionManager::HandleJoin(const SessionMessage& in, Clock::time_point now) {
  if (auto it = session_of_.find(in.token); it != session_of_.end()) {
    // Reconnect: resend the match and the current view.
    Session& s = sessions_.at(it->second);
    PlayerId p = s.tokens[0] == in.token ? 0 : 1;
    std::uint64_t last_seq = in.payload.is_object() ? in.payload.value("last_seq", std::uint64_t{0}) : 0;
    s.last_activity = now;
    std::vector<Outgoing> out;
    out.push_back(SessionMessageTo(s, p, MessageKind::kMatched,
                                   {{"player", p}, {"resumed", true}, {"last_seq", last_seq}}));
    out.push_back(SessionMessageTo(s, p, MessageKind::kState, ToJson(ViewFor(s.state, p))));
    return out;
  }
  if (config_.allowlist && !config_.allowlist(in.token))
    return {ErrorTo(in.token, in.session, "player is not on the allowlist")};
  auto prof = profiles_.find(in.token);
  if (prof == profiles_.end() || !prof->second.HasDemoReq())
    return {ErrorTo(in.token, in.session, "demo_req survey required before matchmaking")};
  if (std::find(queue_.begin(), queue_.end(), in.token) != queue_.end())
    return {ErrorTo(in.token, in.session, "player is already waiting")};
  queue_.push_back(in.token);
  if (queue_.size() < 2) return {};
  std::string a = queue_.front();
  queue_.pop_front();
  std::string b = queue_.front();
  queue_.pop_front();
  return StartSession(a, b, now);
}

std::vector<Outgoing> SessionManager::StartSession(const std::string& a, const std::string& b,
                                                   Clock::time_point now) {
  std::uint64_t index = next_session_++;
  std::uint64_t seed = ForkSeed(config_.seed, "session", index);
  Rng rng(ForkSeed(seed, "roles"));
  GameConfig game = config_.game;
  game.first_giver = static_cast<PlayerId>(rng.Below(2));
  Board board = SampleBoard(*config_.vocabulary, ForkSeed(seed, "board"));

  Session s;
  s.id = HexId(seed);
  s.seed = seed;
  s.tokens = {a, b};
  s.state = NewGame(board, ForkSeed(seed, "keys"), game);
  s.last_activity = now;
  auto [it, inserted] = sessions_.emplace(s.id, std::move(s));
  if (!inserted) throw Error("session id collision " + it->first);
  session_of_[a] = it->first;
  session_of_[b] = it->first;

  std::vector<Outgoing> out;
  for (PlayerId p = 0; p < kNumPlayers; ++p)
    out.push_back(SessionMessageTo(it->second, p, MessageKind::kMatched,
                                   {{"player", p}, {"resumed", false}}));
  BroadcastState(it->second, out);
  return out;
}

std::vector<Outgoing> SessionManager::HandleAction(const SessionMessage& in,
                                                   Clock::time_point now) {
  auto sid = session_of_.find(in.token);
  if (sid == session_of_.end()) return {ErrorTo(in.token, in.session, "not in a session")};
  Session& s = sessions_.at(sid->second);
  if (!in.session.empty() && in.session != s.id)
    return {ErrorTo(in.token, in.session, "session id does not match")};
  PlayerId p = s.tokens[0] == in.token ? 0 : 1;
  const Json& pl = in.payload;
  try {
    if (in.kind == MessageKind::kSubmitClue) {
      if (p != s.state.active_giver()) throw RuleViolation("only the clue giver may submit a clue");
      if (!pl.is_object()) throw RuleViolation("SUBMIT_CLUE payload must be an object");
      auto clue = pl.value("clue", std::string());
      auto targets = pl.value("targets", std::vector<std::string>());
      auto rationales = pl.value("rationales", std::vector<std::string>());
      s.state = SubmitClue(s.state, clue, targets, rationales);
    } else if (in.kind == MessageKind::kSubmitGuess) {
      if (p != s.state.active_guesser()) throw RuleViolation("only the guesser may guess");
      if (!pl.is_object()) throw RuleViolation("SUBMIT_GUESS payload must be an object");
      auto word = pl.value("word", std::string());
      auto rationale = pl.value("rationale", std::string());
      s.state = SubmitGuess(s.state, word, rationale).first;
    } else {
      if (p != s.state.active_guesser()) throw RuleViolation("only the guesser may end the turn");
      s.state = EndTurn(s.state);
    }
  } catch (const RuleViolation& e) {
    return {SessionMessageTo(s, p, MessageKind::kError, {{"reason", e.what()}})};
  } catch (const Json::exception& e) {
    return {SessionMessageTo(s, p, MessageKind::kError,
                             {{"reason", std::string("malformed payload: ") + e.what()}})};
  }
  s.last_activity = now;
  std::vector<Outgoing> out;
  if (s.state.IsTerminal()) {
    Finish(s, Termination::kCompleted, out);
  } else {
    BroadcastState(s, out);
  }
  return out;
}

std::vector<Outgoing> SessionManager::Tick(Clock::time_point now) {
  std::vector<std::string> expired;
  for (auto& [id, s] : sessions_)
    if (now - s.last_activity > config_.idle_timeout) expired.push_back(id);
  std::vector<Outgoing> out;
  for (const auto& id : expired) Finish(sessions_.at(id), Termination::kAbandoned, out);
  return out;
}

void SessionManager::Finish(Session& s, Termination termination, std::vector<Outgoing>& out) {
  bool persist = termination == Termination::kCompleted ||
                 s.state.completed_turns() >= kMinQualifyingTurns;
  if (persist) {
    std::array<SocioProfile, kNumPlayers> profiles = {profiles_[s.tokens[0]],
                                                      profiles_[s.tokens[1]]};
    sink_(MakeRecord(s.id, s.tokens, profiles, s.state, termination));
    ++persisted_;
  } else {
    ++dropped_;
  }
  const bool won = s.state.phase() == Phase::kWon;
  for (PlayerId p = 0; p < kNumPlayers; ++p) {
    Json payload;
    payload["outcome"] = won ? "WIN" : "LOSS";
    payload["termination"] = ToString(termination);
    payload["persisted"] = persist;
    payload["completed_turns"] = s.state.completed_turns();
    // Everything is revealed once the game is over.
    PlayerView view = ViewFor(s.state, p);
    if (!s.state.IsTerminal()) {
      view.partner_key = s.state.key_card(Partner(p)).roles();
      for (std::size_t t = 0; t < view.history.size() && t < s.state.turns().size(); ++t) {
        view.history[t].targets = s.state.turns()[t].targets;
        view.history[t].target_rationales = s.state.turns()[t].target_rationales;
        for (std::size_t g = 0; g < view.history[t].guesses.size(); ++g)
          view.history[t].guesses[g].rationale = s.state.turns()[t].guesses[g].rationale;
      }
    }
    payload["view"] = ToJson(view);
    out.push_back(SessionMessageTo(s, p, MessageKind::kGameOver, std::move(payload)));
  }
  std::string id = s.id;
  session_of_.erase(s.tokens[0]);
  session_of_.erase(s.tokens[1]);
  sessions_.erase(id);
}

void SessionManager::BroadcastState(Session& s, std::vector<Outgoing>& out) {
  for (PlayerId p = 0; p < kNumPlayers; ++p)
    out.push_back(SessionMessageTo(s, p, MessageKind::kState, ToJson(ViewFor(s.state, p))));
}

Outgoing SessionManager::SessionMessageTo(Session& s, PlayerId player, MessageKind kind,
                                          Json payload) {
  SessionMessage m;
  m.kind = kind;
  m.session = s.id;
  m.token = s.tokens[player];
  m.seq = ++s.seq;
  m.payload = std::move(payload);
  return {s.tokens[player], std::move(m)};
}

Outgoing SessionManager::ErrorTo(const std::string& token, const std::string& session,
                                 std::string reason, Json details) {
  SessionMessage m;
  m.kind = MessageKind::kError;
  m.session = session;
  m.token = token;
  m.payload = {{"reason", std::move(reason)}};
  if (!details.is_null()) m.payload["errors"] = std::move(details);
  return {token, std::move(m)};
}

ManagerCounts SessionManager::counts() const {
  return {sessions_.size(), queue_.size(), profiles_.size(), persisted_, dropped_};
}

std::string SessionManager::SessionOf(const std::string& token) const {
  auto it = session_of_.find(token);
  return it == session_of_.end() ? std::string() : it->second;
}

const GameState* SessionManager::StateOf(const std::string& session) const {
  auto it = sessions_.find(session);
  return it == sessions_.end() ? nullptr : &it->second.state;
}

}  // namespace duet::server
