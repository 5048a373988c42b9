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

#ifndef DUET_SERVER_PROTOCOL_H_
#define DUET_SERVER_PROTOCOL_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "duet/net.h"
#include "duet/records.h"

namespace duet::server {

enum class MessageKind {
  kJoin,
  kMatched,
  kState,
  kSubmitClue,
  kSubmitGuess,
  kEndTurn,
  kSurvey,
  kGameOver,
  kError,
};

std::string_view ToString(MessageKind kind);  // "JOIN", ...
MessageKind ParseMessageKind(std::string_view s);

struct SessionMessage {
  MessageKind kind = MessageKind::kError;
  std::string session;
  std::string token;
  std::uint64_t seq = 0;
  Json payload = Json::object();
};

Json ToJson(const SessionMessage& m);
// Throws ParseError for unknown kinds or missing fields.
SessionMessage MessageFromJson(const Json& j);
SessionMessage ParseMessage(std::string_view text);
std::string SerializeMessage(const SessionMessage& m);

inline constexpr std::size_t kMaxFrameBytes = 1 << 20;

// Raw TCP framing: decimal byte length, '\n', then that many bytes of JSON.
std::string FrameMessage(const SessionMessage& m);

class FrameDecoder {
 public:
  // Appends bytes and returns every complete frame body. Throws ParseError
  // on a malformed or oversized length line.
  std::vector<std::string> Feed(std::string_view bytes);
  std::size_t buffered() const { return buffer_.size(); }

 private:
  std::string buffer_;
};

// Blocking client for the raw framed protocol. Used by scripted players and
// tests.
class FramedClient {
 public:
  FramedClient(const Endpoint& endpoint, std::chrono::milliseconds connect_timeout);
  ~FramedClient();
  FramedClient(const FramedClient&) = delete;
  FramedClient& operator=(const FramedClient&) = delete;

  void Send(const SessionMessage& m);
  // nullopt on timeout; throws EndpointError when the server hangs up.
  std::optional<SessionMessage> Receive(std::chrono::milliseconds timeout);
  // Receives until a message of `kind` arrives; earlier ones are dropped
  // into `skipped` when given.
  SessionMessage ReceiveKind(MessageKind kind, std::chrono::milliseconds timeout,
                             std::vector<SessionMessage>* skipped = nullptr);
  int fd() const { return fd_; }

 private:
  int fd_ = -1;
  FrameDecoder decoder_;
  std::vector<std::string> pending_;
};

}  // namespace duet::server

#endif  // DUET_SERVER_PROTOCOL_H_
