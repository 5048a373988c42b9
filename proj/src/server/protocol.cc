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

#include "duet/server/protocol.h"

#include <poll.h>
#include <sys/socket.h>

#include <array>
#include <charconv>

#include "duet/error.h"

namespace duet::server {
namespace {

constexpr std::array<std::pair<MessageKind, std::string_view>, 9> kKinds = {{
    {MessageKind::kJoin, "JOIN"},
    {MessageKind::kMatched, "MATCHED"},
    {MessageKind::kState, "STATE"},
    {MessageKind::kSubmitClue, "SUBMIT_CLUE"},
    {MessageKind::kSubmitGuess, "SUBMIT_GUESS"},
    {MessageKind::kEndTurn, "END_TURN"},
    {MessageKind::kSurvey, "SURVEY"},
    {MessageKind::kGameOver, "GAME_OVER"},
    {MessageKind::kError, "ERROR"},
}};

}  // namespace

std::string_view ToString(MessageKind kind) {
  for (const auto& [k, s] : kKinds)
    if (k == kind) return s;
  return "?";
}

MessageKind ParseMessageKind(std::string_view s) {
  for (const auto& [k, name] : kKinds)
    if (name == s) return k;
  throw ParseError("unknown message kind '" + std::string(s) + "'", 0);
}

Json ToJson(const SessionMessage& m) {
  Json j;
  j["kind"] = ToString(m.kind);
  j["session"] = m.session;
  j["token"] = m.token;
  j["seq"] = m.seq;
  j["payload"] = m.payload;
  return j;
}

SessionMessage MessageFromJson(const Json& j) {
  if (!j.is_object()) throw ParseError("message must be a JSON object", 0);
  try {
    SessionMessage m;
    m.kind = ParseMessageKind(j.at("kind").get<std::string>());
    m.session = j.value("session", std::string());
    m.token = j.value("token", std::string());
    m.seq = j.value("seq", std::uint64_t{0});
    m.payload = j.contains("payload") ? j.at("payload") : Json::object();
    return m;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed message: ") + e.what(), 0);
  }
}

SessionMessage ParseMessage(std::string_view text) {
  try {
    return MessageFromJson(Json::parse(text.begin(), text.end()));
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("message is not JSON: ") + e.what(), e.byte);
  }
}

std::string SerializeMessage(const SessionMessage& m) {
  return ToJson(m).dump(-1, ' ', false, Json::error_handler_t::replace);
}

std::string FrameMessage(const SessionMessage& m) {
  std::string body = SerializeMessage(m);
  return std::to_string(body.size()) + "\n" + body;
}

std::vector<std::string> FrameDecoder::Feed(std::string_view bytes) {
  buffer_.append(bytes);
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    auto nl = buffer_.find('\n', pos);
    if (nl == std::string::npos) {
      if (buffer_.size() - pos > 20) throw ParseError("frame length line too long", pos);
      break;
    }
    std::string_view len_text(buffer_.data() + pos, nl - pos);
    std::size_t len = 0;
    auto [ptr, ec] = std::from_chars(len_text.data(), len_text.data() + len_text.size(), len);
    if (len_text.empty() || ec != std::errc() || ptr != len_text.data() + len_text.size())
      throw ParseError("bad frame length '" + std::string(len_text) + "'", pos);
    if (len > kMaxFrameBytes) throw ParseError("frame exceeds " + std::to_string(kMaxFrameBytes) + " bytes", pos);
    if (buffer_.size() - (nl + 1) < len) break;
    out.emplace_back(buffer_, nl + 1, len);
    pos = nl + 1 + len;
  }
  buffer_.erase(0, pos);
  return out;
}

FramedClient::FramedClient(const Endpoint& endpoint, std::chrono::milliseconds connect_timeout)
    : fd_(ConnectTcp(endpoint, connect_timeout)) {}

FramedClient::~FramedClient() { CloseFd(fd_); }

void FramedClient::Send(const SessionMessage& m) {
  if (!WriteAll(fd_, FrameMessage(m))) throw EndpointError("server connection lost");
}

std::optional<SessionMessage> FramedClient::Receive(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (pending_.empty()) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return std::nullopt;
    pollfd p{fd_, POLLIN, 0};
    if (::poll(&p, 1, static_cast<int>(left.count())) <= 0) continue;
    char buf[8192];
    ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
    if (n <= 0) throw EndpointError("server closed the connection");
    for (auto& f : decoder_.Feed(std::string_view(buf, static_cast<std::size_t>(n))))
      pending_.push_back(std::move(f));
  }
  std::string body = std::move(pending_.front());
  pending_.erase(pending_.begin());
  return ParseMessage(body);
}

SessionMessage FramedClient::ReceiveKind(MessageKind kind, std::chrono::milliseconds timeout,
                                         std::vector<SessionMessage>* skipped) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    auto m = Receive(std::max(left, std::chrono::milliseconds(0)));
    if (!m) throw EndpointError("timed out waiting for " + std::string(ToString(kind)));
    if (m->kind == kind) return *m;
    if (skipped) skipped->push_back(std::move(*m));
  }
}

}  // namespace duet::server
