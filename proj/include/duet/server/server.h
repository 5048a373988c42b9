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

#ifndef DUET_SERVER_SERVER_H_
#define DUET_SERVER_SERVER_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>

#include "duet/normalizer.h"
#include "duet/records.h"
#include "duet/server/session.h"

namespace duet::server {

// Single archive writer fed by a queue. Records are normalized on the
// writer thread, so a slow normalizer never stalls the game loop.
class ArchiveQueue {
 public:
  ArchiveQueue(const std::filesystem::path& path, std::unique_ptr<Normalizer> normalizer,
               std::string prompt = {});
  // Drains the queue before returning.
  ~ArchiveQueue();

  void Push(GameRecord record);
  // Blocks until every pushed record is on disk.
  void Flush();
  std::size_t written() const { return written_.load(); }

 private:
  void Run();

  ArchiveWriter writer_;
  std::unique_ptr<Normalizer> normalizer_;
  std::string prompt_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable drained_;
  std::deque<GameRecord> queue_;
  bool stop_ = false;
  std::size_t in_flight_ = 0;
  std::atomic<std::size_t> written_{0};
  std::thread thread_;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8765;  // 0 picks a free port
  std::filesystem::path archive = "games.jsonl";
  std::optional<std::filesystem::path> static_dir;
  // One token per line; blank lines and '#' comments ignored.
  std::optional<std::filesystem::path> allowlist;
  std::chrono::milliseconds idle_timeout = kDefaultIdleTimeout;
  std::optional<std::uint64_t> seed;  // random when unset
  GameConfig game;
  std::optional<Endpoint> normalizer;
  std::chrono::milliseconds normalizer_budget{2000};
};

std::set<std::string, std::less<>> LoadAllowlist(const std::filesystem::path& path);

// Sec-WebSocket-Accept for a client key.
std::string WebSocketAccept(std::string_view key);

// One port serves three things, chosen by the first bytes of a connection:
//   "<len>\n<json>" frames          raw session protocol
//   GET /ws with an Upgrade header  session protocol, one message per text frame
//   GET /health, GET /<file>        JSON counts, static assets
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  int port() const { return port_; }
  // Serves until Stop() or a SIGINT/SIGTERM when signals are installed.
  void Run();
  void Stop();
  void InstallSignalHandlers();
  Json Health() const;

 private:
  struct Connection;

  void Accept();
  void OnReadable(Connection& c);
  void OnBytes(Connection& c);
  void OnHttp(Connection& c, const std::string& request);
  void OnWebSocketBytes(Connection& c);
  void OnText(Connection& c, std::string_view text);
  void Deliver(std::vector<Outgoing> out);
  void Queue(Connection& c, std::string bytes);
  void Send(Connection& c, const SessionMessage& m);
  void Flush(Connection& c);
  void FlushAll();
  void Close(int fd);

  ServerOptions options_;
  std::unique_ptr<ArchiveQueue> archive_;
  std::unique_ptr<SessionManager> manager_;
  int listen_fd_ = -1;
  int port_ = 0;
  int wake_[2] = {-1, -1};
  std::atomic<bool> stop_{false};
  std::map<int, std::unique_ptr<Connection>> connections_;
  std::map<std::string, int, std::less<>> fd_of_token_;
};

}  // namespace duet::server

#endif  // DUET_SERVER_SERVER_H_
