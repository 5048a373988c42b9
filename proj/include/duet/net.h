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

#ifndef DUET_NET_H_
#define DUET_NET_H_

#include <atomic>
#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

namespace duet {

struct Endpoint {
  std::string host = "127.0.0.1";
  int port = 0;

  // "host:port" or ":port"; throws ValidationError.
  static Endpoint Parse(std::string_view text);
  std::string ToString() const;
};

// Thin POSIX helpers. All throw IoError (or EndpointError for connect and
// read failures against a remote peer).
int ListenTcp(const std::string& host, int port, int* bound_port = nullptr, int backlog = 64);
int ConnectTcp(const Endpoint& endpoint, std::chrono::milliseconds timeout);
void SetNonBlocking(int fd, bool on = true);
// Blocking write of every byte; false when the peer is gone.
bool WriteAll(int fd, std::string_view data);
void CloseFd(int& fd);

// Persistent newline-delimited connection.
class LineClient {
 public:
  LineClient(Endpoint endpoint, std::chrono::milliseconds connect_timeout);
  ~LineClient();
  LineClient(const LineClient&) = delete;
  LineClient& operator=(const LineClient&) = delete;

  void SendLine(std::string_view line);
  // Throws EndpointError on timeout or closed connection.
  std::string ReadLine(std::chrono::milliseconds timeout);
  const Endpoint& endpoint() const { return endpoint_; }

 private:
  void EnsureConnected();

  Endpoint endpoint_;
  std::chrono::milliseconds connect_timeout_;
  int fd_ = -1;
  std::string buffer_;
};

// Answers newline-delimited requests on a background thread. A handler
// returning nullopt sends nothing.
class LineServer {
 public:
  using Handler = std::function<std::optional<std::string>(const std::string&)>;

  explicit LineServer(Handler handler, int port = 0);
  ~LineServer();
  LineServer(const LineServer&) = delete;
  LineServer& operator=(const LineServer&) = delete;

  int port() const { return port_; }
  Endpoint endpoint() const { return {"127.0.0.1", port_}; }
  void Stop();

 private:
  void Run();

  Handler handler_;
  int listen_fd_ = -1;
  int port_ = 0;
  int wake_[2] = {-1, -1};
  std::atomic<bool> stop_{false};
  std::thread thread_;
};

}  // namespace duet

#endif  // DUET_NET_H_
