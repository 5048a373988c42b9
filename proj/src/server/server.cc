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

#include "duet/server/server.h"

#include <fcntl.h>
#include <openssl/evp.h>
#include <openssl/sha.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "duet/agents.h"
#include "duet/error.h"
#include "duet/simulate.h"
#include "duet/text.h"

namespace duet::server {
namespace {

constexpr std::size_t kMaxHttpHeader = 16 * 1024;
constexpr std::string_view kWebSocketGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";

std::atomic<int> g_signal_fd{-1};

void OnSignal(int) {
  int fd = g_signal_fd.load();
  if (fd >= 0) {
    char b = 's';
    [[maybe_unused]] ssize_t n = ::write(fd, &b, 1);
  }
}

std::string_view ContentType(const std::filesystem::path& p) {
  auto ext = ToLower(p.extension().string());
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".txt") return "text/plain; charset=utf-8";
  return "application/octet-stream";
}

std::string HttpResponse(int code, std::string_view reason, std::string_view type,
                         std::string_view body) {
  std::ostringstream out;
  out << "HTTP/1.1 " << code << ' ' << reason << "\r\n"
      << "Content-Type: " << type << "\r\n"
      << "Content-Length: " << body.size() << "\r\n"
      << "Connection: close\r\n\r\n"
      << body;
  return out.str();
}

std::string WebSocketFrame(std::uint8_t opcode, std::string_view payload) {
  std::string f;
  f.push_back(static_cast<char>(0x80 | opcode));
  std::size_t n = payload.size();
  if (n < 126) {
    f.push_back(static_cast<char>(n));
  } else if (n <= 0xffff) {
    f.push_back(126);
    f.push_back(static_cast<char>(n >> 8));
    f.push_back(static_cast<char>(n & 0xff));
  } else {
    f.push_back(127);
    for (int i = 7; i >= 0; --i) f.push_back(static_cast<char>((n >> (8 * i)) & 0xff));
  }
  f.append(payload);
  return f;
}

}  // namespace

ArchiveQueue::ArchiveQueue(const std::filesystem::path& path,
                           std::unique_ptr<Normalizer> normalizer, std::string prompt)
    : writer_(path),
      normalizer_(normalizer ? std::move(normalizer) : std::make_unique<IdentityNormalizer>()),
      prompt_(std::move(prompt)),
      thread_([this] { Run(); }) {}

ArchiveQueue::~ArchiveQueue() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  thread_.join();
}

void ArchiveQueue::Push(GameRecord record) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    queue_.push_back(std::move(record));
  }
  cv_.notify_one();
}

void ArchiveQueue::Flush() {
  std::unique_lock<std::mutex> lock(mu_);
  drained_.wait(lock, [&] { return queue_.empty() && in_flight_ == 0; });
}

void ArchiveQueue::Run() {
  for (;;) {
    GameRecord record;
    {
      std::unique_lock<std::mutex> lock(mu_);
      cv_.wait(lock, [&] { return stop_ || !queue_.empty(); });
      if (queue_.empty()) return;
      record = std::move(queue_.front());
      queue_.pop_front();
      ++in_flight_;
    }
    NormalizeRecord(record, *normalizer_, prompt_);
    writer_.Append(record);
    ++written_;
    {
      std::lock_guard<std::mutex> lock(mu_);
      --in_flight_;
    }
    drained_.notify_all();
  }
}

std::set<std::string, std::less<>> LoadAllowlist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open allowlist " + path.string());
  std::set<std::string, std::less<>> tokens;
  std::string line;
  while (std::getline(in, line)) {
    auto t = Trim(line);
    if (t.empty() || t.front() == '#') continue;
    tokens.emplace(t);
  }
  return tokens;
}

std::string WebSocketAccept(std::string_view key) {
  std::string input = std::string(key) + std::string(kWebSocketGuid);
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(input.data()), input.size(), digest);
  unsigned char encoded[4 * ((SHA_DIGEST_LENGTH + 2) / 3) + 1];
  int n = EVP_EncodeBlock(encoded, digest, SHA_DIGEST_LENGTH);
  return std::string(reinterpret_cast<char*>(encoded), static_cast<std::size_t>(n));
}

enum class Mode { kUnknown, kFramed, kHttp, kWebSocket };

struct Server::Connection {
  int fd = -1;
  Mode mode = Mode::kUnknown;
  std::string in;
  std::string out;
  FrameDecoder decoder;
  std::string fragments;
  std::string token;
  bool close_after_flush = false;
};

Server::Server(ServerOptions options) : options_(std::move(options)) {
  std::unique_ptr<Normalizer> normalizer;
  std::string prompt;
  if (options_.normalizer) {
    normalizer = std::make_unique<ExternalNormalizer>(*options_.normalizer,
                                                      options_.normalizer_budget);
    if (std::filesystem::exists(DefaultPromptPath()))
      prompt = LoadPromptTemplate(DefaultPromptPath());
  }
  archive_ = std::make_unique<ArchiveQueue>(options_.archive, std::move(normalizer), prompt);

  SessionConfig config;
  config.seed = options_.seed ? *options_.seed
                              : (std::uint64_t{std::random_device{}()} << 32) ^
                                    std::random_device{}();
  config.game = options_.game;
  config.idle_timeout = options_.idle_timeout;
  if (options_.allowlist) {
    auto tokens = std::make_shared<std::set<std::string, std::less<>>>(
        LoadAllowlist(*options_.allowlist));
    config.allowlist = [tokens](const std::string& t) { return tokens->count(t) > 0; };
  }
  manager_ = std::make_unique<SessionManager>(
      std::move(config), [this](GameRecord r) { archive_->Push(std::move(r)); });

  listen_fd_ = ListenTcp(options_.host, options_.port, &port_);
  SetNonBlocking(listen_fd_);
  if (::pipe(wake_) != 0) throw IoError("pipe failed");
  SetNonBlocking(wake_[0]);
  SetNonBlocking(wake_[1]);
}

Server::~Server() {
  if (g_signal_fd.load() == wake_[1]) g_signal_fd = -1;
  for (auto& [fd, c] : connections_) {
    int f = fd;
    CloseFd(f);
  }
  connections_.clear();
  CloseFd(listen_fd_);
  CloseFd(wake_[0]);
  CloseFd(wake_[1]);
  archive_.reset();
}

void Server::InstallSignalHandlers() {
  g_signal_fd = wake_[1];
  struct sigaction sa {};
  sa.sa_handler = OnSignal;
  sigemptyset(&sa.sa_mask);
  ::sigaction(SIGINT, &sa, nullptr);
  ::sigaction(SIGTERM, &sa, nullptr);
}

void Server::Stop() {
  stop_ = true;
  char b = 'x';
  [[maybe_unused]] ssize_t n = ::write(wake_[1], &b, 1);
}

Json Server::Health() const {
  ManagerCounts c = manager_->counts();
  Json j;
  j["status"] = "ok";
  j["sessions"] = c.sessions;
  j["waiting"] = c.waiting;
  j["surveyed"] = c.surveyed;
  j["connections"] = connections_.size();
  j["persisted"] = c.persisted;
  j["archived"] = archive_->written();
  j["abandoned_dropped"] = c.abandoned_dropped;
  return j;
}

void Server::Run() {
  while (!stop_) {
    std::vector<pollfd> fds;
    fds.push_back({listen_fd_, POLLIN, 0});
    fds.push_back({wake_[0], POLLIN, 0});
    for (auto& [fd, c] : connections_)
      fds.push_back({fd, static_cast<short>(POLLIN | (c->out.empty() ? 0 : POLLOUT)), 0});
    int rc = ::poll(fds.data(), fds.size(), 200);
    if (rc < 0 && errno != EINTR) throw IoError(std::string("poll: ") + std::strerror(errno));
    if (rc > 0) {
      if (fds[1].revents & POLLIN) {
        char buf[64];
        while (::read(wake_[0], buf, sizeof buf) > 0) {
        }
        if (g_signal_fd.load() == wake_[1]) stop_ = true;
      }
      if (fds[0].revents & POLLIN) Accept();
      for (std::size_t i = 2; i < fds.size(); ++i) {
        auto it = connections_.find(fds[i].fd);
        if (it == connections_.end()) continue;
        if (fds[i].revents & (POLLIN | POLLHUP | POLLERR)) OnReadable(*it->second);
        it = connections_.find(fds[i].fd);
        if (it != connections_.end() && (fds[i].revents & POLLOUT)) Flush(*it->second);
      }
    }
    Deliver(manager_->Tick(Clock::now()));
    FlushAll();
  }
  FlushAll();
  archive_->Flush();
}

void Server::Accept() {
  for (;;) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) return;
    SetNonBlocking(fd);
    auto c = std::make_unique<Connection>();
    c->fd = fd;
    connections_[fd] = std::move(c);
  }
}

void Server::OnReadable(Connection& c) {
  char buf[16384];
  for (;;) {
    ssize_t n = ::recv(c.fd, buf, sizeof buf, 0);
    if (n > 0) {
      c.in.append(buf, static_cast<std::size_t>(n));
      continue;
    }
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) break;
    if (n < 0 && errno == EINTR) continue;
    Close(c.fd);
    return;
  }
  OnBytes(c);
}

void Server::OnBytes(Connection& c) {
  int fd = c.fd;
  if (c.mode == Mode::kUnknown && !c.in.empty()) {
    char first = c.in.front();
    if (first >= '0' && first <= '9') {
      c.mode = Mode::kFramed;
    } else if (first >= 'A' && first <= 'Z') {
      c.mode = Mode::kHttp;
    } else {
      Close(fd);
      return;
    }
  }
  if (c.mode == Mode::kFramed) {
    std::vector<std::string> frames;
    try {
      frames = c.decoder.Feed(c.in);
    } catch (const ParseError& e) {
      SessionMessage err;
      err.payload = {{"reason", e.what()}};
      Send(c, err);
      c.close_after_flush = true;
      return;
    }
    c.in.clear();
    for (const auto& f : frames) {
      OnText(c, f);
      if (!connections_.count(fd)) return;
    }
  } else if (c.mode == Mode::kHttp) {
    auto end = c.in.find("\r\n\r\n");
    if (end == std::string::npos) {
      if (c.in.size() > kMaxHttpHeader) Close(fd);
      return;
    }
    std::string request = c.in.substr(0, end);
    c.in.erase(0, end + 4);
    OnHttp(c, request);
  } else if (c.mode == Mode::kWebSocket) {
    OnWebSocketBytes(c);
  }
}

void Server::OnHttp(Connection& c, const std::string& request) {
  std::istringstream lines(request);
  std::string line;
  std::getline(lines, line);
  std::istringstream first(line);
  std::string method, target, version;
  first >> method >> target >> version;
  std::map<std::string, std::string> headers;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    headers[ToLower(Trim(line.substr(0, colon)))] = std::string(Trim(line.substr(colon + 1)));
  }
  std::string path = target.substr(0, target.find('?'));

  if (method != "GET") {
    Queue(c, HttpResponse(405, "Method Not Allowed", "text/plain", "GET only\n"));
  } else if (path == "/health") {
    Queue(c, HttpResponse(200, "OK", "application/json", Health().dump() + "\n"));
  } else if (ToLower(headers["upgrade"]) == "websocket" && headers.count("sec-websocket-key")) {
    c.mode = Mode::kWebSocket;
    Queue(c, "HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
             "Sec-WebSocket-Accept: " +
                 WebSocketAccept(headers["sec-websocket-key"]) + "\r\n\r\n");
    if (!c.in.empty()) OnWebSocketBytes(c);
    return;
  } else if (!options_.static_dir) {
    Queue(c, HttpResponse(404, "Not Found", "text/plain", "not found\n"));
  } else {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::path root = fs::weakly_canonical(*options_.static_dir, ec);
    fs::path rel = path == "/" ? fs::path("index.html") : fs::path(path.substr(1));
    fs::path file = fs::weakly_canonical(root / rel, ec);
    auto [r, f] = std::mismatch(root.begin(), root.end(), file.begin(), file.end());
    std::ifstream in;
    if (!ec && r == root.end() && fs::is_regular_file(file, ec)) in.open(file, std::ios::binary);
    if (in.is_open() && in) {
      std::ostringstream body;
      body << in.rdbuf();
      Queue(c, HttpResponse(200, "OK", ContentType(file), body.str()));
    } else {
      Queue(c, HttpResponse(404, "Not Found", "text/plain", "not found\n"));
    }
  }
  c.close_after_flush = true;
}

void Server::OnWebSocketBytes(Connection& c) {
  int fd = c.fd;
  for (;;) {
    const auto* b = reinterpret_cast<const unsigned char*>(c.in.data());
    std::size_t have = c.in.size();
    if (have < 2) return;
    bool fin = b[0] & 0x80;
    std::uint8_t opcode = b[0] & 0x0f;
    bool masked = b[1] & 0x80;
    std::uint64_t len = b[1] & 0x7f;
    std::size_t pos = 2;
    if (len == 126) {
      if (have < 4) return;
      len = (std::uint64_t{b[2]} << 8) | b[3];
      pos = 4;
    } else if (len == 127) {
      if (have < 10) return;
      len = 0;
      for (int i = 0; i < 8; ++i) len = (len << 8) | b[2 + i];
      pos = 10;
    }
    if (len > kMaxFrameBytes || !masked) {
      Queue(c, WebSocketFrame(0x8, ""));
      c.close_after_flush = true;
      return;
    }
    if (have < pos + 4 + len) return;
    const unsigned char* mask = b + pos;
    pos += 4;
    std::string payload(len, '\0');
    for (std::size_t i = 0; i < len; ++i)
      payload[i] = static_cast<char>(b[pos + i] ^ mask[i % 4]);
    c.in.erase(0, pos + len);

    if (opcode == 0x8) {
      Queue(c, WebSocketFrame(0x8, ""));
      c.close_after_flush = true;
      return;
    }
    if (opcode == 0x9) {
      Queue(c, WebSocketFrame(0xA, payload));
      continue;
    }
    if (opcode == 0xA) continue;
    c.fragments += payload;
    if (c.fragments.size() > kMaxFrameBytes) {
      Close(fd);
      return;
    }
    if (!fin) continue;
    std::string text = std::move(c.fragments);
    c.fragments.clear();
    OnText(c, text);
    if (!connections_.count(fd)) return;
  }
}

void Server::OnText(Connection& c, std::string_view text) {
  SessionMessage in;
  try {
    in = ParseMessage(text);
  } catch (const ParseError& e) {
    SessionMessage err;
    err.payload = {{"reason", e.what()}};
    Send(c, err);
    return;
  }
  if (IsValidToken(in.token)) {
    if (!c.token.empty() && c.token != in.token) {
      SessionMessage err;
      err.token = in.token;
      err.payload = {{"reason", "connection is bound to another token"}};
      Send(c, err);
      return;
    }
    c.token = in.token;
    fd_of_token_[in.token] = c.fd;
  }
  auto out = manager_->Handle(in, Clock::now());
  if (!IsValidToken(in.token)) {
    for (auto& o : out) Send(c, o.message);
    return;
  }
  Deliver(std::move(out));
}

void Server::Deliver(std::vector<Outgoing> out) {
  for (auto& o : out) {
    auto it = fd_of_token_.find(o.token);
    if (it == fd_of_token_.end()) continue;
    auto c = connections_.find(it->second);
    if (c == connections_.end()) continue;
    Send(*c->second, o.message);
  }
}

void Server::Send(Connection& c, const SessionMessage& m) {
  if (c.mode == Mode::kWebSocket) {
    Queue(c, WebSocketFrame(0x1, SerializeMessage(m)));
  } else {
    Queue(c, FrameMessage(m));
  }
}

void Server::FlushAll() {
  std::vector<int> fds;
  for (const auto& [fd, c] : connections_)
    if (!c->out.empty() || c->close_after_flush) fds.push_back(fd);
  for (int fd : fds) {
    auto it = connections_.find(fd);
    if (it != connections_.end()) Flush(*it->second);
  }
}

void Server::Queue(Connection& c, std::string bytes) { c.out += bytes; }

void Server::Flush(Connection& c) {
  while (!c.out.empty()) {
    ssize_t n = ::send(c.fd, c.out.data(), c.out.size(), MSG_NOSIGNAL);
    if (n > 0) {
      c.out.erase(0, static_cast<std::size_t>(n));
      continue;
    }
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) return;
    if (n < 0 && errno == EINTR) continue;
    Close(c.fd);
    return;
  }
  if (c.close_after_flush) Close(c.fd);
}

void Server::Close(int fd) {
  auto it = connections_.find(fd);
  if (it == connections_.end()) return;
  const std::string& token = it->second->token;
  if (!token.empty()) {
    auto t = fd_of_token_.find(token);
    if (t != fd_of_token_.end() && t->second == fd) fd_of_token_.erase(t);
  }
  int f = fd;
  CloseFd(f);
  connections_.erase(it);
}

}  // namespace duet::server
