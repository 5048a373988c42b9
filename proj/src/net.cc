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

#include "duet/net.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <csignal>
#include <cstring>
#include <vector>

#include "duet/error.h"

namespace duet {
namespace {

std::string Errno(std::string_view what) {
  return std::string(what) + ": " + std::strerror(errno);
}

struct IgnoreSigpipe {
  IgnoreSigpipe() { std::signal(SIGPIPE, SIG_IGN); }
};
const IgnoreSigpipe kIgnoreSigpipe;

}  // namespace

Endpoint Endpoint::Parse(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos)
    throw ValidationError("endpoint '" + std::string(text) + "' must be host:port");
  Endpoint e;
  if (colon > 0) e.host = std::string(text.substr(0, colon));
  std::string_view port = text.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), e.port);
  if (ec != std::errc() || ptr != port.data() + port.size() || e.port < 0 || e.port > 65535)
    throw ValidationError("endpoint '" + std::string(text) + "' has a bad port");
  return e;
}

std::string Endpoint::ToString() const { return host + ":" + std::to_string(port); }

int ListenTcp(const std::string& host, int port, int* bound_port, int backlog) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw IoError(Errno("socket"));
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (host.empty() || host == "0.0.0.0") {
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
  } else if (host == "localhost") {
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  } else if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    throw ValidationError("cannot listen on host '" + host + "'");
  }
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 ||
      ::listen(fd, backlog) < 0) {
    std::string msg = Errno("bind/listen on port " + std::to_string(port));
    ::close(fd);
    throw IoError(msg);
  }
  if (bound_port) {
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    *bound_port = ntohs(addr.sin_port);
  }
  return fd;
}

int ConnectTcp(const Endpoint& endpoint, std::chrono::milliseconds timeout) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  std::string port = std::to_string(endpoint.port);
  if (::getaddrinfo(endpoint.host.c_str(), port.c_str(), &hints, &res) != 0 || !res)
    throw EndpointError("cannot resolve " + endpoint.ToString());
  int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (fd < 0) {
    ::freeaddrinfo(res);
    throw IoError(Errno("socket"));
  }
  SetNonBlocking(fd, true);
  int rc = ::connect(fd, res->ai_addr, res->ai_addrlen);
  ::freeaddrinfo(res);
  if (rc < 0 && errno != EINPROGRESS) {
    ::close(fd);
    throw EndpointError("connect to " + endpoint.ToString() + " failed");
  }
  if (rc < 0) {
    pollfd p{fd, POLLOUT, 0};
    int ready = ::poll(&p, 1, static_cast<int>(timeout.count()));
    int err = 0;
    socklen_t len = sizeof err;
    if (ready > 0) ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
    if (ready <= 0 || err != 0) {
      ::close(fd);
      throw EndpointError("connect to " + endpoint.ToString() +
                          (ready == 0 ? " timed out" : " failed"));
    }
  }
  SetNonBlocking(fd, false);
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return fd;
}

void SetNonBlocking(int fd, bool on) {
  int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, on ? (flags | O_NONBLOCK) : (flags & ~O_NONBLOCK));
}

bool WriteAll(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == EAGAIN || errno == EWOULDBLOCK) {
        pollfd p{fd, POLLOUT, 0};
        ::poll(&p, 1, 1000);
        continue;
      }
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

void CloseFd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

LineClient::LineClient(Endpoint endpoint, std::chrono::milliseconds connect_timeout)
    : endpoint_(std::move(endpoint)), connect_timeout_(connect_timeout) {}

LineClient::~LineClient() { CloseFd(fd_); }

void LineClient::EnsureConnected() {
  if (fd_ < 0) {
    fd_ = ConnectTcp(endpoint_, connect_timeout_);
    buffer_.clear();
  }
}

void LineClient::SendLine(std::string_view line) {
  EnsureConnected();
  std::string out(line);
  out += '\n';
  if (!WriteAll(fd_, out)) {
    CloseFd(fd_);
    EnsureConnected();
    if (!WriteAll(fd_, out)) {
      CloseFd(fd_);
      throw EndpointError("write to " + endpoint_.ToString() + " failed");
    }
  }
}

std::string LineClient::ReadLine(std::chrono::milliseconds timeout) {
  if (fd_ < 0) throw EndpointError("not connected to " + endpoint_.ToString());
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      // A late reply would desynchronize request ids; start over.
      CloseFd(fd_);
      throw EndpointError("timed out waiting for " + endpoint_.ToString());
    }
    pollfd p{fd_, POLLIN, 0};
    int ready = ::poll(&p, 1, static_cast<int>(left.count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) continue;
    char buf[4096];
    ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
    if (n <= 0) {
      CloseFd(fd_);
      throw EndpointError("connection to " + endpoint_.ToString() + " closed");
    }
    buffer_.append(buf, static_cast<std::size_t>(n));
  }
}

LineServer::LineServer(Handler handler, int port) : handler_(std::move(handler)) {
  listen_fd_ = ListenTcp("127.0.0.1", port, &port_);
  if (::pipe(wake_) != 0) throw IoError(Errno("pipe"));
  thread_ = std::thread([this] { Run(); });
}

LineServer::~LineServer() { Stop(); }

void LineServer::Stop() {
  if (stop_.exchange(true)) return;
  char c = 0;
  [[maybe_unused]] auto w = ::write(wake_[1], &c, 1);
  if (thread_.joinable()) thread_.join();
  CloseFd(listen_fd_);
  CloseFd(wake_[0]);
  CloseFd(wake_[1]);
}

void LineServer::Run() {
  std::vector<pollfd> fds;
  std::vector<std::string> buffers;
  fds.push_back({wake_[0], POLLIN, 0});
  fds.push_back({listen_fd_, POLLIN, 0});
  buffers.resize(2);
  while (!stop_) {
    if (::poll(fds.data(), fds.size(), 200) < 0 && errno != EINTR) break;
    if (fds[0].revents) break;
    if (fds[1].revents & POLLIN) {
      int c = ::accept(listen_fd_, nullptr, nullptr);
      if (c >= 0) {
        fds.push_back({c, POLLIN, 0});
        buffers.emplace_back();
      }
    }
    for (std::size_t i = 2; i < fds.size(); ++i) {
      if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      char buf[4096];
      ssize_t n = ::recv(fds[i].fd, buf, sizeof buf, 0);
      if (n <= 0) {
        ::close(fds[i].fd);
        fds[i].fd = -1;
        continue;
      }
      buffers[i].append(buf, static_cast<std::size_t>(n));
      std::size_t nl;
      while ((nl = buffers[i].find('\n')) != std::string::npos) {
        std::string line = buffers[i].substr(0, nl);
        buffers[i].erase(0, nl + 1);
        if (auto reply = handler_(line)) WriteAll(fds[i].fd, *reply + "\n");
      }
    }
    for (std::size_t i = fds.size(); i-- > 2;)
      if (fds[i].fd < 0) {
        fds.erase(fds.begin() + static_cast<std::ptrdiff_t>(i));
        buffers.erase(buffers.begin() + static_cast<std::ptrdiff_t>(i));
      }
  }
  for (std::size_t i = 2; i < fds.size(); ++i)
    if (fds[i].fd >= 0) ::close(fds[i].fd);
}

}  // namespace duet
