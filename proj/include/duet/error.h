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

#ifndef DUET_ERROR_H_
#define DUET_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace duet {

// Base of every error the library throws. The CLI maps the subclasses onto
// process exit codes (see ExitCodeFor).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied something that violates a documented precondition or
// value range.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed input text. `position` is a 1-based line number or a 0-based
// byte offset depending on the format; the message says which.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// A game action the rules do not allow in the current state.
class RuleViolation : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Remote agent / normalizer unreachable, timed out, or answered garbage.
class EndpointError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitEndpoint = 3;

inline int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const EndpointError*>(&e)) return kExitEndpoint;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  return kExitValidation;
}

}  // namespace duet

#endif  // DUET_ERROR_H_
