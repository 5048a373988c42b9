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

#ifndef DUET_TEXT_H_
#define DUET_TEXT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by the parsers and encoders.
namespace duet {

std::string_view Trim(std::string_view s);
std::string ToLower(std::string_view s);

// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> SplitLines(std::string_view text);
std::vector<std::string_view> Split(std::string_view s, char sep);
// Splits on runs of ASCII whitespace; no empty pieces.
std::vector<std::string_view> SplitWhitespace(std::string_view s);

std::string Join(std::span<const std::string> parts, std::string_view sep);
std::string Join(std::span<const std::string_view> parts, std::string_view sep);

// Non-empty and entirely [a-z].
bool IsLowerAlpha(std::string_view s);

}  // namespace duet

#endif  // DUET_TEXT_H_
