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

#include "duet/normalizer.h"

#include <fstream>
#include <sstream>

#include "duet/error.h"
#include "duet/text.h"

#ifndef DUET_DATA_DIR
#define DUET_DATA_DIR "data"
#endif

namespace duet {
namespace {

void ReplaceAll(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

}  // namespace

std::string CleanText(std::string_view text) {
  std::vector<std::string_view> parts = SplitWhitespace(text);
  return ToLower(Join(parts, " "));
}

NormalizeResult NormalizeRationale(std::string_view raw, std::string_view clue,
                                   std::string_view target, Normalizer& normalizer,
                                   std::string_view prompt) {
  NormalizeRequest req{std::string(raw), std::string(clue), std::string(target),
                       std::string(prompt)};
  try {
    return {CleanText(normalizer.Normalize(req)), false};
  } catch (const EndpointError&) {
    return {CleanText(raw), true};
  }
}

std::string RenderPrompt(std::string_view prompt_template, std::string_view clue,
                         std::string_view target, std::string_view text) {
  std::string out(prompt_template);
  ReplaceAll(out, "{clue}", clue);
  ReplaceAll(out, "{target}", target);
  ReplaceAll(out, "{text}", text);
  return out;
}

std::string LoadPromptTemplate(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open prompt template " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::filesystem::path DefaultPromptPath() {
  return std::filesystem::path(DUET_DATA_DIR) / "normalize_prompt.txt";
}

}  // namespace duet
