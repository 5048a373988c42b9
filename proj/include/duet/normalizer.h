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

#ifndef DUET_NORMALIZER_H_
#define DUET_NORMALIZER_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace duet {

struct NormalizeRequest {
  std::string raw;
  std::string clue;
  std::string target;
  // Few-shot prompt template with {clue}, {target} and {text} slots; only
  // meaningful to external normalizers.
  std::string prompt;
};

class Normalizer {
 public:
  virtual ~Normalizer() = default;
  // May throw EndpointError.
  virtual std::string Normalize(const NormalizeRequest& request) = 0;
};

// Lowercase, trim, collapse whitespace runs to a single space.
std::string CleanText(std::string_view text);

class IdentityNormalizer : public Normalizer {
 public:
  std::string Normalize(const NormalizeRequest& request) override {
    return CleanText(request.raw);
  }
};

struct NormalizeResult {
  std::string text;
  bool fallback = false;  // normalizer failed; identity cleanup used
};

// Never throws for endpoint failures: falls back to CleanText and flags it.
NormalizeResult NormalizeRationale(std::string_view raw, std::string_view clue,
                                   std::string_view target, Normalizer& normalizer,
                                   std::string_view prompt = {});

// Fills the {clue}, {target} and {text} slots of a prompt template.
std::string RenderPrompt(std::string_view prompt_template, std::string_view clue,
                         std::string_view target, std::string_view text);

std::string LoadPromptTemplate(const std::filesystem::path& path);
// data/normalize_prompt.txt from the source tree.
std::filesystem::path DefaultPromptPath();

}  // namespace duet

#endif  // DUET_NORMALIZER_H_
