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

#ifndef DUET_RATIONALE_H_
#define DUET_RATIONALE_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace duet {

// Relation categories from the rationale-writing instructions.
enum class Relation {
  kMeronym,     // x has y
  kHypernym,    // x is a kind of y
  kSynonym,     // x means the same thing as y
  kAntonym,     // x means the opposite of y
  kAdjective,   // x describes y
  kAgent,       // x does y
  kCause,       // x causes y
  kPatient,     // x acts on y
  kLocation,    // x has an environment y
};
inline constexpr std::array<Relation, 9> kAllRelations = {
    Relation::kMeronym,   Relation::kHypernym, Relation::kSynonym,
    Relation::kAntonym,   Relation::kAdjective, Relation::kAgent,
    Relation::kCause,     Relation::kPatient,  Relation::kLocation};

std::string_view ToString(Relation r);  // "MERONYM", ...
std::string_view Connective(Relation r);  // "has", "is a kind of", ...
std::string RenderRationale(Relation r, std::string_view x, std::string_view y);

// The relation whose connective appears in `text`, longest connective
// first; nullopt for free-form rationales.
std::optional<Relation> ClassifyRationale(std::string_view text);

}  // namespace duet

#endif  // DUET_RATIONALE_H_
