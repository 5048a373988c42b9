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

#include "duet/rationale.h"

#include <algorithm>
#include <vector>

#include "duet/normalizer.h"

namespace duet {

std::string_view ToString(Relation r) {
  switch (r) {
    case Relation::kMeronym: return "MERONYM";
    case Relation::kHypernym: return "HYPERNYM";
    case Relation::kSynonym: return "SYNONYM";
    case Relation::kAntonym: return "ANTONYM";
    case Relation::kAdjective: return "ADJECTIVE";
    case Relation::kAgent: return "AGENT";
    case Relation::kCause: return "CAUSE";
    case Relation::kPatient: return "PATIENT";
    case Relation::kLocation: return "LOCATION";
  }
  return "?";
}

std::string_view Connective(Relation r) {
  switch (r) {
    case Relation::kMeronym: return "has";
    case Relation::kHypernym: return "is a kind of";
    case Relation::kSynonym: return "means the same thing as";
    case Relation::kAntonym: return "means the opposite of";
    case Relation::kAdjective: return "describes";
    case Relation::kAgent: return "does";
    case Relation::kCause: return "causes";
    case Relation::kPatient: return "acts on";
    case Relation::kLocation: return "has an environment";
  }
  return "";
}

std::string RenderRationale(Relation r, std::string_view x, std::string_view y) {
  std::string out(x);
  out += ' ';
  out += Connective(r);
  out += ' ';
  out += y;
  return out;
}

std::optional<Relation> ClassifyRationale(std::string_view text) {
  const std::string padded = " " + CleanText(text) + " ";
  std::vector<Relation> order(kAllRelations.begin(), kAllRelations.end());
  std::stable_sort(order.begin(), order.end(), [](Relation a, Relation b) {
    return Connective(a).size() > Connective(b).size();
  });
  for (Relation r : order)
    if (padded.find(" " + std::string(Connective(r)) + " ") != std::string::npos) return r;
  return std::nullopt;
}

}  // namespace duet
