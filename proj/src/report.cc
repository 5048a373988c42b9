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

#include "duet/report.h"

#include <algorithm>
#include <cstdio>

#include "duet/error.h"

namespace duet {
namespace {

std::string Cell(const ReportTable& t, const std::optional<double>& v) {
  if (!v) return "--";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", t.decimals, *v * t.display_scale);
  return buf;
}

}  // namespace

void ReportTable::AddRow(std::vector<std::string> labels, std::vector<std::optional<double>> values) {
  if (labels.size() != label_columns.size() || values.size() != value_columns.size())
    throw ValidationError("report row does not match the table columns");
  rows.push_back({std::move(labels), std::move(values)});
}

std::optional<double> ReportTable::At(const std::vector<std::string>& labels,
                                      std::string_view column) const {
  auto col = std::find(value_columns.begin(), value_columns.end(), column);
  if (col == value_columns.end()) return std::nullopt;
  for (const auto& r : rows)
    if (r.labels == labels) return r.values[col - value_columns.begin()];
  return std::nullopt;
}

std::string FormatText(const ReportTable& t) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header = t.label_columns;
  header.insert(header.end(), t.value_columns.begin(), t.value_columns.end());
  grid.push_back(header);
  for (const auto& r : t.rows) {
    std::vector<std::string> line = r.labels;
    for (const auto& v : r.values) line.push_back(Cell(t, v));
    grid.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : grid)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  std::string out = t.title + "\n";
  for (std::size_t li = 0; li < grid.size(); ++li) {
    const auto& line = grid[li];
    for (std::size_t i = 0; i < line.size(); ++i) {
      const bool label = i < t.label_columns.size();
      std::string pad(width[i] - line[i].size(), ' ');
      out += label ? line[i] + pad : pad + line[i];
      out += i + 1 < line.size() ? "  " : "\n";
    }
    if (li == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w + 2;
      out += std::string(total - 2, '-') + "\n";
    }
  }
  return out;
}

std::string FormatTsv(const ReportTable& t) {
  std::string out;
  std::vector<std::string> header = t.label_columns;
  header.insert(header.end(), t.value_columns.begin(), t.value_columns.end());
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "\t" : "") + header[i];
  out += "\n";
  for (const auto& r : t.rows) {
    bool first = true;
    for (const auto& l : r.labels) {
      out += (first ? "" : "\t") + l;
      first = false;
    }
    for (const auto& v : r.values) out += "\t" + Cell(t, v);
    out += "\n";
  }
  return out;
}

Json ToJson(const ReportTable& t) {
  Json j;
  j["title"] = t.title;
  j["label_columns"] = t.label_columns;
  j["value_columns"] = t.value_columns;
  j["display_scale"] = t.display_scale;
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json values = Json::array();
    for (const auto& v : r.values) values.push_back(v ? Json(*v) : Json(nullptr));
    rows.push_back({{"labels", r.labels}, {"values", std::move(values)}});
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string FormatText(const std::vector<ReportTable>& tables) {
  std::string out;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i) out += "\n";
    out += FormatText(tables[i]);
  }
  return out;
}

Json ToJson(const std::vector<ReportTable>& tables) {
  Json arr = Json::array();
  for (const auto& t : tables) arr.push_back(ToJson(t));
  return arr;
}

}  // namespace duet
