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

#ifndef DUET_REPORT_H_
#define DUET_REPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "duet/records.h"

namespace duet {

// A results grid: leading label columns (e.g. Priors, Model) followed by
// metric columns. Values are stored on the [0, 1] scale and multiplied by
// display_scale when printed; missing cells print as "--".
struct ReportTable {
  struct Row {
    std::vector<std::string> labels;
    std::vector<std::optional<double>> values;
  };

  std::string title;
  std::vector<std::string> label_columns;
  std::vector<std::string> value_columns;
  std::vector<Row> rows;
  double display_scale = 100.0;
  int decimals = 2;

  void AddRow(std::vector<std::string> labels, std::vector<std::optional<double>> values);
  // Cell by row labels and column name, nullopt if absent.
  std::optional<double> At(const std::vector<std::string>& labels, std::string_view column) const;
};

std::string FormatText(const ReportTable& table);
std::string FormatTsv(const ReportTable& table);
Json ToJson(const ReportTable& table);
std::string FormatText(const std::vector<ReportTable>& tables);
Json ToJson(const std::vector<ReportTable>& tables);

}  // namespace duet

#endif  // DUET_REPORT_H_
