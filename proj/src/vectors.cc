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

#include "duet/vectors.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "duet/error.h"
#include "duet/kernels.h"
#include "duet/text.h"

namespace duet {
namespace {

double CosineFrom(double dot, double n1, double n2) {
  if (n1 <= 0.0 || n2 <= 0.0) return 0.0;
  return dot / (std::sqrt(n1) * std::sqrt(n2));
}

bool ParseFloat(std::string_view s, float& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

void VectorStore::Add(std::string_view word, std::span<const float> values) {
  if (values.size() != dim_)
    throw ValidationError("vector for '" + std::string(word) + "' has width " +
                          std::to_string(values.size()) + ", expected " + std::to_string(dim_));
  std::string key = ToLower(word);
  double norm = kernels::DotF32(values.data(), values.data(), dim_);
  auto it = index_.find(key);
  if (it != index_.end()) {
    warnings_.push_back("duplicate vector for '" + key + "'; keeping the last one");
    std::copy(values.begin(), values.end(), data_.begin() + it->second * dim_);
    norms_[it->second] = norm;
    return;
  }
  index_.emplace(key, words_.size());
  words_.push_back(std::move(key));
  data_.insert(data_.end(), values.begin(), values.end());
  norms_.push_back(norm);
}

std::optional<std::size_t> VectorStore::Find(std::string_view word) const {
  auto it = index_.find(ToLower(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double VectorStore::CosineAt(std::size_t a, std::size_t b) const {
  if (a == b) return norms_[a] > 0.0 ? 1.0 : 0.0;
  double dot = kernels::DotF32(data_.data() + a * dim_, data_.data() + b * dim_, dim_);
  return CosineFrom(dot, norms_[a], norms_[b]);
}

double VectorStore::Cosine(std::string_view a, std::string_view b) const {
  auto ia = Find(a);
  auto ib = Find(b);
  if (!ia || !ib) return 0.0;
  return CosineAt(*ia, *ib);
}

double Cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw ValidationError("cosine of vectors with different widths");
  double dot = kernels::DotF32(a.data(), b.data(), a.size());
  return CosineFrom(dot, kernels::DotF32(a.data(), a.data(), a.size()),
                    kernels::DotF32(b.data(), b.data(), b.size()));
}

VectorStore ParseVectors(std::string_view text) {
  std::vector<std::string_view> lines = SplitLines(text);
  std::size_t line_no = 0;
  while (line_no < lines.size() && Trim(lines[line_no]).empty()) ++line_no;
  if (line_no == lines.size()) throw ParseError("vector file is empty", 1);
  std::vector<std::string_view> header = SplitWhitespace(lines[line_no]);
  std::size_t count = 0, dim = 0;
  auto parse_size = [](std::string_view s, std::size_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  };
  if (header.size() != 2 || !parse_size(header[0], count) || !parse_size(header[1], dim) ||
      dim == 0)
    throw ParseError("line " + std::to_string(line_no + 1) +
                         ": header must be \"count dimension\"",
                     line_no + 1);
  VectorStore store(dim);
  std::vector<float> row(dim);
  std::size_t rows = 0;
  for (++line_no; line_no < lines.size(); ++line_no) {
    std::vector<std::string_view> parts = SplitWhitespace(lines[line_no]);
    if (parts.empty()) continue;
    const std::string where = "line " + std::to_string(line_no + 1);
    if (parts.size() != dim + 1)
      throw ParseError(where + ": expected " + std::to_string(dim) + " values, found " +
                           std::to_string(parts.size() - 1),
                       line_no + 1);
    for (std::size_t i = 0; i < dim; ++i)
      if (!ParseFloat(parts[i + 1], row[i]))
        throw ParseError(where + ": bad number '" + std::string(parts[i + 1]) + "'",
                         line_no + 1);
    store.Add(parts[0], row);
    ++rows;
  }
  if (rows != count)
    throw ParseError("header promises " + std::to_string(count) + " rows, found " +
                         std::to_string(rows),
                     lines.size());
  return store;
}

VectorStore LoadVectors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vectors " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseVectors(buffer.str());
}

std::string FormatVectors(const VectorStore& store) {
  std::string out = std::to_string(store.size()) + " " + std::to_string(store.dimension()) + "\n";
  char buf[32];
  for (std::size_t i = 0; i < store.size(); ++i) {
    out += store.words()[i];
    for (float v : store.Row(i)) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
      out += ' ';
      out.append(buf, ptr);
    }
    out += '\n';
  }
  return out;
}

}  // namespace duet
