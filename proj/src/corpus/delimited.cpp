// Copyright 2026 The ToXCL Authors.
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

#include "corpus/delimited.hpp"

#include "common/error.hpp"
#include "common/text.hpp"

namespace toxcl::corpus {
namespace {

// Reads one record; returns false at end of input.
bool read_record(std::istream& in, char delim, std::vector<std::string>& out) {
  out.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  int ch;
  while ((ch = in.get()) != EOF) {
    any = true;
    char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
    } else if (c == delim) {
      out.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      out.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) fail(ErrorCode::kParse, "unterminated quoted field");
  if (!any) return false;
  if (!field.empty() && field.back() == '\r') field.pop_back();
  out.push_back(std::move(field));
  return true;
}

}  // namespace

DelimitedTable DelimitedTable::read(std::istream& in, char delimiter) {
  DelimitedTable t;
  std::vector<std::string> record;
  if (!read_record(in, delimiter, record)) return t;
  for (auto& h : record) t.header_.push_back(text::trim(h));
  if (!t.header_.empty() && t.header_[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    t.header_[0].erase(0, 3);
  }
  while (read_record(in, delimiter, record)) {
    if (record.size() == 1 && record[0].empty()) continue;
    t.rows_.push_back(record);
  }
  return t;
}

std::optional<std::size_t> DelimitedTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> DelimitedTable::column_any(
    std::initializer_list<std::string_view> names) const {
  for (auto n : names) {
    if (auto c = column(n)) return c;
  }
  return std::nullopt;
}

}  // namespace toxcl::corpus
