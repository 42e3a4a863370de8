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

#ifndef TOXCL_CORPUS_DELIMITED_HPP_
#define TOXCL_CORPUS_DELIMITED_HPP_

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace toxcl::corpus {

// RFC 4180 style reader: quoted fields may contain the delimiter, newlines
// and doubled quotes. The first record is the header.
class DelimitedTable {
 public:
  static DelimitedTable read(std::istream& in, char delimiter);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  std::optional<std::size_t> column(std::string_view name) const;
  // First column present among the candidates.
  std::optional<std::size_t> column_any(std::initializer_list<std::string_view> names) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace toxcl::corpus

#endif  // TOXCL_CORPUS_DELIMITED_HPP_
