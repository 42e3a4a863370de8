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

#ifndef TOXCL_COMMON_TEXT_HPP_
#define TOXCL_COMMON_TEXT_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace toxcl::text {

// NFC, trim outer whitespace, collapse internal whitespace runs to one space.
// Invalid UTF-8 sequences are replaced by U+FFFD.
std::string normalize(std::string_view s);

// Full Unicode case folding applied to normalize(s).
std::string casefold(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);

std::string join(std::span<const std::string> parts, std::string_view sep);

// Lowercase + whitespace split, used by the n-gram metrics.
std::vector<std::string> metric_tokens(std::string_view s);

std::string trim(std::string_view s);

// 64-bit FNV-1a; stable across platforms, used for content-addressed paths
// and weight checksums.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t v);

}  // namespace toxcl::text

#endif  // TOXCL_COMMON_TEXT_HPP_
