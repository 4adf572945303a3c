// Copyright 2026 The AoT Harness Authors
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

#ifndef AOT_STRINGS_H_
#define AOT_STRINGS_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace aot {

std::string_view Trim(std::string_view s);
std::string ToLower(std::string_view s);
std::vector<std::string_view> SplitLines(std::string_view s);
std::size_t CountOccurrences(std::string_view haystack, std::string_view needle);
// Number of maximal runs of non-whitespace characters.
std::size_t CountWhitespaceTokens(std::string_view s);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);
// Lowercase hex SHA-256 of `data`.
std::string Sha256Hex(std::string_view data);

}  // namespace aot

#endif  // AOT_STRINGS_H_
