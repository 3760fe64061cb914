/* Copyright 2026 The wozloc Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef WOZLOC_TEXT_HPP_
#define WOZLOC_TEXT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wozloc::text {

// One decoded code point with its byte position in the source string.
struct CodePoint {
  char32_t value;
  std::size_t offset;  // byte offset of the first byte
  std::size_t size;    // encoded length in bytes
};

std::vector<CodePoint> code_points(std::string_view s);
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

// Canonical composition (NFC). Input that is not valid UTF-8 is passed
// through unchanged.
std::string nfc(std::string_view s);

std::string trim(std::string_view s);

// NFC plus whitespace trimming; the normalization used for all slot-value
// comparisons. No case folding.
std::string normalize_value(std::string_view s);

bool is_ascii_space(char32_t cp);
bool is_space(char32_t cp);  // ASCII whitespace or U+3000

// Whitespace-run tokenizer; returns (start, end) byte spans of each token.
std::vector<std::pair<std::size_t, std::size_t>> token_spans(
    std::string_view s);

// Levenshtein distance over code points.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

struct NearMiss {
  std::size_t distance;
  std::string match;  // the closest substring found
};

// Minimum edit distance between `needle` and any substring of `haystack`,
// cut off above `cap`. Returns nullopt when no substring is within `cap`.
std::optional<NearMiss> min_substring_distance(std::string_view needle,
                                               std::string_view haystack,
                                               std::size_t cap);

// True when [start, end) does not split an ASCII alphanumeric run. Matches
// inside a larger word or number are rejected; CJK text has no such runs and
// always passes.
bool boundary_ok(std::string_view haystack, std::size_t start,
                 std::size_t end);

// All boundary-valid occurrences of `needle` in `haystack`, as byte offsets.
std::vector<std::size_t> find_occurrences(std::string_view haystack,
                                          std::string_view needle);

uint64_t fnv1a(std::string_view s);

}  // namespace wozloc::text

#endif  // WOZLOC_TEXT_HPP_
