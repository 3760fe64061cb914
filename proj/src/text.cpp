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

#include "wozloc/text.hpp"

#include <unicode/unorm2.h>
#include <unicode/ustring.h>

#include <algorithm>
#include <cctype>

namespace wozloc::text {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes one code point starting at s[i]; advances i past it. Invalid bytes
// decode to U+FFFD one byte at a time.
char32_t decode_one(std::string_view s, std::size_t& i) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return kReplacement;
  }
  if (i + len > s.size()) {
    ++i;
    return kReplacement;
  }
  for (int k = 1; k < len; ++k) {
    unsigned char b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return kReplacement;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += len;
  return cp;
}

}  // namespace

std::vector<CodePoint> code_points(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t start = i;
    char32_t cp = decode_one(s, i);
    out.push_back({cp, start, i - start});
  }
  return out;
}

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) out.push_back(decode_one(s, i));
  return out;
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size() * 3);
  for (char32_t cp : s) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::string nfc(std::string_view s) {
  if (s.empty()) return {};
  UErrorCode ec = U_ZERO_ERROR;
  const UNormalizer2* norm = unorm2_getNFCInstance(&ec);
  if (U_FAILURE(ec)) return std::string(s);

  std::vector<UChar> utf16(s.size() + 1);
  int32_t ulen = 0;
  ec = U_ZERO_ERROR;
  u_strFromUTF8(utf16.data(), static_cast<int32_t>(utf16.size()), &ulen,
                s.data(), static_cast<int32_t>(s.size()), &ec);
  if (U_FAILURE(ec)) return std::string(s);

  std::vector<UChar> normalized(static_cast<std::size_t>(ulen) * 3 + 16);
  ec = U_ZERO_ERROR;
  int32_t nlen =
      unorm2_normalize(norm, utf16.data(), ulen, normalized.data(),
                       static_cast<int32_t>(normalized.size()), &ec);
  if (U_FAILURE(ec)) return std::string(s);

  std::string out(static_cast<std::size_t>(nlen) * 3 + 16, '\0');
  int32_t olen = 0;
  ec = U_ZERO_ERROR;
  u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &olen,
              normalized.data(), nlen, &ec);
  if (U_FAILURE(ec)) return std::string(s);
  out.resize(static_cast<std::size_t>(olen));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string normalize_value(std::string_view s) { return nfc(trim(s)); }

bool is_ascii_space(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == U'\f' || cp == U'\v';
}

bool is_space(char32_t cp) { return is_ascii_space(cp) || cp == U'\x3000'; }

std::vector<std::pair<std::size_t, std::size_t>> token_spans(
    std::string_view s) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  auto cps = code_points(s);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i].value)) ++i;
    if (i >= cps.size()) break;
    std::size_t start = cps[i].offset;
    while (i < cps.size() && !is_space(cps[i].value)) ++i;
    std::size_t end =
        i < cps.size() ? cps[i].offset : cps.back().offset + cps.back().size;
    out.emplace_back(start, end);
  }
  return out;
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::size_t> prev(m + 1);
  std::vector<std::size_t> cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

std::optional<NearMiss> min_substring_distance(std::string_view needle,
                                               std::string_view haystack,
                                               std::size_t cap) {
  std::u32string n = decode_utf8(needle);
  auto hcps = code_points(haystack);
  std::u32string h;
  h.reserve(hcps.size());
  for (const auto& c : hcps) h.push_back(c.value);

  // Edit distance with free start position in the haystack: row 0 is all
  // zeros, so dp[i][j] is the best distance of needle[0..i) against any
  // haystack substring ending at j.
  const std::size_t n_len = n.size();
  const std::size_t h_len = h.size();
  std::vector<std::size_t> prev(h_len + 1, 0);
  std::vector<std::size_t> cur(h_len + 1, 0);
  for (std::size_t i = 1; i <= n_len; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= h_len; ++j) {
      std::size_t sub = prev[j - 1] + (n[i - 1] == h[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }

  std::size_t best = cap + 1;
  std::size_t best_end = 0;
  for (std::size_t j = 0; j <= h_len; ++j) {
    if (prev[j] < best) {
      best = prev[j];
      best_end = j;
    }
  }
  if (best > cap) return std::nullopt;

  // Recover a matching substring: try candidate start positions around the
  // needle length and keep the closest.
  std::size_t lo = best_end > n_len + best ? best_end - n_len - best : 0;
  std::size_t best_start = lo;
  std::size_t best_exact = best + 1;
  for (std::size_t st = lo; st <= best_end; ++st) {
    std::size_t d = edit_distance(n, std::u32string_view(h).substr(
                                         st, best_end - st));
    if (d < best_exact) {
      best_exact = d;
      best_start = st;
    }
  }
  std::size_t byte_start =
      best_start < hcps.size() ? hcps[best_start].offset : haystack.size();
  std::size_t byte_end =
      best_end < hcps.size() ? hcps[best_end].offset : haystack.size();
  return NearMiss{best,
                  std::string(haystack.substr(byte_start, byte_end - byte_start))};
}

namespace {
bool is_ascii_alnum(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}
}  // namespace

bool boundary_ok(std::string_view haystack, std::size_t start,
                 std::size_t end) {
  if (start > 0 && start < haystack.size() && is_ascii_alnum(haystack[start]) &&
      is_ascii_alnum(haystack[start - 1]))
    return false;
  if (end > 0 && end < haystack.size() && is_ascii_alnum(haystack[end - 1]) &&
      is_ascii_alnum(haystack[end]))
    return false;
  return true;
}

std::vector<std::size_t> find_occurrences(std::string_view haystack,
                                          std::string_view needle) {
  std::vector<std::size_t> out;
  if (needle.empty() || needle.size() > haystack.size()) return out;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string_view::npos) {
    if (boundary_ok(haystack, pos, pos + needle.size())) out.push_back(pos);
    ++pos;
  }
  return out;
}

uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64-bit offset basis
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;  // FNV 64-bit prime
  }
  return h;
}

}  // namespace wozloc::text
