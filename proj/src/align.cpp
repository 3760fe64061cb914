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

#include "wozloc/align.hpp"

#include <algorithm>
#include <cctype>

#include "wozloc/errors.hpp"
#include "wozloc/text.hpp"

namespace wozloc {

namespace {

bool overlaps(std::size_t a_start, std::size_t a_end, std::size_t b_start,
              std::size_t b_end) {
  return a_start < b_end && b_start < a_end;
}

}  // namespace

void check_attention(const AttentionMatrix& attn, const TokenOffsets& src_toks,
                     const TokenOffsets& tgt_toks) {
  if (attn.size() != tgt_toks.size())
    throw ValidationError("attention rows (" + std::to_string(attn.size()) +
                          ") do not match target token count (" +
                          std::to_string(tgt_toks.size()) + ")");
  for (const auto& row : attn) {
    if (row.size() != src_toks.size())
      throw ValidationError("attention row width (" +
                            std::to_string(row.size()) +
                            ") does not match source token count (" +
                            std::to_string(src_toks.size()) + ")");
    for (double w : row)
      if (w < 0.0) throw ValidationError("negative attention weight");
  }
}

std::vector<CharSpan> detect_entity_spans(std::string_view utterance,
                                          const BeliefState& state) {
  std::string normalized = text::nfc(std::string(utterance));

  // Candidate occurrences of every Regular value, gathered longest-first so
  // nested names ("new street" inside "birmingham new street") lose to the
  // full name, then leftmost-first.
  struct Candidate {
    std::size_t start;
    std::size_t end;
    SlotId slot;
    std::string value;
  };
  std::vector<Candidate> candidates;
  for (const auto& [id, value] : state) {
    if (value.kind != SlotValue::Kind::Regular) continue;
    std::string needle = text::normalize_value(value.text);
    if (needle.empty()) continue;
    for (std::size_t pos : text::find_occurrences(normalized, needle))
      candidates.push_back({pos, pos + needle.size(), id, needle});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              std::size_t alen = a.end - a.start;
              std::size_t blen = b.end - b.start;
              if (alen != blen) return alen > blen;
              if (a.start != b.start) return a.start < b.start;
              return std::tie(a.slot.domain, a.slot.slot) <
                     std::tie(b.slot.domain, b.slot.slot);
            });

  std::vector<CharSpan> chosen;
  std::vector<SlotId> placed;
  for (const auto& c : candidates) {
    // One span per slot; skip overlaps with already accepted spans.
    if (std::find(placed.begin(), placed.end(), c.slot) != placed.end())
      continue;
    bool clash = false;
    for (const auto& s : chosen)
      if (overlaps(c.start, c.end, s.start, s.end)) {
        clash = true;
        break;
      }
    if (clash) continue;
    chosen.push_back({c.start, c.end, c.slot, c.value});
    placed.push_back(c.slot);
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const CharSpan& a, const CharSpan& b) { return a.start < b.start; });
  return chosen;
}

std::vector<Sentence> split_sentences(std::string_view input) {
  std::vector<Sentence> out;
  if (input.empty()) return out;

  auto cps = text::code_points(input);
  auto is_delim = [](char32_t c) {
    return c == U'.' || c == U'!' || c == U'?' || c == U'。' || c == U'！' ||
           c == U'？' || c == U'；';
  };

  std::size_t sentence_start = 0;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (!is_delim(cps[i].value)) continue;
    bool at_end = i + 1 == cps.size();
    if (!at_end && !text::is_space(cps[i + 1].value)) continue;
    // Cut after the delimiter plus any following whitespace, so the pieces
    // tile the input exactly.
    std::size_t j = i + 1;
    while (j < cps.size() && text::is_space(cps[j].value)) ++j;
    std::size_t cut = j < cps.size() ? cps[j].offset : input.size();
    if (j < cps.size()) {
      out.push_back({std::string(input.substr(sentence_start,
                                              cut - sentence_start)),
                     sentence_start});
      sentence_start = cut;
      i = j - 1;
    }
  }
  out.push_back({std::string(input.substr(sentence_start)), sentence_start});
  return out;
}

std::size_t StrippedText::to_original_start(std::size_t cleaned) const {
  std::size_t shift = 0;
  for (const auto& [pos, len] : removed_) {
    if (pos <= cleaned)
      shift += len;
    else
      break;
  }
  return cleaned + shift;
}

std::size_t StrippedText::to_original_end(std::size_t cleaned) const {
  std::size_t shift = 0;
  for (const auto& [pos, len] : removed_) {
    if (pos < cleaned)
      shift += len;
    else
      break;
  }
  return cleaned + shift;
}

std::size_t StrippedText::to_cleaned(std::size_t original) const {
  std::size_t shift = 0;
  for (const auto& [pos, len] : removed_) {
    std::size_t original_pos = pos + shift;
    if (original_pos >= original) break;
    if (original < original_pos + len) return pos;  // inside the removed mark
    shift += len;
  }
  return original - shift;
}

StrippedText strip_quotes(std::string_view input) {
  auto is_quote = [](char32_t c) {
    return c == U'"' || c == U'“' || c == U'”' || c == U'‘' || c == U'’' ||
           c == U'「' || c == U'」';
  };
  std::string cleaned;
  cleaned.reserve(input.size());
  std::vector<std::pair<std::size_t, std::size_t>> removed;
  for (const auto& cp : text::code_points(input)) {
    if (is_quote(cp.value)) {
      removed.emplace_back(cleaned.size(), cp.size);
    } else {
      cleaned.append(input.substr(cp.offset, cp.size));
    }
  }
  return StrippedText(std::move(cleaned), std::move(removed));
}

CharSpan align_span(const CharSpan& src_span, const TokenOffsets& src_toks,
                    const TokenOffsets& tgt_toks, const AttentionMatrix& attn,
                    const AlignmentConfig& cfg) {
  check_attention(attn, src_toks, tgt_toks);
  if (cfg.extension_threshold <= 0.0 || cfg.extension_threshold > 1.0)
    throw ValidationError("extension threshold must be in (0, 1]");

  std::vector<std::size_t> source_subwords;
  for (std::size_t s = 0; s < src_toks.size(); ++s)
    if (overlaps(src_span.start, src_span.end, src_toks[s].first,
                 src_toks[s].second))
      source_subwords.push_back(s);
  if (source_subwords.empty())
    throw AlignmentFailure("span '" + src_span.value +
                           "' overlaps no source subword");
  if (tgt_toks.empty())
    throw AlignmentFailure("empty target token sequence");

  std::vector<double> score(tgt_toks.size(), 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < tgt_toks.size(); ++j) {
    for (std::size_t s : source_subwords) score[j] += attn[j][s];
    total += score[j];
  }
  if (total <= 0.0)
    throw AlignmentFailure("zero attention mass for span '" + src_span.value +
                           "'");

  std::size_t peak = 0;
  for (std::size_t j = 1; j < score.size(); ++j)
    if (score[j] > score[peak]) peak = j;  // ties keep the smaller index

  const double floor = cfg.extension_threshold * score[peak];
  std::size_t lo = peak;
  while (lo > 0 && score[lo - 1] >= floor) --lo;
  std::size_t hi = peak;
  while (hi + 1 < score.size() && score[hi + 1] >= floor) ++hi;

  CharSpan out;
  out.start = tgt_toks[lo].first;
  out.end = tgt_toks[hi].second;
  out.slot = src_span.slot;
  out.value = src_span.value;
  return out;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
}

std::string strip_leading_zeros(std::string_view s) {
  std::size_t i = 0;
  while (i + 1 < s.size() && s[i] == '0') ++i;
  return std::string(s.substr(i));
}

constexpr std::string_view kRangeDashes[] = {"-", "–", "—", "~"};

bool eat_dash(std::string_view text, std::size_t& pos) {
  for (std::string_view dash : kRangeDashes) {
    if (text.substr(pos).starts_with(dash)) {
      pos += dash.size();
      return true;
    }
  }
  return false;
}

void add_span(std::vector<std::pair<std::size_t, std::size_t>>& spans,
              std::size_t start, std::size_t end) {
  for (const auto& s : spans)
    if (s.first == start && s.second == end) return;
  spans.emplace_back(start, end);
}

// Occurrences of `a <dash> b` allowing spaces around the dash and any dash
// variant.
void find_range_occurrences(
    std::string_view text, std::string_view a, std::string_view b,
    std::vector<std::pair<std::size_t, std::size_t>>& spans) {
  for (std::size_t start : text::find_occurrences(text, a)) {
    std::size_t pos = start + a.size();
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size() || !eat_dash(text, pos)) continue;
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (!text.substr(pos).starts_with(b)) continue;
    std::size_t end = pos + b.size();
    if (!text::boundary_ok(text, pos, end)) continue;
    add_span(spans, start, end);
  }
}

void find_literal_occurrences(
    std::string_view text, std::string_view needle,
    std::vector<std::pair<std::size_t, std::size_t>>& spans) {
  for (std::size_t pos : text::find_occurrences(text, needle))
    add_span(spans, pos, pos + needle.size());
}

}  // namespace

std::optional<std::pair<std::size_t, std::size_t>> numeric_span_recover(
    std::string_view value, std::string_view target_text) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;

  // Clock time HH:MM.
  std::size_t colon = value.find(':');
  if (colon != std::string_view::npos && colon >= 1 && colon <= 2 &&
      all_digits(value.substr(0, colon)) && value.size() - colon - 1 == 2 &&
      all_digits(value.substr(colon + 1))) {
    std::string minutes(value.substr(colon + 1));
    find_literal_occurrences(target_text, value, spans);
    std::string variant = strip_leading_zeros(value.substr(0, colon)) + ":" +
                          minutes;
    if (variant != value) find_literal_occurrences(target_text, variant, spans);
    if (spans.size() == 1) return spans[0];
    return std::nullopt;
  }

  // ISO date YYYY-MM-DD (classified before plain ranges: it contains dashes).
  {
    std::size_t d1 = value.find('-');
    std::size_t d2 = d1 == std::string_view::npos ? std::string_view::npos
                                                  : value.find('-', d1 + 1);
    if (d1 == 4 && d2 != std::string_view::npos && d2 > d1 + 1 &&
        d2 + 1 < value.size() && all_digits(value.substr(0, d1)) &&
        all_digits(value.substr(d1 + 1, d2 - d1 - 1)) &&
        all_digits(value.substr(d2 + 1)) && d2 - d1 - 1 <= 2 &&
        value.size() - d2 - 1 <= 2) {
      std::string year(value.substr(0, d1));
      std::string month = strip_leading_zeros(value.substr(d1 + 1, d2 - d1 - 1));
      std::string day = strip_leading_zeros(value.substr(d2 + 1));
      find_literal_occurrences(target_text, value, spans);
      std::string variant = year + "-" + month + "-" + day;
      if (variant != value)
        find_literal_occurrences(target_text, variant, spans);
      if (spans.size() == 1) return spans[0];
      return std::nullopt;
    }
  }

  // M月D日 date.
  {
    std::size_t yue = value.find("月");
    std::size_t ri = value.find("日");
    if (yue != std::string_view::npos && ri != std::string_view::npos &&
        ri == value.size() - 3 && yue > 0 && ri > yue + 3 &&
        all_digits(value.substr(0, yue)) &&
        all_digits(value.substr(yue + 3, ri - yue - 3))) {
      std::string month = strip_leading_zeros(value.substr(0, yue));
      std::string day = strip_leading_zeros(value.substr(yue + 3, ri - yue - 3));
      find_literal_occurrences(target_text, value, spans);
      std::string variant = month + "月" + day + "日";
      if (variant != value)
        find_literal_occurrences(target_text, variant, spans);
      if (spans.size() == 1) return spans[0];
      return std::nullopt;
    }
  }

  // Integer range a-b.
  {
    std::size_t dash = value.find('-');
    if (dash != std::string_view::npos && dash > 0 &&
        all_digits(value.substr(0, dash)) &&
        all_digits(value.substr(dash + 1))) {
      std::string a = strip_leading_zeros(value.substr(0, dash));
      std::string b = strip_leading_zeros(value.substr(dash + 1));
      find_range_occurrences(target_text, a, b, spans);
      if (spans.size() == 1) return spans[0];
      return std::nullopt;
    }
  }

  // Plain integer.
  if (all_digits(value)) {
    std::string normalized = strip_leading_zeros(value);
    find_literal_occurrences(target_text, normalized, spans);
    if (normalized != value)
      find_literal_occurrences(target_text, value, spans);
    if (spans.size() == 1) return spans[0];
    return std::nullopt;
  }

  return std::nullopt;
}

}  // namespace wozloc
