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

#ifndef WOZLOC_ALIGN_HPP_
#define WOZLOC_ALIGN_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wozloc/state.hpp"

namespace wozloc {

// Byte span (half-open) of a slot value inside a UTF-8 utterance.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  SlotId slot;
  std::string value;
};

// Per-subword (start, end) byte spans for one text, in order.
using TokenOffsets = std::vector<std::pair<std::size_t, std::size_t>>;

// rows = target subwords, cols = source subwords; rows sum to 1 after the
// translator's normalization.
using AttentionMatrix = std::vector<std::vector<double>>;

struct AlignmentConfig {
  double extension_threshold = 0.5;  // θ ∈ (0, 1]
  bool numeric_heuristics_enabled = true;
};

// Throws ValidationError when dimensions disagree with the token offsets.
void check_attention(const AttentionMatrix& attn, const TokenOffsets& src_toks,
                     const TokenOffsets& tgt_toks);

// One span for every Regular state value occurring verbatim (NFC) in the
// utterance; overlaps resolved longest-match-first then leftmost; sorted by
// start. Values never found simply yield no span.
std::vector<CharSpan> detect_entity_spans(std::string_view utterance,
                                          const BeliefState& state);

struct Sentence {
  std::string text;
  std::size_t offset = 0;  // byte offset into the original text
};

// Splits after any of . ! ? 。 ！ ？ ； followed by space or end; delimiters
// (and any trailing whitespace) stay with their sentence, so concatenating
// the pieces at their offsets reconstructs the input byte-for-byte.
std::vector<Sentence> split_sentences(std::string_view text);

// Quote-mark removal with an offset table for mapping between the cleaned
// and the original text.
class StrippedText {
 public:
  StrippedText(std::string text,
               std::vector<std::pair<std::size_t, std::size_t>> removed)
      : text_(std::move(text)), removed_(std::move(removed)) {}

  const std::string& text() const { return text_; }
  // (cleaned position, byte length) of each removed mark, ascending.
  const std::vector<std::pair<std::size_t, std::size_t>>& removed() const {
    return removed_;
  }

  // Maps a cleaned offset back to the original text; span starts and
  // (exclusive) ends need different rounding around removed marks.
  std::size_t to_original_start(std::size_t cleaned) const;
  std::size_t to_original_end(std::size_t cleaned) const;
  // Maps an original offset into the cleaned text (offsets inside a removed
  // mark clamp to its position).
  std::size_t to_cleaned(std::size_t original) const;

 private:
  std::string text_;
  std::vector<std::pair<std::size_t, std::size_t>> removed_;
};

// Removes " “ ” ‘ ’ 「 」 from the text.
StrippedText strip_quotes(std::string_view text);

// Cross-attention span projection: sum the attention each target subword
// pays to the source subwords under src_span, take the argmax (ties to the
// smaller index), extend the run left and right while the score stays at or
// above θ times the peak. Throws AlignmentFailure when the span receives
// zero total mass.
CharSpan align_span(const CharSpan& src_span, const TokenOffsets& src_toks,
                    const TokenOffsets& tgt_toks, const AttentionMatrix& attn,
                    const AlignmentConfig& cfg);

// Recovery for numeric-ish values (integer, integer range, HH:MM clock time,
// ISO date, M月D日 date): returns the span iff exactly one normalized
// occurrence exists in target_text.
std::optional<std::pair<std::size_t, std::size_t>> numeric_span_recover(
    std::string_view value, std::string_view target_text);

}  // namespace wozloc

#endif  // WOZLOC_ALIGN_HPP_
