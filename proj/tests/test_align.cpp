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

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "wozloc/align.hpp"
#include "wozloc/errors.hpp"
#include "wozloc/rng.hpp"
#include "wozloc/state.hpp"
#include "wozloc/text.hpp"

using namespace wozloc;

namespace {

// Reference span projection by exhaustive window enumeration: score every
// target subword, then among ALL windows containing the peak whose minimum
// score clears the floor, pick the widest. The library's two-sided extension
// must land on the same unique window.
CharSpan oracle_align(const CharSpan& src_span, const TokenOffsets& src_toks,
                      const TokenOffsets& tgt_toks, const AttentionMatrix& attn,
                      double theta) {
  std::vector<double> score(tgt_toks.size(), 0.0);
  for (std::size_t j = 0; j < tgt_toks.size(); ++j)
    for (std::size_t s = 0; s < src_toks.size(); ++s)
      if (src_toks[s].first < src_span.end && src_span.start < src_toks[s].second)
        score[j] += attn[j][s];

  std::size_t peak = static_cast<std::size_t>(
      std::max_element(score.begin(), score.end()) - score.begin());
  double floor = theta * score[peak];

  std::size_t best_a = peak, best_b = peak;
  for (std::size_t a = 0; a <= peak; ++a) {
    for (std::size_t b = peak; b < score.size(); ++b) {
      double lowest = *std::min_element(score.begin() + a, score.begin() + b + 1);
      if (lowest >= floor && b - a > best_b - best_a) {
        best_a = a;
        best_b = b;
      }
    }
  }
  CharSpan out;
  out.start = tgt_toks[best_a].first;
  out.end = tgt_toks[best_b].second;
  return out;
}

TokenOffsets word_offsets(std::size_t n) {
  // Synthetic five-byte words with one-byte gaps: token k = [6k, 6k+5).
  TokenOffsets toks;
  for (std::size_t k = 0; k < n; ++k) toks.emplace_back(6 * k, 6 * k + 5);
  return toks;
}

}  // namespace

TEST_CASE("split_sentences tiles the input losslessly") {
  auto check_lossless = [](const std::string& text) {
    auto sentences = split_sentences(text);
    std::string rebuilt;
    for (const auto& s : sentences) {
      CHECK(rebuilt.size() == s.offset);
      rebuilt += s.text;
    }
    CHECK(rebuilt == text);
  };
  check_lossless("i need a hotel. something cheap! where? ok");
  check_lossless("no delimiters at all");
  check_lossless("");
  check_lossless("trailing period.");
  check_lossless("double  spaces.  kept with the left piece.");
  check_lossless("中文。第二句！第三");
}

TEST_CASE("split_sentences splits on sentence punctuation only") {
  auto s = split_sentences("my budget sits at 200-300 per person. that is firm.");
  REQUIRE(s.size() == 2);
  CHECK(s[0].text == "my budget sits at 200-300 per person. ");
  CHECK(s[1].text == "that is firm.");

  // A period inside a token (decimal point) does not split.
  CHECK(split_sentences("pay 3.50 euros please").size() == 1);
  // 10:00 etc. never split.
  CHECK(split_sentences("leave at 10:00 thanks").size() == 1);
}

TEST_CASE("strip_quotes removes marks and maps offsets both ways") {
  std::string marked = "we want \" cheap \" food";
  StrippedText stripped = strip_quotes(marked);
  CHECK(stripped.text().find('"') == std::string::npos);
  // The value survives contiguously in the cleaned text.
  auto pos = stripped.text().find("cheap");
  REQUIRE(pos != std::string::npos);
  // Round trip: cleaned offset → original → back.
  std::size_t original = stripped.to_original_start(pos);
  CHECK(marked.compare(original, 5, "cheap") == 0);
  CHECK(stripped.to_cleaned(original) == pos);
  std::size_t end_original = stripped.to_original_end(pos + 5);
  CHECK(marked.substr(original, end_original - original) == "cheap");
}

TEST_CASE("align_span reproduces the five-token worked example") {
  // Five target subwords with span scores [0.1, 0.6, 0.5, 0.2, 0.1]; the
  // second source column absorbs the rest of each row's mass.
  TokenOffsets src = word_offsets(2);
  TokenOffsets tgt = word_offsets(5);
  AttentionMatrix attn = {
      {0.1, 0.9}, {0.6, 0.4}, {0.5, 0.5}, {0.2, 0.8}, {0.1, 0.9}};
  CharSpan span;
  span.start = src[0].first;
  span.end = src[0].second;
  AlignmentConfig cfg;
  cfg.extension_threshold = 0.5;

  CharSpan out = align_span(span, src, tgt, attn, cfg);
  // Peak 0.6 at token 1; floor 0.3; token 2 joins (0.5 >= 0.3), token 0
  // (0.1) and token 3 (0.2) stay out: run {1, 2}.
  CHECK(out.start == tgt[1].first);
  CHECK(out.end == tgt[2].second);
}

TEST_CASE("align_span equals the enumeration oracle on random soft matrices") {
  Rng rng(1618);
  for (int iter = 0; iter < 300; ++iter) {
    std::size_t n_src = 1 + rng.below(6);
    std::size_t n_tgt = 1 + rng.below(8);
    TokenOffsets src = word_offsets(n_src);
    TokenOffsets tgt = word_offsets(n_tgt);
    AttentionMatrix attn(n_tgt, std::vector<double>(n_src, 0.0));
    for (auto& row : attn) {
      double sum = 0.0;
      for (auto& cell : row) {
        cell = 0.05 + 0.95 * (static_cast<double>(rng.below(1000)) / 1000.0);
        sum += cell;
      }
      for (auto& cell : row) cell /= sum;  // translator-normalized rows
    }
    std::size_t a = rng.below(n_src);
    std::size_t b = a + rng.below(n_src - a);
    CharSpan span;
    span.start = src[a].first;
    span.end = src[b].second;
    double theta = 0.1 + 0.8 * (static_cast<double>(rng.below(1000)) / 1000.0);
    AlignmentConfig cfg;
    cfg.extension_threshold = theta;

    CharSpan got = align_span(span, src, tgt, attn, cfg);
    CharSpan want = oracle_align(span, src, tgt, attn, theta);
    CHECK(got.start == want.start);
    CHECK(got.end == want.end);
  }
}

TEST_CASE("align_span recovers images under permutation one-hot matrices") {
  Rng rng(271828);
  int checked = 0;
  for (int iter = 0; iter < 200; ++iter) {
    std::size_t n = 2 + rng.below(11);  // n in [2, 12]
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);

    TokenOffsets src = word_offsets(n);
    TokenOffsets tgt = word_offsets(n);
    AttentionMatrix attn(n, std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < n; ++k) attn[k][perm[k]] = 1.0;

    AlignmentConfig cfg;  // theta 0.5
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        std::vector<std::size_t> image;
        for (std::size_t k = 0; k < n; ++k)
          if (perm[k] >= i && perm[k] <= j) image.push_back(k);
        bool contiguous = image.back() - image.front() + 1 == image.size();
        if (!contiguous) continue;
        CharSpan span;
        span.start = src[i].first;
        span.end = src[j].second;
        CharSpan out = align_span(span, src, tgt, attn, cfg);
        CHECK(out.start == tgt[image.front()].first);
        CHECK(out.end == tgt[image.back()].second);
        ++checked;
      }
    }
  }
  CHECK(checked > 1000);  // plenty of contiguous-image spans exercised
}

TEST_CASE("align_span failure modes") {
  TokenOffsets src = word_offsets(2);
  TokenOffsets tgt = word_offsets(2);
  AttentionMatrix attn = {{0.0, 1.0}, {0.0, 1.0}};
  CharSpan span;
  span.start = src[0].first;
  span.end = src[0].second;
  AlignmentConfig cfg;

  // Zero mass for the covered column.
  CHECK_THROWS_AS(align_span(span, src, tgt, attn, cfg), AlignmentFailure);

  // Span outside every token.
  CharSpan gap;
  gap.start = 5;
  gap.end = 6;
  AttentionMatrix ok = {{1.0, 0.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(align_span(gap, src, tgt, ok, cfg), AlignmentFailure);

  // Dimension mismatch.
  AttentionMatrix bad = {{1.0}, {1.0}};
  CHECK_THROWS_AS(align_span(span, src, tgt, bad, cfg), ValidationError);

  // Threshold range.
  AlignmentConfig zero;
  zero.extension_threshold = 0.0;
  CHECK_THROWS_AS(align_span(span, src, tgt, ok, zero), ValidationError);
}

TEST_CASE("detect_entity_spans finds verbatim values with boundaries") {
  BeliefState state;
  state.insert_or_assign({"restaurant", "food"}, SlotValue::regular("korean"));
  state.insert_or_assign({"restaurant", "area"}, SlotValue::regular("north"));
  state.insert_or_assign({"hotel", "parking"}, SlotValue::dontcare());

  auto spans = detect_entity_spans("we want korean food in the north end", state);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0].start == 8);
  CHECK(spans[0].value == "korean");
  CHECK(spans[1].value == "north");

  // Mid-token matches rejected; dontcare produces no span.
  CHECK(detect_entity_spans("northern lights", state).empty());
}

TEST_CASE("detect_entity_spans prefers the longer value on overlap") {
  BeliefState state;
  state.insert_or_assign({"train", "destination"},
                         SlotValue::regular("birmingham new street"));
  state.insert_or_assign({"train", "stop"}, SlotValue::regular("new street"));
  auto spans = detect_entity_spans("to birmingham new street please", state);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].value == "birmingham new street");
}

TEST_CASE("numeric_span_recover handles the documented shapes") {
  // Integer range with spaced dash variants.
  auto got = numeric_span_recover("100-150", "between 100 - 150 yuan");
  REQUIRE(got.has_value());
  CHECK(got->first == 8);
  CHECK(got->second == 17);

  // Clock time, with and without a leading zero.
  got = numeric_span_recover("08:45", "um 8:45 bitte");
  REQUIRE(got.has_value());
  CHECK(got->first == 3);
  CHECK(got->second == 7);

  // Plain integer must respect token boundaries.
  got = numeric_span_recover("6", "fuer 6 personen");
  REQUIRE(got.has_value());
  CHECK(got->first == 5);

  // Ambiguity (two occurrences) refuses to guess.
  CHECK_FALSE(numeric_span_recover("6", "6 oder 6").has_value());
  // Absent value.
  CHECK_FALSE(numeric_span_recover("42", "keine zahl hier").has_value());
  // Non-numeric values are not this heuristic's business.
  CHECK_FALSE(numeric_span_recover("cheap", "cheap food").has_value());
}

TEST_CASE("numeric_span_recover handles dates") {
  auto got = numeric_span_recover("2026-03-05", "am 2026-3-5 vielleicht");
  REQUIRE(got.has_value());
  CHECK(got->first == 3);

  got = numeric_span_recover("3月5日", "予約は3月5日です");
  REQUIRE(got.has_value());
}
