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
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wozloc/errors.hpp"
#include "wozloc/ontology.hpp"
#include "wozloc/rng.hpp"
#include "wozloc/state.hpp"

using namespace wozloc;

namespace {

// Reference parser: istream word splitting and a flat state machine, sharing
// no code with the library tokenizer. Last assignment wins; `none` erases.
std::map<std::string, std::string> oracle_parse(const std::string& encoded) {
  std::vector<std::string> words;
  std::istringstream in(encoded);
  std::string w;
  while (in >> w) words.push_back(w);
  std::map<std::string, std::string> out;
  if (words.size() == 1 && words[0] == "null") return out;
  std::size_t i = 0;
  while (i < words.size()) {
    std::vector<std::string> name;
    while (i < words.size() && words[i] != "=") name.push_back(words[i++]);
    REQUIRE(i < words.size());
    REQUIRE(name.size() >= 2);
    ++i;  // '='
    REQUIRE(words.at(i) == "\"");
    ++i;
    std::string value;
    while (words.at(i) != "\"") {
      if (!value.empty()) value += ' ';
      value += words[i++];
    }
    ++i;  // closing quote
    std::string key;
    for (std::size_t k = 0; k < name.size(); ++k)
      key += (k ? " " : "") + name[k];
    if (value == "none")
      out.erase(key);
    else
      out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> flatten(const BeliefState& state) {
  std::map<std::string, std::string> out;
  for (const auto& [id, value] : state)
    out[id.domain + " " + id.slot] = value.rendered();
  return out;
}

// Reference range expander: walk outward from the observed value to the
// nearest multiple of ten, by explicit scanning instead of arithmetic.
NumericRange oracle_expand(NumericRange r, long long observed) {
  if (observed < r.low) {
    long long m = observed;
    while (m % 10 != 0) --m;
    r.low = m;
  } else if (observed > r.high) {
    long long m = observed;
    while (m % 10 != 0) ++m;
    r.high = m;
  }
  return r;
}

Ontology sample_ontology() {
  Ontology ont;
  ont.add_slot({"train", "day"}, {"monday", "thursday", "friday"});
  ont.add_slot({"train", "departure"}, {"cambridge", "ely", "london kings cross"});
  ont.add_slot({"train", "destination"},
               {"birmingham new street", "norwich", "stansted airport"});
  ont.add_slot({"train", "leaveat"}, {"10:00", "08:45", "16:15"});
  ont.add_slot({"train", "book people"}, {"1", "2", "6", "8"});
  ont.add_slot({"hotel", "area"}, {"north", "south", "centre"});
  ont.add_slot({"hotel", "parking"}, {"yes", "no"});
  ont.add_slot({"café", "speciality"},
               {"crème brûlée", "pâtisserie"});
  return ont;
}

BeliefState random_state(const Ontology& ont, Rng& rng) {
  BeliefState state;
  auto slots = ont.slots();
  for (const auto& id : slots) {
    switch (rng.below(3)) {
      case 0:
        break;  // absent
      case 1:
        state.insert_or_assign(id, SlotValue::dontcare());
        break;
      default: {
        const auto& values = ont.values(id);
        state.insert_or_assign(
            id, SlotValue::regular(values[rng.below(values.size())]));
        break;
      }
    }
  }
  return state;
}

}  // namespace

TEST_CASE("serialize renders the five-slot booking example") {
  BeliefState state;
  state.insert_or_assign({"train", "book people"}, SlotValue::regular("6"));
  state.insert_or_assign({"train", "day"}, SlotValue::regular("thursday"));
  state.insert_or_assign({"train", "departure"}, SlotValue::regular("cambridge"));
  state.insert_or_assign({"train", "destination"},
                         SlotValue::regular("birmingham new street"));
  state.insert_or_assign({"train", "leaveat"}, SlotValue::regular("10:00"));
  CHECK(serialize_state(state) ==
        "train book people = \" 6 \" "
        "train day = \" thursday \" "
        "train departure = \" cambridge \" "
        "train destination = \" birmingham new street \" "
        "train leaveat = \" 10:00 \"");

  state.erase({"train", "book people"});
  CHECK(serialize_state(state) ==
        "train day = \" thursday \" "
        "train departure = \" cambridge \" "
        "train destination = \" birmingham new street \" "
        "train leaveat = \" 10:00 \"");
}

TEST_CASE("empty state serializes to null and back") {
  CHECK(serialize_state({}) == "null");
  CHECK(parse_state("null").empty());
  CHECK(parse_state("  null  ").empty());
}

TEST_CASE("round trip over randomized ontology-valid states") {
  Ontology ont = sample_ontology();
  Rng rng(4242);
  for (int i = 0; i < 2000; ++i) {
    BeliefState state = random_state(ont, rng);
    BeliefState back = parse_state(serialize_state(state));
    CHECK(back == state);
  }
}

TEST_CASE("parse agrees with the reference parser on serialized states") {
  Ontology ont = sample_ontology();
  Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    std::string encoded = serialize_state(random_state(ont, rng));
    CHECK(flatten(parse_state(encoded)) == oracle_parse(encoded));
  }
}

TEST_CASE("parse tolerates extra spaces and arbitrary order") {
  BeliefState a = parse_state(
      "train  day =  \"  thursday \"   hotel area = \" north \"");
  BeliefState b = parse_state(
      "hotel area = \" north \" train day = \" thursday \"");
  CHECK(a == b);
  CHECK(a.at({"train", "day"}).text == "thursday");
}

TEST_CASE("repeated slot takes the last value") {
  std::string encoded =
      "train day = \" monday \" train day = \" thursday \"";
  BeliefState state = parse_state(encoded);
  CHECK(state.size() == 1);
  CHECK(state.at({"train", "day"}).text == "thursday");
  CHECK(flatten(state) == oracle_parse(encoded));
}

TEST_CASE("none erases an earlier assignment") {
  std::string encoded =
      "train day = \" thursday \" hotel area = \" north \" "
      "train day = \" none \"";
  BeliefState state = parse_state(encoded);
  CHECK(state.size() == 1);
  CHECK(state.count({"hotel", "area"}) == 1);
  CHECK(flatten(state) == oracle_parse(encoded));
}

TEST_CASE("dontcare survives the round trip as a distinct kind") {
  BeliefState state;
  state.insert_or_assign({"hotel", "parking"}, SlotValue::dontcare());
  std::string encoded = serialize_state(state);
  CHECK(encoded == "hotel parking = \" dontcare \"");
  BeliefState back = parse_state(encoded);
  CHECK(back.at({"hotel", "parking"}).kind == SlotValue::Kind::DontCare);
}

TEST_CASE("parse errors carry grammar context") {
  CHECK_THROWS_AS(parse_state(""), ParseError);
  CHECK_THROWS_AS(parse_state("train day thursday"), ParseError);
  CHECK_THROWS_AS(parse_state("train day = thursday"), ParseError);
  CHECK_THROWS_AS(parse_state("train day = \" thursday"), ParseError);
  CHECK_THROWS_AS(parse_state("train day = \" \""), ParseError);
  CHECK_THROWS_AS(parse_state("day = \" thursday \""), ParseError);
  CHECK_THROWS_AS(parse_state("= \" thursday \""), ParseError);
}

TEST_CASE("strict parsing validates against the ontology") {
  Ontology ont = sample_ontology();
  ParseOptions opts;
  opts.strict = true;
  opts.ontology = &ont;
  CHECK_NOTHROW(parse_state("train day = \" thursday \"", opts));
  CHECK_NOTHROW(parse_state("hotel parking = \" dontcare \"", opts));
  CHECK_THROWS_AS(parse_state("train day = \" blursday \"", opts),
                  ValidationError);
  CHECK_THROWS_AS(parse_state("spa sauna = \" hot \"", opts), ValidationError);
}

TEST_CASE("unserializable content is rejected rather than mangled") {
  BeliefState state;
  state.insert_or_assign({"train", "day"}, SlotValue::regular("thu\"rsday"));
  CHECK_THROWS_AS(serialize_state(state), SerializationError);
  state.clear();
  state.insert_or_assign({"train", "day"}, SlotValue::regular("two  spaces"));
  CHECK_THROWS_AS(serialize_state(state), SerializationError);
  state.clear();
  state.insert_or_assign({"train", "da=y"}, SlotValue::regular("thursday"));
  CHECK_THROWS_AS(serialize_state(state), SerializationError);
  state.clear();
  state.insert_or_assign({"", "day"}, SlotValue::regular("thursday"));
  CHECK_THROWS_AS(serialize_state(state), SerializationError);
}

TEST_CASE("nfc applies during parsing") {
  // Decomposed e + combining acute in the input composes on the way in.
  BeliefState state = parse_state("café speciality = \" pâte \"");
  CHECK(state.count({"café", "speciality"}) == 1);
  CHECK(state.at({"café", "speciality"}).text == "pâte");
}

TEST_CASE("diff and apply invert each other on random pairs") {
  Ontology ont = sample_ontology();
  Rng rng(31337);
  for (int i = 0; i < 500; ++i) {
    BeliefState prev = random_state(ont, rng);
    BeliefState next = random_state(ont, rng);
    StateDelta delta = diff_states(prev, next);
    CHECK(apply_delta(prev, delta) == next);
  }
}

TEST_CASE("expand_range matches the scanning reference") {
  Rng rng(55);
  for (int i = 0; i < 2000; ++i) {
    NumericRange r;
    r.low = static_cast<long long>(rng.below(400));
    r.high = r.low + static_cast<long long>(rng.below(300));
    long long observed = static_cast<long long>(rng.below(900));
    NumericRange got = expand_range(r, observed);
    NumericRange want = oracle_expand(r, observed);
    CHECK(got.low == want.low);
    CHECK(got.high == want.high);
    // Containment invariants hold regardless of the arithmetic.
    CHECK(got.low <= std::min(observed, r.low));
    CHECK(got.high >= std::max(observed, r.high));
  }
}

TEST_CASE("expand_range frozen examples") {
  auto expand = [](long long lo, long long hi, long long obs) {
    NumericRange r{lo, hi};
    NumericRange out = expand_range(r, obs);
    return format_range(out);
  };
  CHECK(expand(100, 150, 83) == "80-150");
  CHECK(expand(100, 150, 115) == "100-150");
  CHECK(expand(100, 150, 163) == "100-170");
  CHECK(expand(200, 300, 115) == "110-300");
  CHECK(expand(200, 300, 110) == "110-300");
}

TEST_CASE("parse_range handles points, ranges and garbage") {
  auto r = parse_range("100-150");
  REQUIRE(r.has_value());
  CHECK(r->low == 100);
  CHECK(r->high == 150);
  r = parse_range("42");
  REQUIRE(r.has_value());
  CHECK(r->low == 42);
  CHECK(r->high == 42);
  CHECK_FALSE(parse_range("cheap").has_value());
  CHECK_FALSE(parse_range("150-100").has_value());
  CHECK_FALSE(parse_range("10:00").has_value());
  CHECK_FALSE(parse_range("").has_value());
  CHECK(format_range({80, 150}) == "80-150");
  CHECK(format_range({7, 7}) == "7");
}
