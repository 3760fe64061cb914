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

#include "wozloc/state.hpp"

#include <cctype>
#include <charconv>
#include <vector>

#include "wozloc/errors.hpp"
#include "wozloc/ontology.hpp"
#include "wozloc/text.hpp"

namespace wozloc {

namespace {

const std::string kDontCare = "dontcare";
const std::string kNone = "none";

bool contains_char(std::string_view s, char c) {
  return s.find(c) != std::string_view::npos;
}

// Serializable names and values may use a single ASCII space as the only
// internal whitespace; anything else cannot survive the tokenizing parser.
bool space_clean(std::string_view s) {
  if (s.empty()) return false;
  if (s.front() == ' ' || s.back() == ' ') return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == ' ') {
      if (i + 1 < s.size() && s[i + 1] == ' ') return false;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return true;
}

void check_serializable(const SlotId& id, const SlotValue& value) {
  if (id.domain.empty() || contains_char(id.domain, '=') ||
      contains_char(id.domain, '"'))
    throw SerializationError("invalid domain name: '" + id.domain + "'");
  for (char c : id.domain)
    if (std::isspace(static_cast<unsigned char>(c)))
      throw SerializationError("domain name contains whitespace: '" +
                               id.domain + "'");
  if (!space_clean(id.slot) || contains_char(id.slot, '=') ||
      contains_char(id.slot, '"'))
    throw SerializationError("invalid slot name: '" + id.slot + "'");
  if (value.kind == SlotValue::Kind::Regular) {
    if (contains_char(value.text, '"'))
      throw SerializationError("value contains '\"': '" + value.text + "'");
    if (!space_clean(value.text))
      throw SerializationError("value has irregular whitespace: '" +
                               value.text + "'");
  }
}

struct Token {
  std::string_view text;
  std::size_t offset;
};

}  // namespace

const std::string& SlotValue::rendered() const {
  return kind == Kind::DontCare ? kDontCare : text;
}

std::string serialize_state(const BeliefState& state) {
  if (state.empty()) return "null";
  std::string out;
  bool first = true;
  for (const auto& [id, value] : state) {
    check_serializable(id, value);
    if (!first) out += ' ';
    first = false;
    out += id.domain;
    out += ' ';
    out += id.slot;
    out += " = \" ";
    out += value.rendered();
    out += " \"";
  }
  return out;
}

BeliefState parse_state(std::string_view encoded, const ParseOptions& opts) {
  std::vector<Token> tokens;
  for (auto [start, end] : text::token_spans(encoded))
    tokens.push_back({encoded.substr(start, end - start), start});

  if (tokens.size() == 1 && tokens[0].text == "null") return {};

  if (tokens.empty())
    throw ParseError("empty state text (expected `null` or assignments)", 0);

  BeliefState state;
  std::size_t i = 0;
  while (i < tokens.size()) {
    // Name tokens up to `=`: first is the domain, the rest form the slot.
    std::vector<std::size_t> name;
    while (i < tokens.size() && tokens[i].text != "=") {
      if (contains_char(tokens[i].text, '"') ||
          contains_char(tokens[i].text, '='))
        throw ParseError("unexpected quote or '=' inside a name token",
                         tokens[i].offset);
      name.push_back(i++);
    }
    if (i >= tokens.size())
      throw ParseError("expected '=' after slot name", encoded.size());
    if (name.size() < 2)
      throw ParseError("expected `<domain> <slot>` before '='",
                       tokens[i].offset);
    const std::size_t eq = i++;

    if (i >= tokens.size() || tokens[i].text != "\"")
      throw ParseError("expected opening '\"' after '='",
                       i < tokens.size() ? tokens[i].offset
                                         : encoded.size());
    ++i;

    std::string value;
    bool closed = false;
    while (i < tokens.size()) {
      if (tokens[i].text == "\"") {
        closed = true;
        ++i;
        break;
      }
      if (contains_char(tokens[i].text, '"'))
        throw ParseError("quote character embedded in value token",
                         tokens[i].offset);
      if (!value.empty()) value += ' ';
      value += tokens[i].text;
      ++i;
    }
    if (!closed)
      throw ParseError("unterminated value (missing closing '\"')",
                       encoded.size());
    if (value.empty())
      throw ParseError("empty value between quotes", tokens[eq].offset);

    SlotId id;
    id.domain = text::nfc(std::string(tokens[name[0]].text));
    std::string slot;
    for (std::size_t k = 1; k < name.size(); ++k) {
      if (k > 1) slot += ' ';
      slot += tokens[name[k]].text;
    }
    id.slot = text::nfc(slot);
    value = text::nfc(value);

    if (value == kNone) {
      // "none" means unmentioned: represented by absence. Last-wins still
      // holds, a later none erases an earlier assignment.
      state.erase(id);
      continue;
    }
    SlotValue sv = value == kDontCare ? SlotValue::dontcare()
                                      : SlotValue::regular(std::move(value));
    if (opts.strict && opts.ontology) {
      if (!opts.ontology->has_slot(id))
        throw ValidationError("unknown slot: " + id.domain + " " + id.slot);
      if (sv.kind == SlotValue::Kind::Regular &&
          !opts.ontology->is_legal(id, sv.text))
        throw ValidationError("illegal value for " + id.domain + " " +
                              id.slot + ": '" + sv.text + "'");
    }
    state.insert_or_assign(std::move(id), std::move(sv));
  }
  return state;
}

BeliefState apply_delta(const BeliefState& prev, const StateDelta& delta) {
  BeliefState next = prev;
  for (const auto& id : delta.clear) next.erase(id);
  for (const auto& [id, value] : delta.set) next.insert_or_assign(id, value);
  return next;
}

StateDelta diff_states(const BeliefState& prev, const BeliefState& next) {
  StateDelta delta;
  for (const auto& [id, value] : next) {
    auto it = prev.find(id);
    if (it == prev.end() || !(it->second == value)) delta.set[id] = value;
  }
  for (const auto& [id, value] : prev) {
    if (!next.count(id)) delta.clear.insert(id);
  }
  return delta;
}

NumericRange expand_range(NumericRange current, long long observed) {
  if (observed < current.low) {
    current.low = (observed / 10) * 10;
  } else if (observed > current.high) {
    current.high = ((observed + 9) / 10) * 10;
  }
  return current;
}

std::optional<NumericRange> parse_range(std::string_view s) {
  auto parse_int = [](std::string_view t, long long& out) {
    if (t.empty()) return false;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc() && ptr == t.data() + t.size();
  };
  NumericRange r;
  std::size_t dash = s.find('-');
  if (dash == std::string_view::npos) {
    if (!parse_int(s, r.low)) return std::nullopt;
    r.high = r.low;
  } else {
    if (!parse_int(s.substr(0, dash), r.low)) return std::nullopt;
    if (!parse_int(s.substr(dash + 1), r.high)) return std::nullopt;
  }
  if (r.low < 0 || r.low > r.high) return std::nullopt;
  return r;
}

std::string format_range(const NumericRange& r) {
  if (r.low == r.high) return std::to_string(r.low);
  return std::to_string(r.low) + "-" + std::to_string(r.high);
}

void validate_state(const BeliefState& state, const Ontology& ontology) {
  for (const auto& [id, value] : state) {
    if (!ontology.has_slot(id))
      throw ValidationError("unknown slot: " + id.domain + " " + id.slot);
    if (value.kind == SlotValue::Kind::Regular &&
        !ontology.is_legal(id, value.text))
      throw ValidationError("illegal value for " + id.domain + " " + id.slot +
                            ": '" + value.text + "'");
  }
}

}  // namespace wozloc
