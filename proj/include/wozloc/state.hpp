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

#ifndef WOZLOC_STATE_HPP_
#define WOZLOC_STATE_HPP_

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace wozloc {

class Ontology;

struct SlotId {
  std::string domain;
  std::string slot;

  auto operator<=>(const SlotId&) const = default;
};

// A tracked value. "none" is represented by absence from the state, so a
// stored value is either a regular string or the literal dontcare.
struct SlotValue {
  enum class Kind { Regular, DontCare };

  Kind kind = Kind::Regular;
  std::string text;  // meaningful only for Regular

  static SlotValue regular(std::string v) {
    return SlotValue{Kind::Regular, std::move(v)};
  }
  static SlotValue dontcare() { return SlotValue{Kind::DontCare, {}}; }

  // The string this value renders as inside `" ... "`.
  const std::string& rendered() const;

  bool operator==(const SlotValue& o) const {
    if (kind != o.kind) return false;
    return kind != Kind::Regular || text == o.text;
  }
};

// Belief state b_t: slot → value mapping. std::map keeps (domain, slot)
// lexicographic order, which is also the serialization order.
using BeliefState = std::map<SlotId, SlotValue>;

struct StateDelta {
  std::map<SlotId, SlotValue> set;
  std::set<SlotId> clear;

  bool empty() const { return set.empty() && clear.empty(); }
};

struct NumericRange {
  long long low = 0;
  long long high = 0;

  bool operator==(const NumericRange&) const = default;
};

// Renders a state as the flat annotation text: assignments sorted by
// (domain, slot), each as `<domain> <slot> = " <value> "`, joined by single
// spaces; the empty state renders as `null`.
std::string serialize_state(const BeliefState& state);

struct ParseOptions {
  // When set, unknown slots or illegal values raise ValidationError.
  bool strict = false;
  const Ontology* ontology = nullptr;
};

// Inverse of serialize_state. Tolerates repeated spaces and arbitrary
// assignment order; a repeated slot takes the last value. Throws ParseError
// with a byte offset on grammar violations.
BeliefState parse_state(std::string_view encoded, const ParseOptions& opts = {});

// prev with delta.clear removed, then delta.set written.
BeliefState apply_delta(const BeliefState& prev, const StateDelta& delta);

// Minimal delta: apply_delta(prev, diff_states(prev, next)) == next.
StateDelta diff_states(const BeliefState& prev, const BeliefState& next);

// Widens a range to cover an observed amount, rounding the moved endpoint to
// a multiple of ten (floor when extending downward, ceil upward).
NumericRange expand_range(NumericRange current, long long observed);

// Parses "low-high" (also accepts a bare integer as a degenerate range).
std::optional<NumericRange> parse_range(std::string_view text);
std::string format_range(const NumericRange& range);

// Throws ValidationError if any assignment is not legal under the ontology.
void validate_state(const BeliefState& state, const Ontology& ontology);

}  // namespace wozloc

#endif  // WOZLOC_STATE_HPP_
