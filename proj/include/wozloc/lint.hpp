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

#ifndef WOZLOC_LINT_HPP_
#define WOZLOC_LINT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wozloc/corpus.hpp"
#include "wozloc/json_io.hpp"

namespace wozloc {

enum class FindingKind {
  InexactMatch,
  MissingSlot,
  ExtraSlot,
  DelayedAnnotation,
  EmptyAnnotation,
  RangeAnomaly,
};

std::string to_string(FindingKind kind);

struct Finding {
  FindingKind kind = FindingKind::InexactMatch;
  std::string dialogue_id;
  int turn = -1;
  std::optional<SlotId> slot;
  std::string value;
  std::string evidence;

  Json to_json() const;
};

struct LintConfig {
  // Slots whose values may legitimately never be verbatim (inferred from
  // context); exempt from ExtraSlot.
  std::set<SlotId> inferable_slots;
  std::size_t max_edit_distance = 1;
  // When set, rates are computed over a seeded random sample of turns and
  // findings are restricted to the sampled turns.
  std::optional<std::size_t> sample_size;
  uint64_t seed = 0;
};

// Per-detector entry points; lint_corpus runs them all.
std::vector<Finding> detect_inexact_match(const Corpus& corpus,
                                          const LintConfig& cfg);
std::vector<Finding> detect_missing_slot(const Corpus& corpus,
                                         const LintConfig& cfg);
std::vector<Finding> detect_extra_slot(const Corpus& corpus,
                                       const LintConfig& cfg);
std::vector<Finding> detect_delayed_annotation(const Corpus& corpus,
                                               const LintConfig& cfg);
std::vector<Finding> detect_empty_annotation(const Corpus& corpus,
                                             const LintConfig& cfg);
std::vector<Finding> detect_range_anomaly(const Corpus& corpus,
                                          const LintConfig& cfg);

// Aggregate statistics, not per-turn findings: per slot, the share of values
// never appearing verbatim in their dialogue, and how often agent-mentioned
// ontology values actually enter the state.
struct InferredSlotStats {
  struct Share {
    std::size_t total = 0;
    std::size_t inferred = 0;
  };
  struct Uptake {
    std::size_t mentioned = 0;
    std::size_t entered = 0;
  };
  std::map<SlotId, Share> inferred;
  std::map<SlotId, Uptake> agent_uptake;

  Json to_json() const;
};

InferredSlotStats inferred_slot_stats(const Corpus& corpus);

struct LintReport {
  std::vector<Finding> findings;
  std::map<std::string, std::size_t> counts;  // per finding kind
  std::size_t inspected_turns = 0;
  std::size_t flagged_turns = 0;
  InferredSlotStats stats;

  double rate() const {
    return inspected_turns == 0
               ? 0.0
               : static_cast<double>(flagged_turns) / inspected_turns;
  }
  Json to_json() const;
  std::string to_text() const;
};

// All detectors with precedence (a (turn, slot) claimed by DelayedAnnotation
// is never also MissingSlot); sampled mode restricts findings and the rate
// denominator to the seeded sample.
LintReport lint_corpus(const Corpus& corpus, const LintConfig& cfg);

}  // namespace wozloc

#endif  // WOZLOC_LINT_HPP_
