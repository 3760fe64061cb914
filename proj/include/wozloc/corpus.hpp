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

#ifndef WOZLOC_CORPUS_HPP_
#define WOZLOC_CORPUS_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wozloc/json_io.hpp"
#include "wozloc/ontology.hpp"
#include "wozloc/state.hpp"

namespace wozloc {

struct Turn {
  int index = 0;
  std::string agent_utterance;  // empty at turn 0
  std::string user_utterance;
  BeliefState gold_state;
};

struct Dialogue {
  std::string id;
  std::string language;  // BCP-47
  std::vector<Turn> turns;
};

struct Corpus {
  std::string split = "train";  // train | dev | test
  Ontology ontology;
  std::vector<Dialogue> dialogues;
};

struct ValidationIssue {
  std::string dialogue_id;
  int turn = -1;
  std::string message;
};

// Canonical corpus JSON:
// {"split":...,"ontology":{...},"dialogues":[{"id":...,"language":...,
//  "turns":[{"agent":...,"user":...,"state":[[d,s,v],...]},...]}]}
// save∘load is a byte identity for files save_canonical produced.
Corpus load_canonical(const std::string& path, bool strict = false,
                      std::vector<ValidationIssue>* issues = nullptr);
void save_canonical(const Corpus& corpus, const std::string& path);

Json corpus_to_json(const Corpus& corpus);
Corpus corpus_from_json(const Json& j, bool strict = false,
                        std::vector<ValidationIssue>* issues = nullptr);

// State triples as stored on disk: sorted [domain, slot, value] arrays.
Json state_to_json(const BeliefState& state);
BeliefState state_from_json(const Json& j);

// Locates the canonical fields inside a foreign JSON schema. Paths are
// dotted with optional [index] steps ("log", "meta.states[0]"); the empty
// path or "$" is the node itself.
struct FieldMapping {
  std::string dialogues = "$";     // container: array, or object keyed by id
  std::string dialogue_id = "$key";  // "$key" = containing object key
  std::string turns;               // required
  std::string agent;               // optional; missing field → ""
  std::string user;                // required
  std::string state;               // optional; missing → empty state
  // "full": each turn carries the whole state. "delta": entries accumulate
  // turn over turn; value `none` clears a slot.
  std::string state_mode = "full";
  std::string language = "en";
  std::string split = "train";
  // Renames applied to foreign slot ids, keyed/valued as "domain slot".
  std::map<std::string, std::string> slot_renames;
  // Optional path to an ontology JSON file; when absent the ontology is
  // derived from the observed states.
  std::string ontology_path;

  static FieldMapping from_json(const Json& j);
  static FieldMapping load(const std::string& path);
};

struct ImportReport {
  std::vector<ValidationIssue> issues;
  // Slots seen in data but absent from the ontology, with occurrence counts.
  std::map<SlotId, std::size_t> unknown_slots;
};

Corpus import_foreign(const std::string& path, const FieldMapping& mapping,
                      ImportReport* report = nullptr);

struct StatsReport {
  std::size_t domains = 0;
  std::size_t dialogues = 0;
  std::size_t turns = 0;
  std::size_t slots = 0;
  std::size_t values = 0;

  Json to_json() const;
  std::string to_text() const;
  bool operator==(const StatsReport&) const = default;
};

StatsReport corpus_stats(const Corpus& corpus);

}  // namespace wozloc

#endif  // WOZLOC_CORPUS_HPP_
