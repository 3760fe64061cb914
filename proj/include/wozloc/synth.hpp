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

#ifndef WOZLOC_SYNTH_HPP_
#define WOZLOC_SYNTH_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wozloc/corpus.hpp"
#include "wozloc/lint.hpp"
#include "wozloc/pipeline.hpp"
#include "wozloc/translator.hpp"

namespace wozloc::synth {

// Parallel schemas with disjoint word vocabularies, so every substitution is
// observable in the text. The numeric budget values are shared.
Ontology source_ontology();
Ontology target_ontology();

// A fast-food cuisine forces a cheap price range, with fixed renderings.
DependencyDictionary dependency_dictionary();

// Function words only; never remaps slot values.
std::map<std::string, std::string> word_map();

// Mock translator settings with the source values as entity vocabulary.
MockTranslatorConfig mock_config(uint64_t seed, bool noisy);

struct CorpusSpec {
  std::size_t dialogues = 50;
  std::size_t turns = 8;  // at least 2
  uint64_t seed = 1;
  std::string split = "train";
};

// Deterministic woz-style corpus that is clean under every lint detector:
// each introduced value occurs verbatim in its own turn, states only grow,
// and every (agent, user) utterance pair is globally unique.
Corpus make_clean_corpus(const CorpusSpec& spec = {});

// Lint settings matching the schema (the numeric budget slot is inferable).
LintConfig default_lint_config();

struct PlantedCorpus {
  Corpus corpus;
  // kind, dialogue, turn, slot, and value filled; evidence left empty.
  std::vector<Finding> expected;
};

// Clean corpus with one defect of `kind` planted into every other eligible
// dialogue. Requires spec.turns >= 8.
PlantedCorpus make_planted_corpus(FindingKind kind,
                                  const CorpusSpec& spec = {});

// One defect of every kind, each in its own dialogue. Requires
// spec.turns >= 8 and spec.dialogues >= 7.
PlantedCorpus make_mixed_corpus(const CorpusSpec& spec = {});

// Four-turn dialogues for the metric fixtures; with the scripted-error
// backend they score GJGA 0.75 and JGA 0.50 exactly.
Corpus make_eval_corpus(std::size_t dialogues = 8, uint64_t seed = 7);

}  // namespace wozloc::synth

#endif  // WOZLOC_SYNTH_HPP_
