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

#ifndef WOZLOC_PIPELINE_HPP_
#define WOZLOC_PIPELINE_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wozloc/align.hpp"
#include "wozloc/corpus.hpp"
#include "wozloc/translator.hpp"

namespace wozloc {

// Slot-value dependencies that must survive translation together, with fixed
// target renderings (e.g. a fast-food cuisine forcing a cheap price range).
struct DependencyConsequent {
  SlotId slot;
  std::string value;
  std::string rendering;
};

struct DependencyEntry {
  SlotId slot;         // trigger slot
  std::string value;   // trigger source value
  std::string rendering;
  std::vector<DependencyConsequent> consequents;
};

struct DependencyDictionary {
  std::vector<DependencyEntry> entries;

  static DependencyDictionary from_json(const Json& j);
  Json to_json() const;
  static DependencyDictionary load(const std::string& path);
  void save(const std::string& path) const;

  // Every listed value must exist in the source ontology and every rendering
  // in the target ontology; throws ValidationError otherwise.
  void validate(const Ontology& source, const Ontology& target) const;
};

enum class PlanStrategy { Dictionary, Identity, RandomFromOntology };

PlanStrategy plan_strategy_from_string(const std::string& name);
std::string to_string(PlanStrategy strategy);

// Value substitutions for one dialogue: functional source value → target
// value, dictionary-forced entries first, the rest per strategy.
struct SubstitutionPlan {
  std::map<std::string, std::string> value_map;
  uint64_t seed = 0;
  PlanStrategy strategy = PlanStrategy::RandomFromOntology;
};

struct PipelineConfig {
  std::string src_lang = "en";
  std::string tgt_lang = "de";
  AlignmentConfig align;
  bool align_enabled = true;  // false reproduces the no-alignment ablation
  uint64_t seed = 0;
  PlanStrategy strategy = PlanStrategy::RandomFromOntology;
  int jobs = 1;
};

SubstitutionPlan build_substitution_plan(const Dialogue& dialogue,
                                         const DependencyDictionary& dict,
                                         const Ontology& target_ontology,
                                         uint64_t seed,
                                         PlanStrategy strategy);

struct TranslatedUtterance {
  std::string text;
  std::vector<CharSpan> spans;     // aligned spans, offsets into `text`
  std::vector<CharSpan> failures;  // spans alignment could not place
  std::size_t numeric_hits = 0;
  std::size_t attention_alignments = 0;
  std::size_t requests = 0;
};

// Quote stripping, sentence-wise translation, numeric recovery with
// attention fallback; sentences rejoined with single spaces.
TranslatedUtterance translate_utterance(std::string_view utterance,
                                        const std::vector<CharSpan>& spans,
                                        TranslatorClient& client,
                                        const PipelineConfig& cfg,
                                        const std::string& id_prefix = "u");

struct PipelineFinding {
  std::string dialogue_id;
  int turn = -1;
  std::string speaker;  // "agent" | "user"
  std::string message;
};

struct PipelineTrace {
  std::size_t requests = 0;
  std::size_t numeric_hits = 0;
  std::size_t attention_alignments = 0;
  std::size_t alignment_failures = 0;
};

struct PipelineReport {
  PipelineTrace trace;
  std::vector<PipelineFinding> findings;
  std::vector<std::string> untranslated;  // dialogue ids left out of output

  Json to_json() const;
};

Dialogue translate_dialogue(const Dialogue& dialogue, TranslatorClient& client,
                            const SubstitutionPlan& plan,
                            const PipelineConfig& cfg,
                            const Ontology& target_ontology,
                            PipelineReport* report = nullptr);

// Per-dialogue plans (seed mixed with the dialogue id), data-parallel over
// dialogues per cfg.jobs; transport failures skip the dialogue and are
// recorded, the run continues.
Corpus translate_corpus(const Corpus& corpus, TranslatorClient& client,
                        const DependencyDictionary& dict,
                        const Ontology& target_ontology,
                        const PipelineConfig& cfg,
                        PipelineReport* report = nullptr);

struct FaithfulnessReport {
  std::size_t checked = 0;
  std::size_t matched = 0;
  std::vector<PipelineFinding> misses;

  double rate() const {
    return checked == 0 ? 1.0 : static_cast<double>(matched) / checked;
  }
  Json to_json() const;
};

// Every value entering the state at turn t must occur verbatim in turn t's
// agent or user utterance.
FaithfulnessReport measure_faithfulness(const Corpus& corpus);

// Scans for dictionary violations: a dialogue whose states contain a trigger
// rendering must render all consequents per the dictionary.
std::vector<PipelineFinding> check_dictionary_consistency(
    const Corpus& translated, const DependencyDictionary& dict);

}  // namespace wozloc

#endif  // WOZLOC_PIPELINE_HPP_
