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

#include <string>
#include <vector>

#include "wozloc/corpus.hpp"
#include "wozloc/errors.hpp"
#include "wozloc/pipeline.hpp"
#include "wozloc/synth.hpp"
#include "wozloc/text.hpp"
#include "wozloc/translator.hpp"

using namespace wozloc;

namespace {

Dialogue two_turn_dialogue() {
  Dialogue d;
  d.id = "dlg-x";
  d.language = "en";
  Turn t0;
  t0.index = 0;
  t0.user_utterance = "we would like fastfood food .";
  t0.gold_state.insert_or_assign({"restaurant", "food"},
                                 SlotValue::regular("fastfood"));
  Turn t1;
  t1.index = 1;
  t1.agent_utterance = "any price preference ?";
  t1.user_utterance = "ideally cheap options .";
  t1.gold_state = t0.gold_state;
  t1.gold_state.insert_or_assign({"restaurant", "pricerange"},
                                 SlotValue::regular("cheap"));
  d.turns = {t0, t1};
  return d;
}

}  // namespace

TEST_CASE("plan forces dictionary renderings for trigger and consequents") {
  Dialogue d = two_turn_dialogue();
  auto dict = synth::dependency_dictionary();
  auto target = synth::target_ontology();
  SubstitutionPlan plan = build_substitution_plan(
      d, dict, target, 7, PlanStrategy::RandomFromOntology);
  CHECK(plan.value_map.at("fastfood") == "schnellimbiss");
  CHECK(plan.value_map.at("cheap") == "guenstig");
}

TEST_CASE("plan never mints a trigger rendering for an unrelated value") {
  auto dict = synth::dependency_dictionary();
  auto target = synth::target_ontology();
  // Across many seeds, a non-fastfood food value must never draw the
  // reserved rendering of the fastfood trigger.
  Dialogue d = two_turn_dialogue();
  d.turns[0].gold_state.insert_or_assign({"restaurant", "food"},
                                         SlotValue::regular("korean"));
  d.turns[1].gold_state.insert_or_assign({"restaurant", "food"},
                                         SlotValue::regular("korean"));
  for (uint64_t seed = 0; seed < 200; ++seed) {
    SubstitutionPlan plan = build_substitution_plan(
        d, dict, target, seed, PlanStrategy::RandomFromOntology);
    CHECK(plan.value_map.at("korean") != "schnellimbiss");
  }
}

TEST_CASE("plan is deterministic per dialogue id and seed") {
  Dialogue d = two_turn_dialogue();
  auto dict = synth::dependency_dictionary();
  auto target = synth::target_ontology();
  auto p1 = build_substitution_plan(d, dict, target, 11,
                                    PlanStrategy::RandomFromOntology);
  auto p2 = build_substitution_plan(d, dict, target, 11,
                                    PlanStrategy::RandomFromOntology);
  CHECK(p1.value_map == p2.value_map);

  Dialogue other = d;
  other.id = "dlg-y";
  auto p3 = build_substitution_plan(other, dict, target, 11,
                                    PlanStrategy::RandomFromOntology);
  // Dictionary-forced entries agree either way.
  CHECK(p3.value_map.at("fastfood") == "schnellimbiss");
}

TEST_CASE("plan strategies: identity needs shared values, dictionary full cover") {
  Dialogue d = two_turn_dialogue();
  auto dict = synth::dependency_dictionary();
  auto target = synth::target_ontology();

  // fastfood and cheap are dictionary-covered, so identity succeeds on the
  // base dialogue; a source-only value (korean) must fail instead.
  CHECK_NOTHROW(build_substitution_plan(d, dict, target, 1,
                                        PlanStrategy::Identity));
  Dialogue korean = d;
  korean.turns[0].gold_state.insert_or_assign({"restaurant", "food"},
                                              SlotValue::regular("korean"));
  korean.turns[1].gold_state.insert_or_assign({"restaurant", "food"},
                                              SlotValue::regular("korean"));
  CHECK_THROWS_AS(build_substitution_plan(korean, dict, target, 1,
                                          PlanStrategy::Identity),
                  PlanError);
  CHECK_THROWS_AS(build_substitution_plan(d, DependencyDictionary{}, target, 1,
                                          PlanStrategy::Dictionary),
                  PlanError);

  // Budget values are shared between the ontologies, so identity works for a
  // dialogue that only mentions budget.
  Dialogue budget_only;
  budget_only.id = "dlg-b";
  Turn t;
  t.index = 0;
  t.user_utterance = "around 200-300 please .";
  t.gold_state.insert_or_assign({"restaurant", "budget"},
                                SlotValue::regular("200-300"));
  budget_only.turns = {t};
  auto plan = build_substitution_plan(budget_only, DependencyDictionary{},
                                      target, 1, PlanStrategy::Identity);
  CHECK(plan.value_map.at("200-300") == "200-300");
}

TEST_CASE("conflicting dictionary renderings raise PlanError") {
  DependencyDictionary dict;
  DependencyEntry a;
  a.slot = {"restaurant", "food"};
  a.value = "fastfood";
  a.rendering = "schnellimbiss";
  a.consequents.push_back({{"restaurant", "pricerange"}, "cheap", "guenstig"});
  DependencyEntry b;
  b.slot = {"restaurant", "area"};
  b.value = "north";
  b.rendering = "norden";
  b.consequents.push_back({{"restaurant", "pricerange"}, "cheap", "teuer"});
  dict.entries = {a, b};

  Dialogue d = two_turn_dialogue();
  d.turns[1].gold_state.insert_or_assign({"restaurant", "area"},
                                         SlotValue::regular("north"));
  CHECK_THROWS_AS(build_substitution_plan(d, dict, synth::target_ontology(), 1,
                                          PlanStrategy::RandomFromOntology),
                  PlanError);
}

TEST_CASE("dictionary validate cross-checks both ontologies") {
  auto dict = synth::dependency_dictionary();
  CHECK_NOTHROW(dict.validate(synth::source_ontology(), synth::target_ontology()));
  // Swapped arguments: renderings are not source values.
  CHECK_THROWS_AS(dict.validate(synth::target_ontology(), synth::source_ontology()),
                  ValidationError);
}

TEST_CASE("dictionary file round trip") {
  auto dict = synth::dependency_dictionary();
  auto back = DependencyDictionary::from_json(dict.to_json());
  REQUIRE(back.entries.size() == dict.entries.size());
  CHECK(back.entries[0].value == dict.entries[0].value);
  CHECK(back.entries[0].consequents.size() == dict.entries[0].consequents.size());
}

TEST_CASE("translate_dialogue keeps values verbatim and rewrites states") {
  Dialogue d = two_turn_dialogue();
  auto dict = synth::dependency_dictionary();
  auto target = synth::target_ontology();
  SubstitutionPlan plan = build_substitution_plan(
      d, dict, target, 3, PlanStrategy::RandomFromOntology);

  MockTranslator mock(synth::mock_config(5, false));
  PipelineConfig cfg;
  cfg.seed = 3;
  PipelineReport report;
  Dialogue out = translate_dialogue(d, mock, plan, cfg, target, &report);

  REQUIRE(out.turns.size() == 2);
  // The dictionary renderings appear verbatim in the rewritten text.
  CHECK(out.turns[0].user_utterance.find("schnellimbiss") != std::string::npos);
  CHECK(out.turns[1].user_utterance.find("guenstig") != std::string::npos);
  // States carry the same renderings.
  CHECK(out.turns[0].gold_state.at({"restaurant", "food"}).text ==
        "schnellimbiss");
  CHECK(out.turns[1].gold_state.at({"restaurant", "pricerange"}).text ==
        "guenstig");
  // No quote marks survive into the output text.
  CHECK(out.turns[0].user_utterance.find('"') == std::string::npos);
  CHECK(report.trace.alignment_failures == 0);
}

TEST_CASE("translate_corpus end to end: faithfulness, dictionary, ablation") {
  Corpus corpus = synth::make_clean_corpus({12, 8, 21, "train"});
  auto dict = synth::dependency_dictionary();
  auto target = synth::target_ontology();

  MockTranslator clean_mock(synth::mock_config(2, false));
  PipelineConfig cfg;
  cfg.seed = 17;
  PipelineReport report;
  Corpus translated =
      translate_corpus(corpus, clean_mock, dict, target, cfg, &report);
  CHECK(translated.dialogues.size() == corpus.dialogues.size());
  CHECK(report.untranslated.empty());

  FaithfulnessReport faith = measure_faithfulness(translated);
  CHECK(faith.rate() == 1.0);
  CHECK(check_dictionary_consistency(translated, dict).empty());

  // Noisy mock with alignment still faithful: protected spans survive.
  MockTranslator noisy_mock(synth::mock_config(2, true));
  PipelineReport noisy_report;
  Corpus noisy_translated =
      translate_corpus(corpus, noisy_mock, dict, target, cfg, &noisy_report);
  CHECK(measure_faithfulness(noisy_translated).rate() == 1.0);

  // Ablation: no alignment, noisy mock: faithfulness collapses.
  PipelineConfig ablated = cfg;
  ablated.align_enabled = false;
  PipelineReport ablated_report;
  Corpus ablated_translated =
      translate_corpus(corpus, noisy_mock, dict, target, ablated, &ablated_report);
  CHECK(measure_faithfulness(ablated_translated).rate() < 0.5);
  CHECK(ablated_report.trace.requests > 0);
  CHECK(ablated_report.trace.numeric_hits == 0);
  CHECK(ablated_report.trace.attention_alignments == 0);
}

TEST_CASE("translate_corpus is deterministic and jobs-invariant") {
  Corpus corpus = synth::make_clean_corpus({8, 8, 4, "train"});
  auto dict = synth::dependency_dictionary();
  auto target = synth::target_ontology();
  MockTranslator mock(synth::mock_config(6, false));

  PipelineConfig cfg;
  cfg.seed = 2;
  Corpus a = translate_corpus(corpus, mock, dict, target, cfg);
  Corpus b = translate_corpus(corpus, mock, dict, target, cfg);
  PipelineConfig parallel = cfg;
  parallel.jobs = 8;
  Corpus c = translate_corpus(corpus, mock, dict, target, parallel);

  CHECK(corpus_to_json(a) == corpus_to_json(b));
  CHECK(corpus_to_json(a) == corpus_to_json(c));
}

TEST_CASE("measure_faithfulness counts only newly entering values") {
  Corpus corpus;
  corpus.split = "test";
  corpus.ontology.add_slot({"r", "food"}, {"korean", "vegan"});
  Dialogue d;
  d.id = "f1";
  Turn t0;
  t0.index = 0;
  t0.user_utterance = "korean please";
  t0.gold_state.insert_or_assign({"r", "food"}, SlotValue::regular("korean"));
  Turn t1;
  t1.index = 1;
  t1.agent_utterance = "noted";
  t1.user_utterance = "thanks";  // carried value needs no re-mention
  t1.gold_state = t0.gold_state;
  d.turns = {t0, t1};
  corpus.dialogues.push_back(d);

  FaithfulnessReport faith = measure_faithfulness(corpus);
  CHECK(faith.checked == 1);
  CHECK(faith.matched == 1);
  CHECK(faith.rate() == 1.0);

  // A value entering without a mention is a miss, reported with its turn.
  corpus.dialogues[0].turns[1].gold_state.insert_or_assign(
      {"r", "food"}, SlotValue::regular("vegan"));
  faith = measure_faithfulness(corpus);
  CHECK(faith.checked == 2);
  CHECK(faith.matched == 1);
  REQUIRE(faith.misses.size() == 1);
  CHECK(faith.misses[0].turn == 1);
}

TEST_CASE("pipeline errors carry dialogue context in the report") {
  // A client that always fails transport-wise.
  class FailingClient : public TranslatorClient {
   public:
    TranslatorResponse translate(const TranslatorRequest&) override {
      throw PipelineError("socket closed");
    }
  };
  Corpus corpus = synth::make_clean_corpus({2, 8, 1, "train"});
  FailingClient client;
  PipelineConfig cfg;
  PipelineReport report;
  Corpus out = translate_corpus(corpus, client, synth::dependency_dictionary(),
                                synth::target_ontology(), cfg, &report);
  CHECK(out.dialogues.empty());
  CHECK(report.untranslated.size() == 2);
  CHECK_FALSE(report.findings.empty());
}
