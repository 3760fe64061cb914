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

#include "wozloc/synth.hpp"

#include <algorithm>
#include <iomanip>
#include <optional>
#include <sstream>
#include <tuple>

#include "wozloc/errors.hpp"
#include "wozloc/rng.hpp"
#include "wozloc/text.hpp"

namespace wozloc::synth {

namespace {

const SlotId kFood{"restaurant", "food"};
const SlotId kArea{"restaurant", "area"};
const SlotId kPrice{"restaurant", "pricerange"};
const SlotId kBudget{"restaurant", "budget"};
const SlotId kType{"hotel", "type"};
const SlotId kDistrict{"hotel", "district"};
const SlotId kTier{"hotel", "tier"};

// Vocabularies are chosen pairwise >= 2 edit distance apart (the lint
// near-miss detectors work at distance 1); "opulent" and "ornate" are
// reserved for planted defects and never used by the clean generator.
const std::vector<std::string> kFoods = {
    "korean",   "mexican", "vegan",   "persian",  "turkish",
    "lebanese", "hotpot",  "seafood", "fastfood",
};
const std::vector<std::string> kAreas = {"north", "south", "centre", "east",
                                         "west"};
const std::vector<std::string> kPrices = {"cheap", "expensive", "moderate",
                                          "premium", "opulent"};
const std::vector<std::string> kBudgets = {"200-300", "400-500", "600-700",
                                           "110-300", "120-300"};
const std::vector<std::string> kTypes = {"guesthouse", "hostel", "resort",
                                         "villa"};
const std::vector<std::string> kDistricts = {"riverside", "uptown", "harbor",
                                             "oldtown"};
const std::vector<std::string> kTiers = {"basic", "deluxe", "superior",
                                         "ornate"};

// Values the generator actually draws; the tail entries above are reserves
// (planted-defect vocabulary, range-expansion results).
constexpr std::size_t kDrawnPrices = 4;
constexpr std::size_t kDrawnBudgets = 3;
constexpr std::size_t kDrawnTiers = 3;

std::string to_letters(std::size_t n) {
  std::string s;
  do {
    s.push_back(static_cast<char>('a' + n % 26));
    n /= 26;
  } while (n > 0);
  while (s.size() < 3) s.push_back('a');
  std::reverse(s.begin(), s.end());
  return s;
}

// Unique per-corpus tokens keep every (agent, user) pair distinct; the "zq"
// prefix keeps them far from every vocabulary word.
struct RefSource {
  std::string prefix = "zq";
  std::size_t next_index = 0;

  std::string next() { return prefix + to_letters(next_index++); }
};

std::vector<std::tuple<int, SlotId, std::string>> introductions(
    const Dialogue& dialogue) {
  std::vector<std::tuple<int, SlotId, std::string>> intros;
  BeliefState prev;
  for (const auto& turn : dialogue.turns) {
    for (const auto& [id, value] : diff_states(prev, turn.gold_state).set)
      if (value.kind == SlotValue::Kind::Regular)
        intros.emplace_back(turn.index, id, value.text);
    prev = turn.gold_state;
  }
  return intros;
}

void splice_first(std::string& haystack, const std::string& from,
                  const std::string& to) {
  auto occurrences = text::find_occurrences(haystack, from);
  if (occurrences.empty())
    throw ValidationError("fixture plant: '" + from + "' not found in '" +
                          haystack + "'");
  haystack = haystack.substr(0, occurrences[0]) + to +
             haystack.substr(occurrences[0] + from.size());
}

bool is_restaurant(const Dialogue& dialogue) {
  for (const auto& turn : dialogue.turns)
    for (const auto& [id, value] : turn.gold_state)
      if (id.domain == "restaurant") return true;
  return false;
}

// The area/district assignment introduced at turn 2, when it is a regular
// value (dontcare dialogues are ineligible for the move-based plants).
std::optional<std::pair<SlotId, std::string>> turn2_intro(
    const Dialogue& dialogue) {
  for (const auto& [turn, id, value] : introductions(dialogue))
    if (turn == 2) return std::make_pair(id, value);
  return std::nullopt;
}

Dialogue make_restaurant_dialogue(const std::string& id, std::size_t turns,
                                  Rng& rng, RefSource& refs) {
  const std::string food = kFoods[rng.below(kFoods.size())];
  const bool dontcare_area = rng.below(4) == 0;
  const std::string area = kAreas[rng.below(kAreas.size())];
  const std::string price =
      food == "fastfood" ? "cheap" : kPrices[rng.below(kDrawnPrices)];
  const std::string budget = kBudgets[rng.below(kDrawnBudgets)];

  Dialogue dialogue;
  dialogue.id = id;
  dialogue.language = "en";
  BeliefState state;
  for (std::size_t t = 0; t < turns; ++t) {
    Turn turn;
    turn.index = static_cast<int>(t);
    if (t == 0) {
      turn.user_utterance = "hello there ref " + refs.next() +
                            " i am looking for a place to eat .";
    } else if (t + 1 == turns) {
      turn.agent_utterance = "all set enjoy your meal ref " + refs.next() + " .";
      turn.user_utterance = "perfect goodbye ref " + refs.next() + " .";
    } else if (t == 1) {
      turn.agent_utterance =
          "which cuisine should it be ref " + refs.next() + " ?";
      turn.user_utterance =
          "we would like " + food + " food ref " + refs.next() + " .";
      state.emplace(kFood, SlotValue::regular(food));
    } else if (t == 2) {
      turn.agent_utterance =
          "noted ref " + refs.next() + " which part of town suits you ?";
      if (dontcare_area) {
        turn.user_utterance =
            "any part of town works for us ref " + refs.next() + " .";
        state.emplace(kArea, SlotValue::dontcare());
      } else {
        turn.user_utterance =
            "somewhere in the " + area + " please ref " + refs.next() + " .";
        state.emplace(kArea, SlotValue::regular(area));
      }
    } else if (t == 4) {
      turn.agent_utterance = "any price preference ref " + refs.next() + " ?";
      turn.user_utterance =
          "ideally " + price + " options ref " + refs.next() + " .";
      state.emplace(kPrice, SlotValue::regular(price));
    } else if (t == 5) {
      turn.agent_utterance =
          "here are some places to compare ref " + refs.next() + " .";
      turn.user_utterance = "my budget sits at " + budget + " per person ref " +
                            refs.next() + " . that is firm .";
      state.emplace(kBudget, SlotValue::regular(budget));
    } else {
      turn.agent_utterance =
          "one moment while i check ref " + refs.next() + " .";
      turn.user_utterance = "thank you kindly ref " + refs.next() + " .";
    }
    turn.gold_state = state;
    dialogue.turns.push_back(std::move(turn));
  }
  return dialogue;
}

Dialogue make_hotel_dialogue(const std::string& id, std::size_t turns, Rng& rng,
                             RefSource& refs) {
  const std::string type = kTypes[rng.below(kTypes.size())];
  const std::string district = kDistricts[rng.below(kDistricts.size())];
  const std::string tier = kTiers[rng.below(kDrawnTiers)];

  Dialogue dialogue;
  dialogue.id = id;
  dialogue.language = "en";
  BeliefState state;
  for (std::size_t t = 0; t < turns; ++t) {
    Turn turn;
    turn.index = static_cast<int>(t);
    if (t == 0) {
      turn.user_utterance =
          "hello ref " + refs.next() + " i need a place to stay tonight .";
    } else if (t + 1 == turns) {
      turn.agent_utterance = "reserved for you ref " + refs.next() + " .";
      turn.user_utterance = "wonderful goodbye ref " + refs.next() + " .";
    } else if (t == 1) {
      turn.agent_utterance =
          "what style of lodging do you prefer ref " + refs.next() + " ?";
      turn.user_utterance =
          "a cozy " + type + " would be lovely ref " + refs.next() + " .";
      state.emplace(kType, SlotValue::regular(type));
    } else if (t == 2) {
      turn.agent_utterance =
          "which quarter of the city ref " + refs.next() + " ?";
      turn.user_utterance =
          "put us near the " + district + " ref " + refs.next() + " .";
      state.emplace(kDistrict, SlotValue::regular(district));
    } else if (t == 4) {
      turn.agent_utterance =
          "and what comfort level ref " + refs.next() + " ?";
      turn.user_utterance =
          "go with " + tier + " comfort ref " + refs.next() + " .";
      state.emplace(kTier, SlotValue::regular(tier));
    } else {
      turn.agent_utterance =
          "searching the listings now ref " + refs.next() + " .";
      turn.user_utterance = "take your time ref " + refs.next() + " .";
    }
    turn.gold_state = state;
    dialogue.turns.push_back(std::move(turn));
  }
  return dialogue;
}

Finding expect(FindingKind kind, const std::string& dialogue_id, int turn,
               std::optional<SlotId> slot, std::string value) {
  Finding f;
  f.kind = kind;
  f.dialogue_id = dialogue_id;
  f.turn = turn;
  f.slot = std::move(slot);
  f.value = std::move(value);
  return f;
}

// Every plant returns the findings it guarantees; std::nullopt when the
// dialogue is not eligible for this defect kind.

std::optional<Finding> plant_inexact_match(Dialogue& dialogue) {
  auto intros = introductions(dialogue);
  if (intros.empty()) return std::nullopt;
  const auto& [turn, slot, value] = intros.front();
  std::string corrupted = value;
  corrupted[0] = static_cast<char>(corrupted[0] + 1);
  splice_first(dialogue.turns[turn].user_utterance, value, corrupted);
  return expect(FindingKind::InexactMatch, dialogue.id, turn, slot, value);
}

std::optional<Finding> plant_missing_slot(Dialogue& dialogue) {
  auto intro = turn2_intro(dialogue);
  if (!intro) return std::nullopt;
  for (auto& turn : dialogue.turns) turn.gold_state.erase(intro->first);
  return expect(FindingKind::MissingSlot, dialogue.id, 2, intro->first,
                intro->second);
}

std::optional<Finding> plant_extra_slot(Dialogue& dialogue) {
  const bool restaurant = is_restaurant(dialogue);
  const SlotId slot = restaurant ? kPrice : kTier;
  const std::string reserve = restaurant ? "opulent" : "ornate";
  dialogue.turns[3].gold_state.emplace(slot, SlotValue::regular(reserve));
  return expect(FindingKind::ExtraSlot, dialogue.id, 3, slot, reserve);
}

std::optional<Finding> plant_delayed_annotation(Dialogue& dialogue) {
  auto intro = turn2_intro(dialogue);
  if (!intro) return std::nullopt;
  dialogue.turns[2].gold_state.erase(intro->first);
  return expect(FindingKind::DelayedAnnotation, dialogue.id, 2, intro->first,
                intro->second);
}

std::optional<Finding> plant_empty_annotation(Dialogue& dialogue) {
  dialogue.turns[3].gold_state.clear();
  return expect(FindingKind::EmptyAnnotation, dialogue.id, 3, std::nullopt,
                "");
}

std::optional<Finding> plant_range_anomaly(Dialogue& dialogue,
                                           RefSource& refs) {
  if (!is_restaurant(dialogue)) return std::nullopt;
  auto it = dialogue.turns[5].gold_state.find(kBudget);
  if (it == dialogue.turns[5].gold_state.end() ||
      it->second.kind != SlotValue::Kind::Regular)
    return std::nullopt;

  // Pin the starting range, expand it legitimately (the agent quotes 115, so
  // 200-300 widens to 110-300), then shift the low bound with no supporting
  // number in the agent turn.
  splice_first(dialogue.turns[5].user_utterance, it->second.text, "200-300");
  for (std::size_t t = 5; t < dialogue.turns.size(); ++t)
    dialogue.turns[t].gold_state[kBudget] = SlotValue::regular("200-300");

  Turn& expand = dialogue.turns[6];
  expand.agent_utterance =
      "we found a great fit at 115 in total ref " + refs.next() + " .";
  expand.user_utterance = "then adjust the budget please ref " + refs.next() + " .";
  for (std::size_t t = 6; t < dialogue.turns.size(); ++t)
    dialogue.turns[t].gold_state[kBudget] = SlotValue::regular("110-300");

  Turn& anomaly = dialogue.turns[7];
  anomaly.agent_utterance =
      "confirming everything now ref " + refs.next() + " .";
  anomaly.user_utterance = "great goodbye then ref " + refs.next() + " .";
  for (std::size_t t = 7; t < dialogue.turns.size(); ++t)
    dialogue.turns[t].gold_state[kBudget] = SlotValue::regular("120-300");

  return expect(FindingKind::RangeAnomaly, dialogue.id, 7, kBudget, "120-300");
}

std::optional<Finding> plant(FindingKind kind, Dialogue& dialogue,
                             RefSource& refs) {
  switch (kind) {
    case FindingKind::InexactMatch:
      return plant_inexact_match(dialogue);
    case FindingKind::MissingSlot:
      return plant_missing_slot(dialogue);
    case FindingKind::ExtraSlot:
      return plant_extra_slot(dialogue);
    case FindingKind::DelayedAnnotation:
      return plant_delayed_annotation(dialogue);
    case FindingKind::EmptyAnnotation:
      return plant_empty_annotation(dialogue);
    case FindingKind::RangeAnomaly:
      return plant_range_anomaly(dialogue, refs);
  }
  return std::nullopt;
}

void require_plantable(const CorpusSpec& spec) {
  if (spec.turns < 8)
    throw UsageError("planted fixtures need at least 8 turns per dialogue");
}

}  // namespace

Ontology source_ontology() {
  Ontology o;
  o.add_slot(kFood, kFoods);
  o.add_slot(kArea, kAreas);
  o.add_slot(kPrice, kPrices);
  o.add_slot(kBudget, kBudgets);
  o.add_slot(kType, kTypes);
  o.add_slot(kDistrict, kDistricts);
  o.add_slot(kTier, kTiers);
  return o;
}

Ontology target_ontology() {
  Ontology o;
  o.add_slot(kFood,
             {"koreanisch", "mexikanisch", "veganisch", "persisch",
              "tuerkisch", "libanesisch", "eintopf", "meeresfrucht",
              "schnellimbiss"});
  o.add_slot(kArea, {"norden", "sueden", "zentrum", "osten", "westen"});
  o.add_slot(kPrice, {"guenstig", "teuer", "mittel", "edel"});
  o.add_slot(kBudget, kBudgets);
  o.add_slot(kType, {"pension", "herberge", "ferienhof", "landhaus"});
  o.add_slot(kDistrict, {"flussufer", "oberstadt", "hafen", "altstadt"});
  o.add_slot(kTier, {"einfach", "nobel", "klassik"});
  return o;
}

DependencyDictionary dependency_dictionary() {
  DependencyDictionary dict;
  DependencyEntry entry;
  entry.slot = kFood;
  entry.value = "fastfood";
  entry.rendering = "schnellimbiss";
  entry.consequents.push_back({kPrice, "cheap", "guenstig"});
  dict.entries.push_back(std::move(entry));
  return dict;
}

std::map<std::string, std::string> word_map() {
  return {
      {"i", "ich"},        {"we", "wir"},       {"you", "du"},
      {"the", "die"},      {"a", "ein"},        {"in", "im"},
      {"for", "fuer"},     {"at", "um"},        {"is", "ist"},
      {"would", "wuerde"}, {"like", "moegen"},  {"need", "brauche"},
      {"place", "ort"},    {"eat", "essen"},    {"stay", "bleiben"},
      {"hello", "hallo"},  {"there", "dort"},   {"looking", "suche"},
      {"which", "welche"}, {"part", "teil"},    {"of", "von"},
      {"town", "stadt"},   {"please", "bitte"}, {"thank", "danke"},
      {"goodbye", "tschuess"},                  {"budget", "etat"},
      {"price", "preis"},  {"options", "auswahl"},
      {"cuisine", "kueche"},                    {"moment", "augenblick"},
  };
}

MockTranslatorConfig mock_config(uint64_t seed, bool noisy) {
  MockTranslatorConfig cfg;
  cfg.word_map = word_map();
  for (const auto& value : source_ontology().all_values())
    cfg.entity_vocab.insert(value);
  cfg.seed = seed;
  cfg.noisy = noisy;
  cfg.permutation = "seeded";
  return cfg;
}

Corpus make_clean_corpus(const CorpusSpec& spec) {
  if (spec.turns < 2)
    throw UsageError("synthetic dialogues need at least 2 turns");
  Corpus corpus;
  corpus.split = spec.split;
  corpus.ontology = source_ontology();
  RefSource refs;
  for (std::size_t i = 0; i < spec.dialogues; ++i) {
    std::ostringstream id;
    id << "dlg-" << std::setw(4) << std::setfill('0') << i;
    Rng rng(mix_seed(spec.seed, i));
    Dialogue dialogue =
        i % 2 == 0 ? make_restaurant_dialogue(id.str(), spec.turns, rng, refs)
                   : make_hotel_dialogue(id.str(), spec.turns, rng, refs);
    // The first dialogue always exercises the dependency dictionary.
    if (i == 0 && spec.turns > 4) {
      splice_first(dialogue.turns[1].user_utterance,
                   std::get<2>(introductions(dialogue).front()), "fastfood");
      auto price_it = dialogue.turns[4].gold_state.find(kPrice);
      std::string old_price = price_it == dialogue.turns[4].gold_state.end()
                                  ? ""
                                  : price_it->second.text;
      if (!old_price.empty() && old_price != "cheap")
        splice_first(dialogue.turns[4].user_utterance, old_price, "cheap");
      for (auto& turn : dialogue.turns) {
        auto food_it = turn.gold_state.find(kFood);
        if (food_it != turn.gold_state.end())
          food_it->second = SlotValue::regular("fastfood");
        auto it = turn.gold_state.find(kPrice);
        if (it != turn.gold_state.end())
          it->second = SlotValue::regular("cheap");
      }
    }
    corpus.dialogues.push_back(std::move(dialogue));
  }
  return corpus;
}

LintConfig default_lint_config() {
  LintConfig cfg;
  cfg.inferable_slots.insert(kBudget);
  cfg.max_edit_distance = 1;
  return cfg;
}

PlantedCorpus make_planted_corpus(FindingKind kind, const CorpusSpec& spec) {
  require_plantable(spec);
  PlantedCorpus out;
  out.corpus = make_clean_corpus(spec);
  RefSource refs{"zz", 0};
  std::size_t eligible = 0;
  for (auto& dialogue : out.corpus.dialogues) {
    Dialogue probe = dialogue;
    auto finding = plant(kind, probe, refs);
    if (!finding) continue;
    if (eligible++ % 2 == 0) {
      dialogue = std::move(probe);
      out.expected.push_back(std::move(*finding));
    }
  }
  return out;
}

PlantedCorpus make_mixed_corpus(const CorpusSpec& spec) {
  require_plantable(spec);
  if (spec.dialogues < 7)
    throw UsageError("mixed fixture needs at least 7 dialogues");
  PlantedCorpus out;
  out.corpus = make_clean_corpus(spec);
  RefSource refs{"zz", 0};
  // Restaurant dialogues sit at even indices; the move-based plants land on
  // hotels, which always carry a regular turn-2 value.
  const std::vector<std::pair<FindingKind, std::size_t>> placement = {
      {FindingKind::InexactMatch, 0},   {FindingKind::MissingSlot, 1},
      {FindingKind::ExtraSlot, 2},      {FindingKind::DelayedAnnotation, 3},
      {FindingKind::EmptyAnnotation, 4}, {FindingKind::RangeAnomaly, 6},
  };
  for (const auto& [kind, index] : placement) {
    auto finding = plant(kind, out.corpus.dialogues[index], refs);
    if (!finding)
      throw ValidationError("mixed fixture: dialogue " + std::to_string(index) +
                            " cannot host " + to_string(kind));
    out.expected.push_back(std::move(*finding));
  }
  return out;
}

Corpus make_eval_corpus(std::size_t dialogues, uint64_t seed) {
  CorpusSpec spec;
  spec.dialogues = dialogues;
  spec.turns = 4;
  spec.seed = seed;
  spec.split = "test";
  return make_clean_corpus(spec);
}

}  // namespace wozloc::synth
