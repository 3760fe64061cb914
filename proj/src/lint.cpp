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

#include "wozloc/lint.hpp"

#include <algorithm>
#include <sstream>

#include "wozloc/rng.hpp"
#include "wozloc/text.hpp"

namespace wozloc {

namespace {

// Per-dialogue view with the combined per-turn text and each turn's value
// introductions, shared by the detectors.
struct DialogueView {
  const Dialogue* dialogue = nullptr;
  std::vector<std::string> texts;  // agent + "\n" + user per turn
  // (turn, slot, value) of every Regular value entering the state there.
  std::vector<std::tuple<int, SlotId, std::string>> introductions;
};

std::vector<DialogueView> make_views(const Corpus& corpus) {
  std::vector<DialogueView> views;
  views.reserve(corpus.dialogues.size());
  for (const auto& dialogue : corpus.dialogues) {
    DialogueView view;
    view.dialogue = &dialogue;
    BeliefState prev;
    for (const auto& turn : dialogue.turns) {
      view.texts.push_back(turn.agent_utterance + "\n" + turn.user_utterance);
      for (const auto& [id, value] :
           diff_states(prev, turn.gold_state).set) {
        if (value.kind == SlotValue::Kind::Regular)
          view.introductions.emplace_back(turn.index, id, value.text);
      }
      prev = turn.gold_state;
    }
    views.push_back(std::move(view));
  }
  return views;
}

bool occurs(const std::string& haystack, const std::string& needle) {
  return !text::find_occurrences(haystack, needle).empty();
}

bool occurs_up_to(const DialogueView& view, int turn,
                  const std::string& needle) {
  for (int t = 0; t <= turn; ++t)
    if (occurs(view.texts[t], needle)) return true;
  return false;
}

std::vector<long long> extract_integers(const std::string& s) {
  std::vector<long long> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      std::size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
        ++i;
      if (i - start <= 9) out.push_back(std::stoll(s.substr(start, i - start)));
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace

std::string to_string(FindingKind kind) {
  switch (kind) {
    case FindingKind::InexactMatch:
      return "InexactMatch";
    case FindingKind::MissingSlot:
      return "MissingSlot";
    case FindingKind::ExtraSlot:
      return "ExtraSlot";
    case FindingKind::DelayedAnnotation:
      return "DelayedAnnotation";
    case FindingKind::EmptyAnnotation:
      return "EmptyAnnotation";
    case FindingKind::RangeAnomaly:
      return "RangeAnomaly";
  }
  return "?";
}

Json Finding::to_json() const {
  Json j;
  j["kind"] = to_string(kind);
  j["dialogue"] = dialogue_id;
  j["turn"] = turn;
  if (slot) {
    j["domain"] = slot->domain;
    j["slot"] = slot->slot;
  }
  j["value"] = value;
  j["evidence"] = evidence;
  return j;
}

std::vector<Finding> detect_inexact_match(const Corpus& corpus,
                                          const LintConfig& cfg) {
  std::vector<Finding> findings;
  for (const auto& view : make_views(corpus)) {
    for (const auto& [turn, id, value] : view.introductions) {
      if (text::decode_utf8(value).size() < 2) continue;
      if (occurs_up_to(view, turn, value)) continue;
      std::optional<text::NearMiss> best;
      for (int t = 0; t <= turn; ++t) {
        auto near = text::min_substring_distance(value, view.texts[t],
                                                 cfg.max_edit_distance);
        if (near && (!best || near->distance < best->distance)) best = near;
      }
      if (!best) continue;
      findings.push_back({FindingKind::InexactMatch, view.dialogue->id, turn,
                          id, value,
                          "nearest utterance match '" + best->match +
                              "' at edit distance " +
                              std::to_string(best->distance)});
    }
  }
  return findings;
}

std::vector<Finding> detect_missing_slot(const Corpus& corpus,
                                         const LintConfig& cfg) {
  (void)cfg;
  std::vector<Finding> findings;
  for (const auto& view : make_views(corpus)) {
    const auto& turns = view.dialogue->turns;
    std::set<std::pair<SlotId, std::string>> reported;
    for (std::size_t t = 0; t < turns.size(); ++t) {
      for (const auto& slot : corpus.ontology.slots()) {
        for (const auto& value : corpus.ontology.values(slot)) {
          if (reported.count({slot, value})) continue;
          if (!occurs(view.texts[t], value)) continue;
          // Conservative rule: the slot never enters the state from the
          // mention onward, and the value is not annotated under any other
          // slot either (shared value sets would misfire otherwise).
          bool slot_seen = false;
          bool value_seen = false;
          for (std::size_t later = t; later < turns.size(); ++later) {
            const auto& state = turns[later].gold_state;
            if (state.count(slot)) slot_seen = true;
            for (const auto& [other, held] : state)
              if (held.kind == SlotValue::Kind::Regular && held.text == value)
                value_seen = true;
          }
          if (slot_seen || value_seen) continue;
          reported.insert({slot, value});
          findings.push_back({FindingKind::MissingSlot, view.dialogue->id,
                              static_cast<int>(t), slot, value,
                              "mentioned but never annotated"});
        }
      }
    }
  }
  return findings;
}

std::vector<Finding> detect_extra_slot(const Corpus& corpus,
                                       const LintConfig& cfg) {
  std::vector<Finding> findings;
  for (const auto& view : make_views(corpus)) {
    for (const auto& [turn, id, value] : view.introductions) {
      if (cfg.inferable_slots.count(id)) continue;
      if (occurs_up_to(view, turn, value)) continue;
      bool near_miss = false;
      for (int t = 0; t <= turn && !near_miss; ++t)
        near_miss = text::min_substring_distance(value, view.texts[t],
                                                 cfg.max_edit_distance)
                        .has_value();
      if (near_miss) continue;  // InexactMatch territory
      findings.push_back({FindingKind::ExtraSlot, view.dialogue->id, turn, id,
                          value, "value never mentioned up to this turn"});
    }
  }
  return findings;
}

std::vector<Finding> detect_delayed_annotation(const Corpus& corpus,
                                               const LintConfig& cfg) {
  (void)cfg;
  std::vector<Finding> findings;
  for (const auto& view : make_views(corpus)) {
    const auto& turns = view.dialogue->turns;
    for (const auto& [intro_turn, id, value] : view.introductions) {
      if (occurs(view.texts[intro_turn], value)) continue;
      // Latest mention before the introduction; an intervening mention means
      // the annotation matches its own turn.
      for (int t = intro_turn - 1; t >= 0; --t) {
        if (!occurs(view.texts[t], value)) continue;
        if (turns[t].gold_state.count(id)) break;  // slot already tracked
        findings.push_back({FindingKind::DelayedAnnotation, view.dialogue->id,
                            t, id, value,
                            "annotated only at turn " +
                                std::to_string(intro_turn)});
        break;
      }
    }
  }
  return findings;
}

std::vector<Finding> detect_empty_annotation(const Corpus& corpus,
                                             const LintConfig& cfg) {
  (void)cfg;
  std::vector<Finding> findings;
  for (const auto& dialogue : corpus.dialogues) {
    for (std::size_t t = 1; t + 1 < dialogue.turns.size(); ++t) {
      if (dialogue.turns[t].gold_state.empty() &&
          !dialogue.turns[t - 1].gold_state.empty()) {
        findings.push_back({FindingKind::EmptyAnnotation, dialogue.id,
                            static_cast<int>(t), std::nullopt, "",
                            "state reset mid-dialogue"});
      }
    }
  }
  return findings;
}

std::vector<Finding> detect_range_anomaly(const Corpus& corpus,
                                          const LintConfig& cfg) {
  (void)cfg;
  std::vector<Finding> findings;
  for (const auto& dialogue : corpus.dialogues) {
    for (std::size_t t = 1; t < dialogue.turns.size(); ++t) {
      const auto& prev_state = dialogue.turns[t - 1].gold_state;
      const auto& next_state = dialogue.turns[t].gold_state;
      for (const auto& [id, next_value] : next_state) {
        if (next_value.kind != SlotValue::Kind::Regular) continue;
        auto prev_it = prev_state.find(id);
        if (prev_it == prev_state.end() ||
            prev_it->second.kind != SlotValue::Kind::Regular)
          continue;
        if (prev_it->second.text == next_value.text) continue;
        auto prev_range = parse_range(prev_it->second.text);
        auto next_range = parse_range(next_value.text);
        if (!prev_range || !next_range) continue;
        auto integers = extract_integers(dialogue.turns[t].agent_utterance);
        bool explained = false;
        for (long long n : integers)
          if (expand_range(*prev_range, n) == *next_range) {
            explained = true;
            break;
          }
        if (explained) continue;
        std::ostringstream evidence;
        evidence << "range changed " << prev_it->second.text << " -> "
                 << next_value.text << "; agent integers:";
        for (long long n : integers) evidence << ' ' << n;
        findings.push_back({FindingKind::RangeAnomaly, dialogue.id,
                            static_cast<int>(t), id, next_value.text,
                            evidence.str()});
      }
    }
  }
  return findings;
}

InferredSlotStats inferred_slot_stats(const Corpus& corpus) {
  InferredSlotStats stats;
  for (const auto& dialogue : corpus.dialogues) {
    std::string all_text;
    std::string agent_text;
    for (const auto& turn : dialogue.turns) {
      all_text += turn.agent_utterance + "\n" + turn.user_utterance + "\n";
      agent_text += turn.agent_utterance + "\n";
    }
    std::set<std::pair<SlotId, std::string>> assignments;
    for (const auto& turn : dialogue.turns)
      for (const auto& [id, value] : turn.gold_state)
        if (value.kind == SlotValue::Kind::Regular)
          assignments.insert({id, value.text});
    for (const auto& [id, value] : assignments) {
      auto& share = stats.inferred[id];
      ++share.total;
      if (!occurs(all_text, value)) ++share.inferred;
    }
    for (const auto& slot : corpus.ontology.slots()) {
      for (const auto& value : corpus.ontology.values(slot)) {
        if (!occurs(agent_text, value)) continue;
        auto& uptake = stats.agent_uptake[slot];
        ++uptake.mentioned;
        if (assignments.count({slot, value})) ++uptake.entered;
      }
    }
  }
  return stats;
}

Json InferredSlotStats::to_json() const {
  Json j;
  Json inferred_json = Json::array();
  for (const auto& [id, share] : inferred) {
    Json e;
    e["domain"] = id.domain;
    e["slot"] = id.slot;
    e["total"] = share.total;
    e["inferred"] = share.inferred;
    e["share"] = share.total == 0
                     ? 0.0
                     : static_cast<double>(share.inferred) / share.total;
    inferred_json.push_back(std::move(e));
  }
  j["inferred_values"] = std::move(inferred_json);
  Json uptake_json = Json::array();
  for (const auto& [id, uptake] : agent_uptake) {
    Json e;
    e["domain"] = id.domain;
    e["slot"] = id.slot;
    e["mentioned"] = uptake.mentioned;
    e["entered"] = uptake.entered;
    e["fraction"] = uptake.mentioned == 0
                        ? 0.0
                        : static_cast<double>(uptake.entered) /
                              uptake.mentioned;
    uptake_json.push_back(std::move(e));
  }
  j["agent_uptake"] = std::move(uptake_json);
  return j;
}

LintReport lint_corpus(const Corpus& corpus, const LintConfig& cfg) {
  LintReport report;
  std::vector<Finding> all;
  auto append = [&all](std::vector<Finding> findings) {
    all.insert(all.end(), std::make_move_iterator(findings.begin()),
               std::make_move_iterator(findings.end()));
  };
  append(detect_inexact_match(corpus, cfg));
  append(detect_missing_slot(corpus, cfg));
  append(detect_extra_slot(corpus, cfg));
  append(detect_delayed_annotation(corpus, cfg));
  append(detect_empty_annotation(corpus, cfg));
  append(detect_range_anomaly(corpus, cfg));

  // DelayedAnnotation outranks MissingSlot on the same (dialogue, turn,
  // slot). The conservative detectors keep them disjoint already; the filter
  // guards the invariant regardless.
  std::set<std::tuple<std::string, int, std::string, std::string>> delayed;
  for (const auto& f : all)
    if (f.kind == FindingKind::DelayedAnnotation && f.slot)
      delayed.insert({f.dialogue_id, f.turn, f.slot->domain, f.slot->slot});
  std::vector<Finding> kept;
  for (auto& f : all) {
    if (f.kind == FindingKind::MissingSlot && f.slot &&
        delayed.count({f.dialogue_id, f.turn, f.slot->domain, f.slot->slot}))
      continue;
    kept.push_back(std::move(f));
  }

  // Stable report order: corpus dialogue order, then turn, then kind.
  std::map<std::string, std::size_t> dialogue_order;
  for (std::size_t i = 0; i < corpus.dialogues.size(); ++i)
    dialogue_order[corpus.dialogues[i].id] = i;
  std::sort(kept.begin(), kept.end(), [&](const Finding& a, const Finding& b) {
    auto da = dialogue_order[a.dialogue_id];
    auto db = dialogue_order[b.dialogue_id];
    if (da != db) return da < db;
    if (a.turn != b.turn) return a.turn < b.turn;
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    std::string sa = a.slot ? a.slot->domain + " " + a.slot->slot : "";
    std::string sb = b.slot ? b.slot->domain + " " + b.slot->slot : "";
    return sa < sb;
  });

  std::size_t total_turns = 0;
  for (const auto& dialogue : corpus.dialogues)
    total_turns += dialogue.turns.size();

  if (cfg.sample_size) {
    // The seeded shuffle picks the inspected turns; findings outside the
    // sample are dropped, mirroring a manual review of sampled turns.
    std::vector<std::pair<std::size_t, int>> pool;
    for (std::size_t d = 0; d < corpus.dialogues.size(); ++d)
      for (const auto& turn : corpus.dialogues[d].turns)
        pool.emplace_back(d, turn.index);
    Rng rng(cfg.seed);
    rng.shuffle(pool);
    std::size_t take = std::min(*cfg.sample_size, pool.size());
    std::set<std::pair<std::string, int>> sampled;
    for (std::size_t i = 0; i < take; ++i)
      sampled.insert({corpus.dialogues[pool[i].first].id, pool[i].second});
    std::vector<Finding> in_sample;
    for (auto& f : kept)
      if (sampled.count({f.dialogue_id, f.turn}))
        in_sample.push_back(std::move(f));
    kept = std::move(in_sample);
    report.inspected_turns = take;
  } else {
    report.inspected_turns = total_turns;
  }

  std::set<std::pair<std::string, int>> flagged;
  for (const auto& f : kept) flagged.insert({f.dialogue_id, f.turn});
  report.flagged_turns = flagged.size();
  for (const auto& f : kept) ++report.counts[to_string(f.kind)];
  report.findings = std::move(kept);
  report.stats = inferred_slot_stats(corpus);
  return report;
}

Json LintReport::to_json() const {
  Json j;
  j["findings"] = Json::array();
  for (const auto& f : findings) j["findings"].push_back(f.to_json());
  j["counts"] = counts;
  j["inspected_turns"] = inspected_turns;
  j["flagged_turns"] = flagged_turns;
  j["rate"] = rate();
  j["stats"] = stats.to_json();
  return j;
}

std::string LintReport::to_text() const {
  std::ostringstream out;
  out << "inspected turns: " << inspected_turns << "\n"
      << "flagged turns:   " << flagged_turns << "\n"
      << "misannotation rate: " << rate() << "\n";
  for (const auto& [kind, count] : counts)
    out << "  " << kind << ": " << count << "\n";
  return out.str();
}

}  // namespace wozloc
