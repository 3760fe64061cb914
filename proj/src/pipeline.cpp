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

#include "wozloc/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "wozloc/errors.hpp"
#include "wozloc/parallel.hpp"
#include "wozloc/rng.hpp"
#include "wozloc/text.hpp"

namespace wozloc {

namespace {

SlotId slot_from_json(const Json& j) {
  return SlotId{j.at("domain").get<std::string>(),
                j.at("slot").get<std::string>()};
}

Json slot_to_json(const SlotId& id, const std::string& value,
                  const std::string& rendering) {
  Json j;
  j["domain"] = id.domain;
  j["slot"] = id.slot;
  j["value"] = value;
  j["rendering"] = rendering;
  return j;
}

bool dialogue_has(const Dialogue& dialogue, const SlotId& slot,
                  const std::string& value) {
  for (const auto& turn : dialogue.turns) {
    auto it = turn.gold_state.find(slot);
    if (it != turn.gold_state.end() &&
        it->second.kind == SlotValue::Kind::Regular &&
        it->second.text == value)
      return true;
  }
  return false;
}

}  // namespace

DependencyDictionary DependencyDictionary::from_json(const Json& j) {
  DependencyDictionary d;
  for (const auto& ej : j.value("entries", Json::array())) {
    DependencyEntry entry;
    const Json& trigger = ej.at("trigger");
    entry.slot = slot_from_json(trigger);
    entry.value = trigger.at("value").get<std::string>();
    entry.rendering = trigger.at("rendering").get<std::string>();
    for (const auto& cj : ej.value("consequents", Json::array())) {
      DependencyConsequent c;
      c.slot = slot_from_json(cj);
      c.value = cj.at("value").get<std::string>();
      c.rendering = cj.at("rendering").get<std::string>();
      entry.consequents.push_back(std::move(c));
    }
    d.entries.push_back(std::move(entry));
  }
  return d;
}

Json DependencyDictionary::to_json() const {
  Json j;
  j["entries"] = Json::array();
  for (const auto& entry : entries) {
    Json ej;
    ej["trigger"] = slot_to_json(entry.slot, entry.value, entry.rendering);
    ej["consequents"] = Json::array();
    for (const auto& c : entry.consequents)
      ej["consequents"].push_back(slot_to_json(c.slot, c.value, c.rendering));
    j["entries"].push_back(std::move(ej));
  }
  return j;
}

DependencyDictionary DependencyDictionary::load(const std::string& path) {
  return from_json(load_json_file(path));
}

void DependencyDictionary::save(const std::string& path) const {
  write_json_file(path, to_json());
}

void DependencyDictionary::validate(const Ontology& source,
                                    const Ontology& target) const {
  auto check = [&](const SlotId& slot, const std::string& value,
                   const std::string& rendering) {
    if (!source.is_legal(slot, value))
      throw ValidationError("dictionary value '" + value +
                            "' not in source ontology for " + slot.domain +
                            " " + slot.slot);
    if (!target.is_legal(slot, rendering))
      throw ValidationError("dictionary rendering '" + rendering +
                            "' not in target ontology for " + slot.domain +
                            " " + slot.slot);
  };
  for (const auto& entry : entries) {
    check(entry.slot, entry.value, entry.rendering);
    for (const auto& c : entry.consequents) check(c.slot, c.value, c.rendering);
  }
}

PlanStrategy plan_strategy_from_string(const std::string& name) {
  if (name == "dictionary") return PlanStrategy::Dictionary;
  if (name == "identity") return PlanStrategy::Identity;
  if (name == "random" || name == "random-from-ontology")
    return PlanStrategy::RandomFromOntology;
  throw UsageError("unknown substitution strategy: " + name);
}

std::string to_string(PlanStrategy strategy) {
  switch (strategy) {
    case PlanStrategy::Dictionary:
      return "dictionary";
    case PlanStrategy::Identity:
      return "identity";
    case PlanStrategy::RandomFromOntology:
      return "random-from-ontology";
  }
  return "?";
}

SubstitutionPlan build_substitution_plan(const Dialogue& dialogue,
                                         const DependencyDictionary& dict,
                                         const Ontology& target_ontology,
                                         uint64_t seed,
                                         PlanStrategy strategy) {
  SubstitutionPlan plan;
  plan.seed = seed;
  plan.strategy = strategy;

  // Distinct Regular values in first-seen order, with the slot that first
  // carried each (the slot whose target values a random draw uses).
  std::vector<std::pair<std::string, SlotId>> values;
  for (const auto& turn : dialogue.turns) {
    for (const auto& [id, value] : turn.gold_state) {
      if (value.kind != SlotValue::Kind::Regular) continue;
      bool seen = false;
      for (const auto& [v, s] : values)
        if (v == value.text) {
          seen = true;
          break;
        }
      if (!seen) values.emplace_back(value.text, id);
    }
  }

  // Dictionary pass: a trigger present in the dialogue forces the renderings
  // of its own value and of every consequent value.
  auto force = [&](const std::string& value, const std::string& rendering) {
    auto it = plan.value_map.find(value);
    if (it != plan.value_map.end() && it->second != rendering)
      throw PlanError("conflicting dictionary renderings for '" + value +
                      "': '" + it->second + "' vs '" + rendering + "'");
    plan.value_map.emplace(value, rendering);
  };
  for (const auto& entry : dict.entries) {
    if (!dialogue_has(dialogue, entry.slot, entry.value)) continue;
    force(entry.value, entry.rendering);
    for (const auto& c : entry.consequents) force(c.value, c.rendering);
  }

  Rng rng(mix_seed(seed, text::fnv1a(dialogue.id)));
  for (const auto& [value, slot] : values) {
    if (plan.value_map.count(value)) continue;
    switch (strategy) {
      case PlanStrategy::Dictionary:
        throw PlanError("value '" + value +
                        "' not covered by the dependency dictionary");
      case PlanStrategy::Identity:
        if (!target_ontology.is_legal(slot, value))
          throw PlanError("value '" + value +
                          "' absent from both dictionary and target ontology");
        plan.value_map.emplace(value, value);
        break;
      case PlanStrategy::RandomFromOntology: {
        // Trigger renderings are reserved for their trigger values; minting
        // one for an unrelated source value would assert a dependency the
        // dialogue never had and break the consequent scan.
        std::vector<std::string> candidates;
        for (const auto& c : target_ontology.values(slot)) {
          bool reserved = false;
          for (const auto& entry : dict.entries)
            if (entry.slot == slot && entry.rendering == c &&
                entry.value != value)
              reserved = true;
          if (!reserved) candidates.push_back(c);
        }
        if (candidates.empty())
          throw PlanError("value '" + value +
                          "' absent from both dictionary and target ontology");
        plan.value_map.emplace(value,
                               candidates[rng.below(candidates.size())]);
        break;
      }
    }
  }
  return plan;
}

TranslatedUtterance translate_utterance(std::string_view utterance,
                                        const std::vector<CharSpan>& spans,
                                        TranslatorClient& client,
                                        const PipelineConfig& cfg,
                                        const std::string& id_prefix) {
  TranslatedUtterance out;
  if (text::trim(utterance).empty()) return out;

  StrippedText stripped = strip_quotes(utterance);
  std::vector<CharSpan> cleaned_spans;
  for (const auto& span : spans) {
    CharSpan s = span;
    s.start = stripped.to_cleaned(span.start);
    s.end = stripped.to_cleaned(span.end);
    if (s.start < s.end) cleaned_spans.push_back(std::move(s));
  }

  std::vector<Sentence> sentences = split_sentences(stripped.text());
  int request_index = 0;
  for (const auto& sentence : sentences) {
    // Pieces carry their trailing (and possibly leading) whitespace; the
    // request sends the trimmed text and spans shift accordingly.
    std::size_t lead = 0;
    while (lead < sentence.text.size() &&
           std::isspace(static_cast<unsigned char>(sentence.text[lead])))
      ++lead;
    std::string request_text = text::trim(sentence.text);
    if (request_text.empty()) continue;
    const std::size_t local_base = sentence.offset + lead;

    TranslatorRequest request;
    request.id = id_prefix + ":" + std::to_string(request_index++);
    request.src_lang = cfg.src_lang;
    request.tgt_lang = cfg.tgt_lang;
    request.text = request_text;
    TranslatorResponse response = client.translate(request);
    ++out.requests;

    const std::size_t joined_base =
        out.text.empty() ? 0 : out.text.size() + 1;
    if (!out.text.empty()) out.text += ' ';
    out.text += response.translation;

    if (!cfg.align_enabled) continue;
    for (const auto& span : cleaned_spans) {
      if (span.start < local_base ||
          span.start >= local_base + request_text.size())
        continue;
      CharSpan local = span;
      local.start = span.start - local_base;
      local.end = std::min(span.end - local_base, request_text.size());

      std::optional<std::pair<std::size_t, std::size_t>> placed;
      if (cfg.align.numeric_heuristics_enabled) {
        placed = numeric_span_recover(local.value, response.translation);
        if (placed) ++out.numeric_hits;
      }
      if (!placed) {
        try {
          CharSpan aligned =
              align_span(local, response.src_token_offsets,
                         response.tgt_token_offsets, response.attention,
                         cfg.align);
          placed = std::make_pair(aligned.start, aligned.end);
          ++out.attention_alignments;
        } catch (const AlignmentFailure&) {
          out.failures.push_back(span);
          continue;
        }
      }
      CharSpan target = span;
      target.start = joined_base + placed->first;
      target.end = joined_base + placed->second;
      out.spans.push_back(std::move(target));
    }
  }
  std::sort(out.spans.begin(), out.spans.end(),
            [](const CharSpan& a, const CharSpan& b) { return a.start < b.start; });
  return out;
}

namespace {

// Rewrites a translated utterance by splicing the plan's target values over
// the aligned spans. Overlapping spans lose to the earlier one and are
// reported as failures.
std::string substitute_spans(const std::string& translation,
                             const std::vector<CharSpan>& spans,
                             const SubstitutionPlan& plan,
                             std::vector<CharSpan>& failures) {
  std::string out;
  std::size_t cursor = 0;
  for (const auto& span : spans) {
    if (span.start < cursor) {
      failures.push_back(span);
      continue;
    }
    out += translation.substr(cursor, span.start - cursor);
    out += plan.value_map.at(span.value);
    cursor = span.end;
  }
  out += translation.substr(cursor);
  return out;
}

BeliefState rewrite_state(const BeliefState& state,
                          const SubstitutionPlan& plan) {
  BeliefState out;
  for (const auto& [id, value] : state) {
    if (value.kind == SlotValue::Kind::Regular)
      out.emplace(id, SlotValue::regular(plan.value_map.at(value.text)));
    else
      out.emplace(id, value);
  }
  return out;
}

}  // namespace

Dialogue translate_dialogue(const Dialogue& dialogue, TranslatorClient& client,
                            const SubstitutionPlan& plan,
                            const PipelineConfig& cfg,
                            const Ontology& target_ontology,
                            PipelineReport* report) {
  Dialogue out;
  out.id = dialogue.id;
  out.language = cfg.tgt_lang;

  for (const auto& turn : dialogue.turns) {
    Turn translated;
    translated.index = turn.index;

    auto run_side = [&](const std::string& utterance, const char* speaker)
        -> std::string {
      std::vector<CharSpan> spans =
          cfg.align_enabled ? detect_entity_spans(utterance, turn.gold_state)
                            : std::vector<CharSpan>{};
      TranslatedUtterance tu = translate_utterance(
          utterance, spans, client, cfg,
          dialogue.id + ":" + std::to_string(turn.index) + ":" + speaker);
      if (report) {
        report->trace.requests += tu.requests;
        report->trace.numeric_hits += tu.numeric_hits;
        report->trace.attention_alignments += tu.attention_alignments;
        report->trace.alignment_failures += tu.failures.size();
      }
      std::vector<CharSpan> overlap_failures;
      std::string text = cfg.align_enabled
                             ? substitute_spans(tu.text, tu.spans, plan,
                                                overlap_failures)
                             : tu.text;
      for (auto* failed : {&tu.failures, &overlap_failures}) {
        for (const auto& span : *failed) {
          // Appending the planned rendering keeps the annotation grounded in
          // the text even when alignment gave no position.
          text += text.empty() ? "" : " ";
          text += plan.value_map.at(span.value);
          if (report)
            report->findings.push_back(
                {dialogue.id, turn.index, speaker,
                 "alignment failed for '" + span.value +
                     "'; rendering appended at sentence end"});
        }
      }
      return text;
    };

    translated.agent_utterance = run_side(turn.agent_utterance, "agent");
    translated.user_utterance = run_side(turn.user_utterance, "user");
    translated.gold_state = rewrite_state(turn.gold_state, plan);
    validate_state(translated.gold_state, target_ontology);
    out.turns.push_back(std::move(translated));
  }
  return out;
}

Corpus translate_corpus(const Corpus& corpus, TranslatorClient& client,
                        const DependencyDictionary& dict,
                        const Ontology& target_ontology,
                        const PipelineConfig& cfg, PipelineReport* report) {
  Corpus out;
  out.split = corpus.split;
  out.ontology = target_ontology;

  std::vector<std::optional<Dialogue>> results(corpus.dialogues.size());
  std::vector<PipelineReport> partials(corpus.dialogues.size());
  run_parallel(corpus.dialogues.size(), cfg.jobs, [&](std::size_t i) {
    const Dialogue& dialogue = corpus.dialogues[i];
    SubstitutionPlan plan = build_substitution_plan(
        dialogue, dict, target_ontology, cfg.seed, cfg.strategy);
    try {
      results[i] = translate_dialogue(dialogue, client, plan, cfg,
                                      target_ontology, &partials[i]);
    } catch (const PipelineError& e) {
      partials[i].findings.push_back({dialogue.id, -1, "", e.what()});
      partials[i].untranslated.push_back(dialogue.id);
    }
  });

  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i]) out.dialogues.push_back(std::move(*results[i]));
    if (report) {
      report->trace.requests += partials[i].trace.requests;
      report->trace.numeric_hits += partials[i].trace.numeric_hits;
      report->trace.attention_alignments +=
          partials[i].trace.attention_alignments;
      report->trace.alignment_failures += partials[i].trace.alignment_failures;
      report->findings.insert(report->findings.end(),
                              partials[i].findings.begin(),
                              partials[i].findings.end());
      report->untranslated.insert(report->untranslated.end(),
                                  partials[i].untranslated.begin(),
                                  partials[i].untranslated.end());
    }
  }
  return out;
}

Json PipelineReport::to_json() const {
  Json j;
  j["requests"] = trace.requests;
  j["numeric_hits"] = trace.numeric_hits;
  j["attention_alignments"] = trace.attention_alignments;
  j["alignment_failures"] = trace.alignment_failures;
  j["untranslated"] = untranslated;
  j["findings"] = Json::array();
  for (const auto& f : findings) {
    Json fj;
    fj["dialogue"] = f.dialogue_id;
    fj["turn"] = f.turn;
    fj["speaker"] = f.speaker;
    fj["message"] = f.message;
    j["findings"].push_back(std::move(fj));
  }
  return j;
}

FaithfulnessReport measure_faithfulness(const Corpus& corpus) {
  FaithfulnessReport report;
  for (const auto& dialogue : corpus.dialogues) {
    BeliefState prev;
    for (const auto& turn : dialogue.turns) {
      StateDelta delta = diff_states(prev, turn.gold_state);
      std::string haystack = turn.agent_utterance + "\n" + turn.user_utterance;
      for (const auto& [id, value] : delta.set) {
        if (value.kind != SlotValue::Kind::Regular) continue;
        ++report.checked;
        if (!text::find_occurrences(haystack, value.text).empty()) {
          ++report.matched;
        } else {
          report.misses.push_back({dialogue.id, turn.index, "",
                                   "value '" + value.text +
                                       "' not found in its turn's utterances"});
        }
      }
      prev = turn.gold_state;
    }
  }
  return report;
}

Json FaithfulnessReport::to_json() const {
  Json j;
  j["checked"] = checked;
  j["matched"] = matched;
  j["rate"] = rate();
  j["misses"] = Json::array();
  for (const auto& m : misses) {
    Json mj;
    mj["dialogue"] = m.dialogue_id;
    mj["turn"] = m.turn;
    mj["message"] = m.message;
    j["misses"].push_back(std::move(mj));
  }
  return j;
}

std::vector<PipelineFinding> check_dictionary_consistency(
    const Corpus& translated, const DependencyDictionary& dict) {
  std::vector<PipelineFinding> findings;
  for (const auto& dialogue : translated.dialogues) {
    for (const auto& entry : dict.entries) {
      if (!dialogue_has(dialogue, entry.slot, entry.rendering)) continue;
      for (const auto& c : entry.consequents) {
        for (const auto& turn : dialogue.turns) {
          auto it = turn.gold_state.find(c.slot);
          if (it == turn.gold_state.end()) continue;
          if (it->second.kind == SlotValue::Kind::Regular &&
              it->second.text != c.rendering) {
            findings.push_back(
                {dialogue.id, turn.index, "",
                 "dependent slot " + c.slot.domain + " " + c.slot.slot +
                     " rendered '" + it->second.text + "', dictionary requires '" +
                     c.rendering + "'"});
          }
        }
      }
    }
  }
  return findings;
}

}  // namespace wozloc
