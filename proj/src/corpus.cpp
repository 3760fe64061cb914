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

#include "wozloc/corpus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "wozloc/errors.hpp"
#include "wozloc/text.hpp"

namespace wozloc {

namespace {

void note_issue(std::vector<ValidationIssue>* issues, bool strict,
                const std::string& dialogue_id, int turn,
                const std::string& message) {
  if (strict)
    throw ValidationError("dialogue " + dialogue_id + " turn " +
                          std::to_string(turn) + ": " + message);
  if (issues) issues->push_back({dialogue_id, turn, message});
}

void validate_into(const Dialogue& d, const Turn& t, const Ontology& ontology,
                   bool strict, std::vector<ValidationIssue>* issues) {
  for (const auto& [id, value] : t.gold_state) {
    if (!ontology.has_slot(id)) {
      note_issue(issues, strict, d.id, t.index,
                 "unknown slot: " + id.domain + " " + id.slot);
    } else if (value.kind == SlotValue::Kind::Regular &&
               !ontology.is_legal(id, value.text)) {
      note_issue(issues, strict, d.id, t.index,
                 "illegal value for " + id.domain + " " + id.slot + ": '" +
                     value.text + "'");
    }
  }
}

// Resolves a dotted path with optional [index] steps against a JSON node.
// Returns nullptr when a step is missing.
const Json* resolve_path(const Json& root, const std::string& path) {
  if (path.empty() || path == "$") return &root;
  const Json* node = &root;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '.') {
      ++i;
      continue;
    }
    if (path[i] == '[') {
      std::size_t close = path.find(']', i);
      if (close == std::string::npos)
        throw MappingError("malformed path (unclosed '['): " + path);
      std::size_t index = 0;
      try {
        index = std::stoul(path.substr(i + 1, close - i - 1));
      } catch (...) {
        throw MappingError("malformed path index: " + path);
      }
      if (!node->is_array() || index >= node->size()) return nullptr;
      node = &(*node)[index];
      i = close + 1;
      continue;
    }
    std::size_t end = path.find_first_of(".[", i);
    if (end == std::string::npos) end = path.size();
    std::string key = path.substr(i, end - i);
    if (!node->is_object() || !node->contains(key)) return nullptr;
    node = &(*node)[key];
    i = end;
  }
  return node;
}

std::string require_string(const Json* node, const std::string& what) {
  if (node == nullptr || !node->is_string())
    throw MappingError("cannot resolve " + what + " to a string");
  return node->get<std::string>();
}

SlotId renamed(SlotId id, const std::map<std::string, std::string>& renames) {
  auto it = renames.find(id.domain + " " + id.slot);
  if (it == renames.end()) return id;
  std::size_t sp = it->second.find(' ');
  if (sp == std::string::npos)
    throw MappingError("slot rename target must be \"domain slot\": " +
                       it->second);
  return SlotId{it->second.substr(0, sp), it->second.substr(sp + 1)};
}

}  // namespace

Json state_to_json(const BeliefState& state) {
  Json arr = Json::array();
  for (const auto& [id, value] : state)
    arr.push_back(Json::array({id.domain, id.slot, value.rendered()}));
  return arr;
}

BeliefState state_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("state must be an array of triples");
  BeliefState state;
  for (const auto& triple : j) {
    if (!triple.is_array() || triple.size() != 3)
      throw ValidationError("state entry must be [domain, slot, value]");
    SlotId id{text::normalize_value(triple[0].get<std::string>()),
              text::normalize_value(triple[1].get<std::string>())};
    std::string v = text::normalize_value(triple[2].get<std::string>());
    if (v == "none") {
      state.erase(id);
      continue;
    }
    state.insert_or_assign(std::move(id), v == "dontcare"
                                              ? SlotValue::dontcare()
                                              : SlotValue::regular(std::move(v)));
  }
  return state;
}

Json corpus_to_json(const Corpus& corpus) {
  Json j;
  j["split"] = corpus.split;
  j["ontology"] = corpus.ontology.to_json();
  j["dialogues"] = Json::array();
  for (const auto& d : corpus.dialogues) {
    Json dj;
    dj["id"] = d.id;
    dj["language"] = d.language;
    dj["turns"] = Json::array();
    for (const auto& t : d.turns) {
      Json tj;
      tj["agent"] = t.agent_utterance;
      tj["user"] = t.user_utterance;
      tj["state"] = state_to_json(t.gold_state);
      dj["turns"].push_back(std::move(tj));
    }
    j["dialogues"].push_back(std::move(dj));
  }
  return j;
}

Corpus corpus_from_json(const Json& j, bool strict,
                        std::vector<ValidationIssue>* issues) {
  if (!j.is_object())
    throw ValidationError("corpus JSON must be an object");
  Corpus corpus;
  if (j.contains("split")) corpus.split = j["split"].get<std::string>();
  if (corpus.split != "train" && corpus.split != "dev" &&
      corpus.split != "test")
    throw ValidationError("split must be train, dev, or test: '" +
                          corpus.split + "'");
  if (j.contains("ontology"))
    corpus.ontology = Ontology::from_json(j["ontology"]);

  std::set<std::string> seen_ids;
  for (const auto& dj : j.value("dialogues", Json::array())) {
    Dialogue d;
    d.id = dj.at("id").get<std::string>();
    if (!seen_ids.insert(d.id).second)
      throw ValidationError("duplicate dialogue id: " + d.id);
    d.language = dj.value("language", "en");
    int index = 0;
    for (const auto& tj : dj.value("turns", Json::array())) {
      Turn t;
      t.index = index++;
      t.agent_utterance = text::nfc(tj.value("agent", ""));
      t.user_utterance = text::nfc(tj.at("user").get<std::string>());
      if (t.user_utterance.empty())
        note_issue(issues, strict, d.id, t.index, "empty user utterance");
      t.gold_state = state_from_json(tj.value("state", Json::array()));
      validate_into(d, t, corpus.ontology, strict, issues);
      d.turns.push_back(std::move(t));
    }
    corpus.dialogues.push_back(std::move(d));
  }
  return corpus;
}

Corpus load_canonical(const std::string& path, bool strict,
                      std::vector<ValidationIssue>* issues) {
  return corpus_from_json(load_json_file(path), strict, issues);
}

void save_canonical(const Corpus& corpus, const std::string& path) {
  write_json_file(path, corpus_to_json(corpus));
}

FieldMapping FieldMapping::from_json(const Json& j) {
  FieldMapping m;
  if (!j.is_object()) throw MappingError("mapping must be a JSON object");
  m.dialogues = j.value("dialogues", m.dialogues);
  m.dialogue_id = j.value("dialogue_id", m.dialogue_id);
  if (!j.contains("turns")) throw MappingError("mapping missing `turns` path");
  m.turns = j["turns"].get<std::string>();
  m.agent = j.value("agent", "");
  if (!j.contains("user")) throw MappingError("mapping missing `user` path");
  m.user = j["user"].get<std::string>();
  m.state = j.value("state", "");
  m.state_mode = j.value("state_mode", m.state_mode);
  if (m.state_mode != "full" && m.state_mode != "delta")
    throw MappingError("state_mode must be `full` or `delta`");
  m.language = j.value("language", m.language);
  m.split = j.value("split", m.split);
  if (j.contains("slot_renames"))
    m.slot_renames =
        j["slot_renames"].get<std::map<std::string, std::string>>();
  m.ontology_path = j.value("ontology", "");
  return m;
}

FieldMapping FieldMapping::load(const std::string& path) {
  return from_json(load_json_file(path));
}

Corpus import_foreign(const std::string& path, const FieldMapping& mapping,
                      ImportReport* report) {
  Json root = load_json_file(path);
  const Json* container = resolve_path(root, mapping.dialogues);
  if (container == nullptr)
    throw MappingError("cannot resolve `dialogues` path: " + mapping.dialogues);

  Corpus corpus;
  corpus.split = mapping.split;

  bool external_ontology = !mapping.ontology_path.empty();
  if (external_ontology) corpus.ontology = Ontology::load(mapping.ontology_path);
  // slot → observed values, for the derived ontology.
  std::map<SlotId, std::set<std::string>> observed;

  auto import_dialogue = [&](const std::string& fallback_id, const Json& dj) {
    Dialogue d;
    if (mapping.dialogue_id == "$key") {
      if (fallback_id.empty())
        throw MappingError(
            "dialogue_id is `$key` but `dialogues` is not an object");
      d.id = fallback_id;
    } else {
      d.id = require_string(resolve_path(dj, mapping.dialogue_id),
                            "`dialogue_id` path " + mapping.dialogue_id);
    }
    d.language = mapping.language;

    const Json* turns = resolve_path(dj, mapping.turns);
    if (turns == nullptr || !turns->is_array())
      throw MappingError("cannot resolve `turns` path `" + mapping.turns +
                         "` in dialogue " + d.id);
    BeliefState accumulated;
    int index = 0;
    for (const auto& tj : *turns) {
      Turn t;
      t.index = index++;
      const Json* agent =
          mapping.agent.empty() ? nullptr : resolve_path(tj, mapping.agent);
      t.agent_utterance =
          agent != nullptr && agent->is_string()
              ? text::nfc(agent->get<std::string>())
              : "";
      t.user_utterance = text::nfc(require_string(
          resolve_path(tj, mapping.user), "`user` path " + mapping.user));

      BeliefState entries;
      if (!mapping.state.empty()) {
        const Json* st = resolve_path(tj, mapping.state);
        if (st != nullptr) {
          // state_from_json drops `none`, but delta mode needs it to clear.
          if (mapping.state_mode == "delta" && st->is_array()) {
            for (const auto& triple : *st) {
              if (!triple.is_array() || triple.size() != 3)
                throw ValidationError(
                    "state entry must be [domain, slot, value]");
              SlotId id{text::normalize_value(triple[0].get<std::string>()),
                        text::normalize_value(triple[1].get<std::string>())};
              id = renamed(std::move(id), mapping.slot_renames);
              std::string v =
                  text::normalize_value(triple[2].get<std::string>());
              if (v == "none") {
                accumulated.erase(id);
              } else {
                accumulated.insert_or_assign(
                    id, v == "dontcare" ? SlotValue::dontcare()
                                        : SlotValue::regular(std::move(v)));
              }
            }
            entries = accumulated;
          } else {
            BeliefState raw = state_from_json(*st);
            for (const auto& [id, value] : raw)
              entries.insert_or_assign(renamed(id, mapping.slot_renames),
                                       value);
          }
        }
      }
      t.gold_state = std::move(entries);

      for (const auto& [id, value] : t.gold_state) {
        if (external_ontology) {
          if (!corpus.ontology.has_slot(id)) {
            if (report) {
              ++report->unknown_slots[id];
              report->issues.push_back({d.id, t.index,
                                        "unknown slot: " + id.domain + " " +
                                            id.slot});
            }
          } else if (value.kind == SlotValue::Kind::Regular &&
                     !corpus.ontology.is_legal(id, value.text) && report) {
            report->issues.push_back({d.id, t.index,
                                      "illegal value for " + id.domain + " " +
                                          id.slot + ": '" + value.text + "'"});
          }
        } else if (value.kind == SlotValue::Kind::Regular) {
          observed[id].insert(value.text);
        }
      }
      d.turns.push_back(std::move(t));
    }
    corpus.dialogues.push_back(std::move(d));
  };

  if (container->is_object()) {
    for (const auto& [key, dj] : container->items()) import_dialogue(key, dj);
  } else if (container->is_array()) {
    for (const auto& dj : *container) import_dialogue("", dj);
  } else {
    throw MappingError("`dialogues` path must name an array or object");
  }

  if (!external_ontology) {
    for (auto& [id, values] : observed) {
      if (values.empty()) values.insert("dontcare");
      corpus.ontology.add_slot(
          id, std::vector<std::string>(values.begin(), values.end()));
    }
  }
  return corpus;
}

StatsReport corpus_stats(const Corpus& corpus) {
  StatsReport r;
  r.domains = corpus.ontology.domains().size();
  r.dialogues = corpus.dialogues.size();
  for (const auto& d : corpus.dialogues) r.turns += d.turns.size();
  r.slots = corpus.ontology.n();
  r.values = corpus.ontology.all_values().size();
  return r;
}

Json StatsReport::to_json() const {
  Json j;
  j["Domains"] = domains;
  j["Dialogues"] = dialogues;
  j["Turns"] = turns;
  j["Slots"] = slots;
  j["Values"] = values;
  return j;
}

std::string StatsReport::to_text() const {
  std::ostringstream out;
  out << "# Domains:   " << domains << "\n"
      << "# Dialogues: " << dialogues << "\n"
      << "# Turns:     " << turns << "\n"
      << "# Slots:     " << slots << "\n"
      << "# Values:    " << values << "\n";
  return out.str();
}

}  // namespace wozloc
