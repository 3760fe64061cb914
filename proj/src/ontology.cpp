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

#include "wozloc/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "wozloc/errors.hpp"
#include "wozloc/text.hpp"

namespace wozloc {

namespace {

bool boundary_space(const std::string& s) {
  return !s.empty() && (std::isspace(static_cast<unsigned char>(s.front())) ||
                        std::isspace(static_cast<unsigned char>(s.back())));
}

void line_column(const std::string& content, std::size_t byte, std::size_t& line,
                 std::size_t& column) {
  line = 1;
  column = 1;
  for (std::size_t i = 0; i < byte && i < content.size(); ++i) {
    if (content[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open file: " + path, 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write file: " + path, 0, 0);
  out << content;
}

Json load_json_file(const std::string& path) {
  std::string content = read_file(path);
  try {
    return Json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 0;
    std::size_t column = 0;
    line_column(content, e.byte > 0 ? e.byte - 1 : 0, line, column);
    throw IngestError("malformed JSON in " + path + ": " + e.what(), line,
                      column);
  }
}

void write_json_file(const std::string& path, const Json& j) {
  write_file(path, j.dump(2) + "\n");
}

void Ontology::add_slot(SlotId id, std::vector<std::string> values) {
  id.domain = text::normalize_value(id.domain);
  id.slot = text::normalize_value(id.slot);
  if (id.domain.empty() || id.slot.empty())
    throw ValidationError("slot id fields must be non-empty");
  for (char c : id.domain + id.slot)
    if (c == '=' || c == '"')
      throw ValidationError("slot id contains '=' or '\"': " + id.domain +
                            " " + id.slot);
  if (values_.count(id))
    throw ValidationError("duplicate slot: " + id.domain + " " + id.slot);
  if (values.empty())
    throw ValidationError("empty value set for " + id.domain + " " + id.slot);

  std::set<std::string> seen;
  for (auto& v : values) {
    v = text::nfc(v);
    if (v.find('"') != std::string::npos)
      throw ValidationError("value contains '\"': '" + v + "'");
    if (boundary_space(v) || v.empty())
      throw ValidationError("value empty or has boundary whitespace: '" + v +
                            "'");
    if (!seen.insert(v).second)
      throw ValidationError("duplicate value '" + v + "' for " + id.domain +
                            " " + id.slot);
  }
  if (std::find(domains_.begin(), domains_.end(), id.domain) == domains_.end())
    domains_.push_back(id.domain);
  slots_.push_back(id);
  values_.emplace(std::move(id), std::move(values));
}

const std::vector<std::string>& Ontology::values(const SlotId& id) const {
  static const std::vector<std::string> empty;
  auto it = values_.find(id);
  return it == values_.end() ? empty : it->second;
}

bool Ontology::is_legal(const SlotId& id, const std::string& value) const {
  const auto& vs = values(id);
  return std::find(vs.begin(), vs.end(), value) != vs.end();
}

std::vector<std::string> Ontology::all_values() const {
  std::set<std::string> out;
  for (const auto& [id, vs] : values_) out.insert(vs.begin(), vs.end());
  return {out.begin(), out.end()};
}

Ontology Ontology::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("slots") || !j["slots"].is_array())
    throw ValidationError("ontology JSON must contain a `slots` array");
  Ontology o;
  for (const auto& entry : j["slots"]) {
    if (!entry.contains("domain") || !entry.contains("slot") ||
        !entry.contains("values"))
      throw ValidationError("ontology slot entry needs domain/slot/values");
    SlotId id{entry["domain"].get<std::string>(),
              entry["slot"].get<std::string>()};
    o.add_slot(std::move(id),
               entry["values"].get<std::vector<std::string>>());
  }
  if (j.contains("domains")) {
    // The declared list wins (it may order domains differently); every
    // referenced domain must be present.
    auto declared = j["domains"].get<std::vector<std::string>>();
    for (const auto& d : o.domains_)
      if (std::find(declared.begin(), declared.end(), d) == declared.end())
        throw ValidationError("domain '" + d + "' missing from `domains`");
    o.domains_ = std::move(declared);
  }
  return o;
}

Json Ontology::to_json() const {
  Json j;
  j["domains"] = domains_;
  j["slots"] = Json::array();
  for (const auto& id : slots_) {
    Json entry;
    entry["domain"] = id.domain;
    entry["slot"] = id.slot;
    entry["values"] = values_.at(id);
    j["slots"].push_back(std::move(entry));
  }
  return j;
}

Ontology Ontology::load(const std::string& path) {
  return from_json(load_json_file(path));
}

void Ontology::save(const std::string& path) const {
  write_json_file(path, to_json());
}

}  // namespace wozloc
