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

#ifndef WOZLOC_ONTOLOGY_HPP_
#define WOZLOC_ONTOLOGY_HPP_

#include <map>
#include <string>
#include <vector>

#include "wozloc/json_io.hpp"
#include "wozloc/state.hpp"

namespace wozloc {

// Task schema: domains, slots, and the legal values per slot.
class Ontology {
 public:
  Ontology() = default;

  // Throws ValidationError on duplicate slots, empty value sets, duplicate
  // values, or values containing `"` / boundary whitespace. All text is NFC
  // normalized on the way in.
  void add_slot(SlotId id, std::vector<std::string> values);

  const std::vector<std::string>& domains() const { return domains_; }
  const std::vector<SlotId>& slots() const { return slots_; }
  std::size_t n() const { return slots_.size(); }

  bool has_slot(const SlotId& id) const { return values_.count(id) != 0; }
  // Empty vector for unknown slots.
  const std::vector<std::string>& values(const SlotId& id) const;
  bool is_legal(const SlotId& id, const std::string& value) const;

  // Every distinct value string across all slots, sorted.
  std::vector<std::string> all_values() const;

  static Ontology from_json(const Json& j);
  Json to_json() const;

  static Ontology load(const std::string& path);
  void save(const std::string& path) const;

  bool operator==(const Ontology& o) const {
    return slots_ == o.slots_ && values_ == o.values_;
  }

 private:
  std::vector<std::string> domains_;
  std::vector<SlotId> slots_;
  std::map<SlotId, std::vector<std::string>> values_;
};

}  // namespace wozloc

#endif  // WOZLOC_ONTOLOGY_HPP_
