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

#ifndef WOZLOC_JSON_IO_HPP_
#define WOZLOC_JSON_IO_HPP_

#include <string>

#include <nlohmann/json.hpp>

namespace wozloc {

// ordered_json everywhere keeps object key order stable, which makes the
// canonical on-disk formats byte-reproducible.
using Json = nlohmann::ordered_json;

// Throws IngestError with 1-based line/column on malformed JSON or a missing
// file.
Json load_json_file(const std::string& path);

// Writes with 2-space indent and a trailing newline.
void write_json_file(const std::string& path, const Json& j);

// Reads a whole file; throws IngestError if it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace wozloc

#endif  // WOZLOC_JSON_IO_HPP_
