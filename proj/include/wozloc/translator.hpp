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

#ifndef WOZLOC_TRANSLATOR_HPP_
#define WOZLOC_TRANSLATOR_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "wozloc/align.hpp"
#include "wozloc/json_io.hpp"
#include "wozloc/subprocess.hpp"

namespace wozloc {

inline constexpr char kTranslateProtocol[] = "woz-translate/1";

struct TranslatorRequest {
  std::string id;
  std::string src_lang;
  std::string tgt_lang;
  std::string text;

  Json to_json() const;
  static TranslatorRequest from_json(const Json& j);
};

struct TranslatorResponse {
  std::string id;
  std::string translation;
  TokenOffsets src_token_offsets;
  TokenOffsets tgt_token_offsets;
  AttentionMatrix attention;  // row-major, target × source, row-normalized

  Json to_json() const;
  static TranslatorResponse from_json(const Json& j);
};

class TranslatorClient {
 public:
  virtual ~TranslatorClient() = default;
  // Throws PipelineError on transport failure or protocol violations.
  virtual TranslatorResponse translate(const TranslatorRequest& request) = 0;
};

// Talks to a child process over newline-delimited JSON; expects the
// handshake line {"protocol":"woz-translate/1"} first. Thread-safe: requests
// are serialized on the connection.
class StdioTranslatorClient : public TranslatorClient {
 public:
  explicit StdioTranslatorClient(const std::string& command);
  TranslatorResponse translate(const TranslatorRequest& request) override;

 private:
  std::unique_ptr<LineProcess> process_;
  std::mutex mutex_;
};

// POST /translate with the request body; GET /protocol for the handshake.
class HttpTranslatorClient : public TranslatorClient {
 public:
  explicit HttpTranslatorClient(const std::string& url);
  TranslatorResponse translate(const TranslatorRequest& request) override;

 private:
  std::string host_;
  int port_ = 0;
  std::mutex mutex_;
};

// Deterministic translator double: word-map lookup per token, seeded token
// permutation, exact one-hot attention. Noisy mode corrupts entity-vocabulary
// tokens unless they are enclosed in ASCII `"` tokens.
struct MockTranslatorConfig {
  std::map<std::string, std::string> word_map;
  std::set<std::string> entity_vocab;
  uint64_t seed = 0;
  bool noisy = false;
  // "seeded" | "reverse" | "identity"
  std::string permutation = "seeded";

  static MockTranslatorConfig from_json(const Json& j);
  Json to_json() const;
};

class MockTranslator : public TranslatorClient {
 public:
  explicit MockTranslator(MockTranslatorConfig cfg) : cfg_(std::move(cfg)) {}
  TranslatorResponse translate(const TranslatorRequest& request) override;

  const MockTranslatorConfig& config() const { return cfg_; }

 private:
  MockTranslatorConfig cfg_;
};

// Shifts every code point up by one; the noisy mock uses this to emulate
// entity drift deterministically.
std::string corrupt_token(std::string_view token);

}  // namespace wozloc

#endif  // WOZLOC_TRANSLATOR_HPP_
