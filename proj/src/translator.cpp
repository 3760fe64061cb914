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

#include "wozloc/translator.hpp"

#include <algorithm>
#include <numeric>

#include <httplib.h>

#include "wozloc/errors.hpp"
#include "wozloc/rng.hpp"
#include "wozloc/text.hpp"

namespace wozloc {

namespace {

Json offsets_to_json(const TokenOffsets& offsets) {
  Json arr = Json::array();
  for (const auto& [start, end] : offsets)
    arr.push_back(Json::array({start, end}));
  return arr;
}

TokenOffsets offsets_from_json(const Json& j) {
  TokenOffsets out;
  for (const auto& pair : j)
    out.emplace_back(pair.at(0).get<std::size_t>(),
                     pair.at(1).get<std::size_t>());
  return out;
}

void split_host_port(const std::string& url, std::string& host, int& port) {
  std::string rest = url;
  auto scheme = rest.find("://");
  if (scheme != std::string::npos) rest = rest.substr(scheme + 3);
  auto slash = rest.find('/');
  if (slash != std::string::npos) rest = rest.substr(0, slash);
  auto colon = rest.find(':');
  if (colon == std::string::npos) {
    host = rest;
    port = 80;
  } else {
    host = rest.substr(0, colon);
    port = std::stoi(rest.substr(colon + 1));
  }
}

}  // namespace

Json TranslatorRequest::to_json() const {
  Json j;
  j["id"] = id;
  j["src_lang"] = src_lang;
  j["tgt_lang"] = tgt_lang;
  j["text"] = text;
  return j;
}

TranslatorRequest TranslatorRequest::from_json(const Json& j) {
  TranslatorRequest r;
  r.id = j.at("id").get<std::string>();
  r.src_lang = j.at("src_lang").get<std::string>();
  r.tgt_lang = j.at("tgt_lang").get<std::string>();
  r.text = j.at("text").get<std::string>();
  return r;
}

Json TranslatorResponse::to_json() const {
  Json j;
  j["id"] = id;
  j["translation"] = translation;
  j["src_token_offsets"] = offsets_to_json(src_token_offsets);
  j["tgt_token_offsets"] = offsets_to_json(tgt_token_offsets);
  j["attention"] = attention;
  return j;
}

TranslatorResponse TranslatorResponse::from_json(const Json& j) {
  TranslatorResponse r;
  r.id = j.at("id").get<std::string>();
  r.translation = j.at("translation").get<std::string>();
  r.src_token_offsets = offsets_from_json(j.at("src_token_offsets"));
  r.tgt_token_offsets = offsets_from_json(j.at("tgt_token_offsets"));
  r.attention = j.at("attention").get<AttentionMatrix>();
  return r;
}

StdioTranslatorClient::StdioTranslatorClient(const std::string& command) {
  try {
    process_ = std::make_unique<LineProcess>(command);
  } catch (const BackendError& e) {
    throw PipelineError(std::string("cannot start translator: ") + e.what());
  }
  auto line = process_->read_line();
  if (!line) throw PipelineError("translator exited before handshake");
  try {
    Json hs = Json::parse(*line);
    if (hs.value("protocol", "") != kTranslateProtocol)
      throw PipelineError("unexpected translator handshake: " + *line);
  } catch (const nlohmann::json::parse_error&) {
    throw PipelineError("malformed translator handshake: " + *line);
  }
}

TranslatorResponse StdioTranslatorClient::translate(
    const TranslatorRequest& request) {
  std::lock_guard<std::mutex> lock(mutex_);
  std::optional<std::string> line;
  try {
    process_->write_line(request.to_json().dump());
    line = process_->read_line();
  } catch (const BackendError& e) {
    throw PipelineError(std::string("translator transport failure: ") +
                        e.what());
  }
  if (!line) throw PipelineError("translator closed the connection");
  TranslatorResponse response;
  try {
    response = TranslatorResponse::from_json(Json::parse(*line));
  } catch (const std::exception& e) {
    throw PipelineError(std::string("malformed translator response: ") +
                        e.what());
  }
  if (response.id != request.id)
    throw PipelineError("translator response id mismatch: sent " + request.id +
                        ", got " + response.id);
  return response;
}

HttpTranslatorClient::HttpTranslatorClient(const std::string& url) {
  split_host_port(url, host_, port_);
  httplib::Client client(host_, port_);
  auto res = client.Get("/protocol");
  if (!res || res->status != 200)
    throw PipelineError("translator endpoint unreachable: " + url);
  Json hs = Json::parse(res->body, nullptr, false);
  if (hs.is_discarded() || hs.value("protocol", "") != kTranslateProtocol)
    throw PipelineError("unexpected translator handshake from " + url);
}

TranslatorResponse HttpTranslatorClient::translate(
    const TranslatorRequest& request) {
  std::lock_guard<std::mutex> lock(mutex_);
  httplib::Client client(host_, port_);
  auto res = client.Post("/translate", request.to_json().dump(),
                         "application/json");
  if (!res || res->status != 200)
    throw PipelineError("translator POST /translate failed");
  TranslatorResponse response;
  try {
    response = TranslatorResponse::from_json(Json::parse(res->body));
  } catch (const std::exception& e) {
    throw PipelineError(std::string("malformed translator response: ") +
                        e.what());
  }
  if (response.id != request.id)
    throw PipelineError("translator response id mismatch");
  return response;
}

MockTranslatorConfig MockTranslatorConfig::from_json(const Json& j) {
  MockTranslatorConfig cfg;
  if (j.contains("word_map"))
    cfg.word_map = j["word_map"].get<std::map<std::string, std::string>>();
  if (j.contains("entity_vocab"))
    for (const auto& v : j["entity_vocab"])
      cfg.entity_vocab.insert(v.get<std::string>());
  cfg.seed = j.value("seed", cfg.seed);
  cfg.noisy = j.value("noisy", cfg.noisy);
  cfg.permutation = j.value("permutation", cfg.permutation);
  return cfg;
}

Json MockTranslatorConfig::to_json() const {
  Json j;
  j["word_map"] = word_map;
  j["entity_vocab"] = std::vector<std::string>(entity_vocab.begin(),
                                               entity_vocab.end());
  j["seed"] = seed;
  j["noisy"] = noisy;
  j["permutation"] = permutation;
  return j;
}

std::string corrupt_token(std::string_view token) {
  std::u32string cps = text::decode_utf8(token);
  for (char32_t& c : cps) c = c + 1;
  return text::encode_utf8(cps);
}

TranslatorResponse MockTranslator::translate(const TranslatorRequest& request) {
  TranslatorResponse response;
  response.id = request.id;

  std::vector<std::string> tokens;
  for (auto [start, end] : text::token_spans(request.text)) {
    response.src_token_offsets.emplace_back(start, end);
    tokens.emplace_back(request.text.substr(start, end - start));
  }
  const std::size_t n = tokens.size();

  // ASCII quote tokens toggle protection; the marks themselves and the
  // tokens between them pass through untouched in noisy mode.
  std::vector<bool> marked(n, false);
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (tokens[i] == "\"") {
      marked[i] = true;
      inside = !inside;
    } else if (inside) {
      marked[i] = true;
    }
  }

  std::vector<std::string> mapped(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = cfg_.word_map.find(tokens[i]);
    if (it != cfg_.word_map.end()) {
      mapped[i] = it->second;
    } else if (cfg_.noisy && !marked[i] && cfg_.entity_vocab.count(tokens[i])) {
      mapped[i] = corrupt_token(tokens[i]);
    } else {
      mapped[i] = tokens[i];
    }
  }

  // perm[k] = index of the source token emitted at target position k.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  if (cfg_.permutation == "reverse") {
    std::reverse(perm.begin(), perm.end());
  } else if (cfg_.permutation == "seeded") {
    Rng rng(mix_seed(cfg_.seed, text::fnv1a(request.text)));
    rng.shuffle(perm);
  } else if (cfg_.permutation != "identity") {
    throw PipelineError("unknown mock permutation mode: " + cfg_.permutation);
  }

  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) response.translation += ' ';
    std::size_t start = response.translation.size();
    response.translation += mapped[perm[k]];
    response.tgt_token_offsets.emplace_back(start,
                                            response.translation.size());
  }
  response.attention.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) response.attention[k][perm[k]] = 1.0;
  return response;
}

}  // namespace wozloc
