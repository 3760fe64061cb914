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

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "wozloc/json_io.hpp"
#include "wozloc/ontology.hpp"
#include "wozloc/translator.hpp"

namespace {

using wozloc::Json;

int serve_stdio(wozloc::MockTranslator& mock) {
  Json handshake;
  handshake["protocol"] = wozloc::kTranslateProtocol;
  std::cout << handshake.dump() << "\n" << std::flush;

  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    Json reply;
    try {
      auto request = wozloc::TranslatorRequest::from_json(Json::parse(line));
      reply = mock.translate(request).to_json();
    } catch (const std::exception& e) {
      reply["error"] = e.what();
    }
    std::cout << reply.dump() << "\n" << std::flush;
  }
  return 0;
}

int serve_http(wozloc::MockTranslator& mock, int port) {
  httplib::Server server;
  server.Get("/protocol", [](const httplib::Request&, httplib::Response& res) {
    Json handshake;
    handshake["protocol"] = wozloc::kTranslateProtocol;
    res.set_content(handshake.dump(), "application/json");
  });
  server.Post("/translate",
              [&mock](const httplib::Request& req, httplib::Response& res) {
                try {
                  auto request =
                      wozloc::TranslatorRequest::from_json(Json::parse(req.body));
                  res.set_content(mock.translate(request).to_json().dump(),
                                  "application/json");
                } catch (const std::exception& e) {
                  Json reply;
                  reply["error"] = e.what();
                  res.status = 400;
                  res.set_content(reply.dump(), "application/json");
                }
              });
  std::cerr << "listening on 127.0.0.1:" << port << "\n";
  return server.listen("127.0.0.1", port) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic mock translator (newline JSON or HTTP)"};
  std::string config_path, word_map_path, entity_vocab_path, ontology_path;
  std::string permutation;
  uint64_t seed = 0;
  bool noisy = false;
  int http_port = -1;

  app.add_option("--config", config_path, "full MockTranslatorConfig JSON");
  app.add_option("--word-map", word_map_path, "JSON object of token mappings");
  app.add_option("--entity-vocab", entity_vocab_path,
                 "JSON array of entity tokens (noisy mode targets)");
  app.add_option("--ontology", ontology_path,
                 "derive the entity vocabulary from an ontology's values");
  app.add_option("--seed", seed, "permutation seed");
  app.add_flag("--noisy", noisy, "corrupt unmarked entity tokens");
  app.add_option("--permutation", permutation, "identity | reverse | seeded");
  app.add_option("--http", http_port, "serve HTTP on this port instead");

  try {
    app.parse(argc, argv);

    wozloc::MockTranslatorConfig cfg;
    if (!config_path.empty())
      cfg = wozloc::MockTranslatorConfig::from_json(
          wozloc::load_json_file(config_path));
    if (!word_map_path.empty()) {
      cfg.word_map.clear();
      for (const auto& [key, value] :
           wozloc::load_json_file(word_map_path).items())
        cfg.word_map[key] = value.get<std::string>();
    }
    if (!entity_vocab_path.empty()) {
      cfg.entity_vocab.clear();
      for (const auto& value : wozloc::load_json_file(entity_vocab_path))
        cfg.entity_vocab.insert(value.get<std::string>());
    }
    if (!ontology_path.empty()) {
      cfg.entity_vocab.clear();
      for (const auto& value :
           wozloc::Ontology::load(ontology_path).all_values())
        cfg.entity_vocab.insert(value);
    }
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--noisy")) cfg.noisy = noisy;
    if (app.count("--permutation")) cfg.permutation = permutation;

    wozloc::MockTranslator mock(cfg);
    return http_port >= 0 ? serve_http(mock, http_port) : serve_stdio(mock);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
