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

#include "wozloc/corpus.hpp"
#include "wozloc/eval.hpp"
#include "wozloc/json_io.hpp"

namespace {

using wozloc::Json;

int serve_stdio(wozloc::ScriptedBackend& backend) {
  Json handshake;
  handshake["protocol"] = wozloc::kParseProtocol;
  std::cout << handshake.dump() << "\n" << std::flush;

  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    Json reply;
    try {
      auto request = wozloc::ParseRequest::from_json(Json::parse(line));
      reply = backend.parse(request).to_json();
    } catch (const std::exception& e) {
      reply["error"] = e.what();
    }
    std::cout << reply.dump() << "\n" << std::flush;
  }
  return 0;
}

int serve_http(wozloc::ScriptedBackend& backend, int port) {
  httplib::Server server;
  server.Get("/protocol", [](const httplib::Request&, httplib::Response& res) {
    Json handshake;
    handshake["protocol"] = wozloc::kParseProtocol;
    res.set_content(handshake.dump(), "application/json");
  });
  server.Post("/parse",
              [&backend](const httplib::Request& req, httplib::Response& res) {
                try {
                  auto request =
                      wozloc::ParseRequest::from_json(Json::parse(req.body));
                  res.set_content(backend.parse(request).to_json().dump(),
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
  CLI::App app{"reference parser backends (newline JSON or HTTP)"};
  std::string kind = "oracle";
  std::string corpus_path;
  int http_port = -1;

  app.add_option("--kind", kind, "oracle | echo | scripted-error");
  app.add_option("--corpus", corpus_path, "canonical corpus with gold states")
      ->required();
  app.add_option("--http", http_port, "serve HTTP on this port instead");

  try {
    app.parse(argc, argv);
    wozloc::Corpus corpus = wozloc::load_canonical(corpus_path);
    wozloc::ScriptedBackend backend(
        wozloc::ScriptedBackend::kind_from_string(kind), corpus);
    return http_port >= 0 ? serve_http(backend, http_port)
                          : serve_stdio(backend);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
