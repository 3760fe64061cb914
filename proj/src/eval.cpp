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

#include "wozloc/eval.hpp"

#include <iomanip>
#include <sstream>

#include <httplib.h>

#include "wozloc/errors.hpp"
#include "wozloc/parallel.hpp"

namespace wozloc {

namespace {

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

Json ParseRequest::to_json() const {
  Json j;
  j["id"] = id;
  j["prev_state"] = prev_state;
  j["agent"] = agent;
  j["user"] = user;
  return j;
}

ParseRequest ParseRequest::from_json(const Json& j) {
  ParseRequest r;
  r.id = j.at("id").get<std::string>();
  r.prev_state = j.at("prev_state").get<std::string>();
  r.agent = j.at("agent").get<std::string>();
  r.user = j.at("user").get<std::string>();
  return r;
}

Json ParseResponse::to_json() const {
  Json j;
  j["id"] = id;
  j["next_state"] = next_state;
  return j;
}

ParseResponse ParseResponse::from_json(const Json& j) {
  ParseResponse r;
  r.id = j.at("id").get<std::string>();
  r.next_state = j.at("next_state").get<std::string>();
  return r;
}

StdioParserBackend::StdioParserBackend(const std::string& command) {
  process_ = std::make_unique<LineProcess>(command);
  auto line = process_->read_line();
  if (!line) throw BackendError("backend exited before handshake");
  Json hs = Json::parse(*line, nullptr, false);
  if (hs.is_discarded() || hs.value("protocol", "") != kParseProtocol)
    throw BackendError("unexpected backend handshake: " + *line);
}

ParseResponse StdioParserBackend::parse(const ParseRequest& request) {
  std::lock_guard<std::mutex> lock(mutex_);
  process_->write_line(request.to_json().dump());
  auto line = process_->read_line();
  if (!line) throw BackendError("backend closed the connection");
  ParseResponse response;
  try {
    response = ParseResponse::from_json(Json::parse(*line));
  } catch (const std::exception& e) {
    throw BackendError(std::string("malformed backend response: ") + e.what());
  }
  if (response.id != request.id)
    throw BackendError("backend response id mismatch: sent " + request.id +
                       ", got " + response.id);
  return response;
}

HttpParserBackend::HttpParserBackend(const std::string& url) {
  split_host_port(url, host_, port_);
  httplib::Client client(host_, port_);
  auto res = client.Get("/protocol");
  if (!res || res->status != 200)
    throw BackendError("backend endpoint unreachable: " + url);
  Json hs = Json::parse(res->body, nullptr, false);
  if (hs.is_discarded() || hs.value("protocol", "") != kParseProtocol)
    throw BackendError("unexpected backend handshake from " + url);
}

ParseResponse HttpParserBackend::parse(const ParseRequest& request) {
  std::lock_guard<std::mutex> lock(mutex_);
  httplib::Client client(host_, port_);
  auto res = client.Post("/parse", request.to_json().dump(),
                         "application/json");
  if (!res || res->status != 200)
    throw BackendError("backend POST /parse failed");
  ParseResponse response;
  try {
    response = ParseResponse::from_json(Json::parse(res->body));
  } catch (const std::exception& e) {
    throw BackendError(std::string("malformed backend response: ") + e.what());
  }
  if (response.id != request.id)
    throw BackendError("backend response id mismatch");
  return response;
}

ScriptedBackend::ScriptedBackend(Kind kind, const Corpus& corpus)
    : kind_(kind) {
  for (const auto& dialogue : corpus.dialogues) {
    BeliefState prev;
    for (const auto& turn : dialogue.turns) {
      TurnInfo info;
      info.gold_delta = diff_states(prev, turn.gold_state);
      info.index = turn.index;
      auto key = std::make_pair(turn.agent_utterance, turn.user_utterance);
      if (!turns_.emplace(std::move(key), std::move(info)).second)
        throw ValidationError(
            "scripted backends need globally unique (agent, user) pairs; "
            "duplicate in dialogue " +
            dialogue.id);
      prev = turn.gold_state;
    }
  }
}

ScriptedBackend::Kind ScriptedBackend::kind_from_string(
    const std::string& name) {
  if (name == "oracle") return Kind::Oracle;
  if (name == "echo") return Kind::Echo;
  if (name == "scripted-error") return Kind::ScriptedError;
  throw UsageError("unknown backend kind: " + name);
}

ParseResponse ScriptedBackend::parse(const ParseRequest& request) {
  ParseResponse response;
  response.id = request.id;
  BeliefState prev = parse_state(request.prev_state);
  if (kind_ == Kind::Echo) {
    response.next_state = serialize_state(prev);
    return response;
  }
  auto it = turns_.find(std::make_pair(request.agent, request.user));
  if (it == turns_.end())
    throw BackendError("unknown turn for agent='" + request.agent +
                       "' user='" + request.user + "'");
  BeliefState next = apply_delta(prev, it->second.gold_delta);
  if (kind_ == Kind::ScriptedError && (it->second.index + 1) % 3 == 0)
    next.insert_or_assign(SlotId{"bogus", "slot"}, SlotValue::regular("x"));
  response.next_state = serialize_state(next);
  return response;
}

EvalRun run_csp_loop(const Corpus& corpus, ParserBackend& backend,
                     const EvalOptions& options) {
  const std::size_t n = corpus.dialogues.size();
  std::vector<EvalRun> partials(n);

  run_parallel(n, options.jobs, [&](std::size_t i) {
    const Dialogue& dialogue = corpus.dialogues[i];
    EvalRun& local = partials[i];
    BeliefState prev_predicted;
    BeliefState prev_gold;
    for (const auto& turn : dialogue.turns) {
      if (options.skip_final_turn &&
          turn.index + 1 == static_cast<int>(dialogue.turns.size()))
        break;
      PredictionRecord record;
      record.dialogue_id = dialogue.id;
      record.turn = turn.index;
      record.mode = options.mode;
      record.input_state = options.mode == EvalMode::GoldState
                               ? prev_gold
                               : prev_predicted;
      record.gold_state = turn.gold_state;

      ParseRequest request;
      request.id = dialogue.id + ":" + std::to_string(turn.index);
      request.prev_state = serialize_state(record.input_state);
      request.agent = turn.agent_utterance;
      request.user = turn.user_utterance;

      bool transport_lost = false;
      try {
        ParseResponse response = backend.parse(request);
        record.predicted_state = parse_state(response.next_state);
        record.correct = record.predicted_state == record.gold_state;
      } catch (const ParseError& e) {
        record.correct = false;
        local.findings.push_back({dialogue.id, turn.index,
                                  std::string("unparseable next_state: ") +
                                      e.what()});
      } catch (const BackendError& e) {
        transport_lost = true;
        local.findings.push_back({dialogue.id, turn.index,
                                  std::string("backend transport lost: ") +
                                      e.what()});
      }
      if (transport_lost) break;  // abort this dialogue, keep the corpus run

      local.records.push_back(record);
      prev_predicted = record.predicted_state;
      prev_gold = turn.gold_state;
    }
  });

  EvalRun run;
  for (auto& partial : partials) {
    run.records.insert(run.records.end(), partial.records.begin(),
                       partial.records.end());
    run.findings.insert(run.findings.end(), partial.findings.begin(),
                        partial.findings.end());
  }
  return run;
}

namespace {

double accuracy_for_mode(const std::vector<PredictionRecord>& records,
                         EvalMode mode, const char* metric) {
  if (records.empty())
    throw UsageError(std::string(metric) +
                     " is undefined for an empty record set");
  std::size_t correct = 0;
  for (const auto& r : records) {
    if (r.mode != mode)
      throw UsageError(std::string(metric) +
                       " requires records from the matching evaluation mode");
    if (r.correct) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

}  // namespace

double compute_jga(const std::vector<PredictionRecord>& records) {
  return accuracy_for_mode(records, EvalMode::PredictedState, "JGA");
}

double compute_gjga(const std::vector<PredictionRecord>& records) {
  return accuracy_for_mode(records, EvalMode::GoldState, "GJGA");
}

MetricsReport make_metrics_report(const EvalRun& run, EvalMode mode) {
  MetricsReport report;
  report.mode = mode;
  report.accuracy = mode == EvalMode::GoldState ? compute_gjga(run.records)
                                                : compute_jga(run.records);
  report.turn_count = run.records.size();
  for (const auto& r : run.records) {
    auto& d = report.per_dialogue[r.dialogue_id];
    auto& t = report.per_turn[r.turn];
    ++d.second;
    ++t.second;
    if (r.correct) {
      ++d.first;
      ++t.first;
      ++report.correct_count;
    }
  }
  report.findings = run.findings;
  return report;
}

Json MetricsReport::to_json() const {
  Json j;
  j["metric"] = mode == EvalMode::GoldState ? "gjga" : "jga";
  j["accuracy"] = accuracy;
  j["turns"] = turn_count;
  j["correct"] = correct_count;
  Json by_dialogue = Json::object();
  for (const auto& [id, counts] : per_dialogue) {
    Json e;
    e["correct"] = counts.first;
    e["total"] = counts.second;
    by_dialogue[id] = std::move(e);
  }
  j["per_dialogue"] = std::move(by_dialogue);
  Json by_turn = Json::object();
  for (const auto& [index, counts] : per_turn) {
    Json e;
    e["correct"] = counts.first;
    e["total"] = counts.second;
    by_turn[std::to_string(index)] = std::move(e);
  }
  j["per_turn"] = std::move(by_turn);
  j["findings"] = Json::array();
  for (const auto& f : findings) {
    Json fj;
    fj["dialogue"] = f.dialogue_id;
    fj["turn"] = f.turn;
    fj["message"] = f.message;
    j["findings"].push_back(std::move(fj));
  }
  return j;
}

std::string MetricsReport::to_text() const {
  std::ostringstream out;
  out << (mode == EvalMode::GoldState ? "GJGA" : "JGA") << ": " << std::fixed
      << std::setprecision(4) << accuracy << " (" << correct_count << "/"
      << turn_count << " turns)\n";
  if (!findings.empty()) out << "findings: " << findings.size() << "\n";
  return out.str();
}

}  // namespace wozloc
