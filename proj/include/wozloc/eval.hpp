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

#ifndef WOZLOC_EVAL_HPP_
#define WOZLOC_EVAL_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "wozloc/corpus.hpp"
#include "wozloc/json_io.hpp"
#include "wozloc/state.hpp"
#include "wozloc/subprocess.hpp"

namespace wozloc {

inline constexpr char kParseProtocol[] = "woz-parse/1";

// One belief-state prediction step: the backend reads the serialized
// previous state plus the turn's utterances and returns the serialized next
// state.
struct ParseRequest {
  std::string id;
  std::string prev_state;
  std::string agent;
  std::string user;

  Json to_json() const;
  static ParseRequest from_json(const Json& j);
};

struct ParseResponse {
  std::string id;
  std::string next_state;

  Json to_json() const;
  static ParseResponse from_json(const Json& j);
};

class ParserBackend {
 public:
  virtual ~ParserBackend() = default;
  // Throws BackendError on transport failure.
  virtual ParseResponse parse(const ParseRequest& request) = 0;
};

// Child process speaking newline-delimited JSON; handshake line
// {"protocol":"woz-parse/1"} expected first.
class StdioParserBackend : public ParserBackend {
 public:
  explicit StdioParserBackend(const std::string& command);
  ParseResponse parse(const ParseRequest& request) override;

 private:
  std::unique_ptr<LineProcess> process_;
  std::mutex mutex_;
};

// POST /parse with the request body; GET /protocol for the handshake.
class HttpParserBackend : public ParserBackend {
 public:
  explicit HttpParserBackend(const std::string& url);
  ParseResponse parse(const ParseRequest& request) override;

 private:
  std::string host_;
  int port_ = 0;
  std::mutex mutex_;
};

// Reference backends, keyed by the (agent, user) utterance pair, which the
// synthetic fixtures keep globally unique.
//  - oracle: applies the turn's gold delta to whatever previous state it is
//    given; correct in both evaluation modes by construction.
//  - echo: returns the input state unchanged.
//  - scripted-error: like oracle, but injects a bogus slot on every 3rd turn
//    of a dialogue (1-based), so errors compound in predicted-state mode.
class ScriptedBackend : public ParserBackend {
 public:
  enum class Kind { Oracle, Echo, ScriptedError };

  ScriptedBackend(Kind kind, const Corpus& corpus);
  ParseResponse parse(const ParseRequest& request) override;

  static Kind kind_from_string(const std::string& name);

 private:
  struct TurnInfo {
    StateDelta gold_delta;
    int index = 0;
  };
  Kind kind_;
  std::map<std::pair<std::string, std::string>, TurnInfo> turns_;
};

enum class EvalMode { PredictedState, GoldState };

struct PredictionRecord {
  std::string dialogue_id;
  int turn = 0;
  BeliefState input_state;
  BeliefState gold_state;
  BeliefState predicted_state;
  EvalMode mode = EvalMode::PredictedState;
  bool correct = false;
};

struct EvalFinding {
  std::string dialogue_id;
  int turn = -1;
  std::string message;
};

struct EvalOptions {
  EvalMode mode = EvalMode::PredictedState;
  // Excludes each dialogue's last turn from scoring (parting turns carry no
  // annotations in some corpora).
  bool skip_final_turn = false;
  int jobs = 1;
};

struct EvalRun {
  std::vector<PredictionRecord> records;
  std::vector<EvalFinding> findings;
};

// Iterates the state-tracking recurrence over every dialogue: turn 0 gets
// the empty state; afterwards the previous predicted state (predicted-state
// mode) or the previous gold state (gold-state mode) is fed forward.
// Malformed backend responses score the turn incorrect; transport loss
// aborts the dialogue and the run continues.
EvalRun run_csp_loop(const Corpus& corpus, ParserBackend& backend,
                     const EvalOptions& options);

// Fraction of correct records. compute_jga requires predicted-state records,
// compute_gjga gold-state records; empty input → UsageError.
double compute_jga(const std::vector<PredictionRecord>& records);
double compute_gjga(const std::vector<PredictionRecord>& records);

struct MetricsReport {
  EvalMode mode = EvalMode::PredictedState;
  double accuracy = 0.0;  // jga or gjga depending on mode
  std::size_t turn_count = 0;
  std::size_t correct_count = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>>
      per_dialogue;  // id → (correct, total)
  std::map<int, std::pair<std::size_t, std::size_t>>
      per_turn;  // turn index → (correct, total)
  std::vector<EvalFinding> findings;

  Json to_json() const;
  std::string to_text() const;
};

MetricsReport make_metrics_report(const EvalRun& run, EvalMode mode);

}  // namespace wozloc

#endif  // WOZLOC_EVAL_HPP_
