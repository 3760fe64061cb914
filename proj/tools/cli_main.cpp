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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wozloc/align.hpp"
#include "wozloc/corpus.hpp"
#include "wozloc/errors.hpp"
#include "wozloc/eval.hpp"
#include "wozloc/json_io.hpp"
#include "wozloc/lint.hpp"
#include "wozloc/ontology.hpp"
#include "wozloc/pipeline.hpp"
#include "wozloc/translator.hpp"

namespace {

using wozloc::Json;
using wozloc::UsageError;

std::string require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw UsageError(what + " path required");
  if (!std::filesystem::exists(path))
    throw UsageError(what + " file not found: " + path);
  return path;
}

// JSON config merged under explicit flags; flags win, then config, then (for
// the seed only) the WOZLOC_SEED environment variable.
struct Overlay {
  Json config = nullptr;

  void load(const std::string& path) {
    if (!path.empty())
      config = wozloc::load_json_file(require_file(path, "config"));
  }
  bool has(const char* key) const {
    return config.is_object() && config.contains(key);
  }
};

template <typename T>
void merge(const CLI::App& sub, const Overlay& overlay, const char* flag,
           const char* key, T& value) {
  if (sub.count(flag) == 0 && overlay.has(key))
    value = overlay.config.at(key).get<T>();
}

void merge_seed(const CLI::App& sub, const Overlay& overlay, uint64_t& seed) {
  if (sub.count("--seed") > 0) return;
  if (overlay.has("seed")) {
    seed = overlay.config.at("seed").get<uint64_t>();
    return;
  }
  if (const char* env = std::getenv("WOZLOC_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw UsageError("WOZLOC_SEED must be a decimal integer");
    seed = v;
  }
}

wozloc::SlotId parse_slot_id(const std::string& text) {
  auto space = text.find(' ');
  if (space == std::string::npos || space == 0 || space + 1 == text.size())
    throw UsageError("slot ids are written as 'domain slot': " + text);
  return {text.substr(0, space), text.substr(space + 1)};
}

struct ConvertOptions {
  std::string config, in, mapping, out, report;
  bool strict = false;
};

int run_convert(const CLI::App& sub, ConvertOptions o) {
  Overlay overlay;
  overlay.load(o.config);
  merge(sub, overlay, "--in", "in", o.in);
  merge(sub, overlay, "--mapping", "mapping", o.mapping);
  merge(sub, overlay, "--out", "out", o.out);
  merge(sub, overlay, "--report", "report", o.report);
  merge(sub, overlay, "--strict", "strict", o.strict);

  auto mapping = wozloc::FieldMapping::load(require_file(o.mapping, "mapping"));
  wozloc::ImportReport report;
  wozloc::Corpus corpus =
      wozloc::import_foreign(require_file(o.in, "input"), mapping, &report);
  if (o.out.empty()) throw UsageError("--out path required");
  wozloc::save_canonical(corpus, o.out);

  if (!o.report.empty()) {
    Json j;
    j["issues"] = Json::array();
    for (const auto& issue : report.issues) {
      Json e;
      e["dialogue"] = issue.dialogue_id;
      e["turn"] = issue.turn;
      e["message"] = issue.message;
      j["issues"].push_back(std::move(e));
    }
    j["unknown_slots"] = Json::array();
    for (const auto& [slot, count] : report.unknown_slots) {
      Json e;
      e["domain"] = slot.domain;
      e["slot"] = slot.slot;
      e["count"] = count;
      j["unknown_slots"].push_back(std::move(e));
    }
    wozloc::write_json_file(o.report, j);
  }

  std::cout << wozloc::corpus_stats(corpus).to_text();
  std::cout << "issues: " << report.issues.size() << "\n";
  for (const auto& [slot, count] : report.unknown_slots)
    std::cout << "unknown slot " << slot.domain << " " << slot.slot << ": "
              << count << "\n";
  if (o.strict && !report.issues.empty())
    throw wozloc::ValidationError("import produced " +
                                  std::to_string(report.issues.size()) +
                                  " issues in strict mode");
  return 0;
}

struct StatsOptions {
  std::string config, in, report;
};

int run_stats(const CLI::App& sub, StatsOptions o) {
  Overlay overlay;
  overlay.load(o.config);
  merge(sub, overlay, "--in", "in", o.in);
  merge(sub, overlay, "--report", "report", o.report);

  wozloc::Corpus corpus = wozloc::load_canonical(require_file(o.in, "input"));
  wozloc::StatsReport stats = wozloc::corpus_stats(corpus);
  if (!o.report.empty()) wozloc::write_json_file(o.report, stats.to_json());
  std::cout << stats.to_text();
  return 0;
}

struct SpansOptions {
  std::string config, in, out;
};

int run_spans(const CLI::App& sub, SpansOptions o) {
  Overlay overlay;
  overlay.load(o.config);
  merge(sub, overlay, "--in", "in", o.in);
  merge(sub, overlay, "--out", "out", o.out);

  wozloc::Corpus corpus = wozloc::load_canonical(require_file(o.in, "input"));
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out, std::ios::binary);
    if (!file) throw wozloc::Error("cannot open for writing: " + o.out);
  }
  std::ostream& out = o.out.empty() ? std::cout : file;

  auto spans_json = [](const std::vector<wozloc::CharSpan>& spans) {
    Json arr = Json::array();
    for (const auto& span : spans) {
      Json s;
      s["start"] = span.start;
      s["end"] = span.end;
      s["domain"] = span.slot.domain;
      s["slot"] = span.slot.slot;
      s["value"] = span.value;
      arr.push_back(std::move(s));
    }
    return arr;
  };
  for (const auto& dialogue : corpus.dialogues) {
    for (const auto& turn : dialogue.turns) {
      Json line;
      line["dialogue"] = dialogue.id;
      line["turn"] = turn.index;
      line["agent"] =
          spans_json(detect_entity_spans(turn.agent_utterance, turn.gold_state));
      line["user"] =
          spans_json(detect_entity_spans(turn.user_utterance, turn.gold_state));
      out << line.dump() << "\n";
    }
  }
  return 0;
}

struct TranslateOptions {
  std::string config, in, out, report;
  std::string src = "en", tgt = "de";
  std::string client_command, client_url;
  std::string dict_path, target_ontology_path;
  std::string strategy = "random-from-ontology";
  uint64_t seed = 0;
  double theta = 0.5;
  bool no_align = false;
  int jobs = 1;
};

int run_translate(const CLI::App& sub, TranslateOptions o) {
  Overlay overlay;
  overlay.load(o.config);
  merge(sub, overlay, "--in", "in", o.in);
  merge(sub, overlay, "--out", "out", o.out);
  merge(sub, overlay, "--report", "report", o.report);
  merge(sub, overlay, "--src", "src", o.src);
  merge(sub, overlay, "--tgt", "tgt", o.tgt);
  merge(sub, overlay, "--client", "client", o.client_command);
  merge(sub, overlay, "--client-url", "client-url", o.client_url);
  merge(sub, overlay, "--dict", "dict", o.dict_path);
  merge(sub, overlay, "--target-ontology", "target-ontology",
        o.target_ontology_path);
  merge(sub, overlay, "--strategy", "strategy", o.strategy);
  merge(sub, overlay, "--theta", "theta", o.theta);
  merge(sub, overlay, "--no-align", "no-align", o.no_align);
  merge(sub, overlay, "--jobs", "jobs", o.jobs);
  merge_seed(sub, overlay, o.seed);

  if (o.client_command.empty() == o.client_url.empty())
    throw UsageError("exactly one of --client and --client-url is required");
  if (o.out.empty()) throw UsageError("--out path required");

  wozloc::Corpus corpus = wozloc::load_canonical(require_file(o.in, "input"));
  wozloc::Ontology target = wozloc::Ontology::load(
      require_file(o.target_ontology_path, "target ontology"));
  wozloc::DependencyDictionary dict =
      wozloc::DependencyDictionary::load(require_file(o.dict_path, "dictionary"));
  dict.validate(corpus.ontology, target);

  std::unique_ptr<wozloc::TranslatorClient> client;
  if (!o.client_command.empty())
    client = std::make_unique<wozloc::StdioTranslatorClient>(o.client_command);
  else
    client = std::make_unique<wozloc::HttpTranslatorClient>(o.client_url);

  wozloc::PipelineConfig cfg;
  cfg.src_lang = o.src;
  cfg.tgt_lang = o.tgt;
  cfg.align.extension_threshold = o.theta;
  cfg.align_enabled = !o.no_align;
  cfg.seed = o.seed;
  cfg.strategy = wozloc::plan_strategy_from_string(o.strategy);
  cfg.jobs = o.jobs;

  wozloc::PipelineReport report;
  wozloc::Corpus translated =
      wozloc::translate_corpus(corpus, *client, dict, target, cfg, &report);
  wozloc::save_canonical(translated, o.out);

  wozloc::FaithfulnessReport faithfulness =
      wozloc::measure_faithfulness(translated);
  auto dictionary_findings = check_dictionary_consistency(translated, dict);

  if (!o.report.empty()) {
    Json j;
    j["pipeline"] = report.to_json();
    j["faithfulness"] = faithfulness.to_json();
    j["dictionary_findings"] = Json::array();
    for (const auto& f : dictionary_findings) {
      Json e;
      e["dialogue"] = f.dialogue_id;
      e["turn"] = f.turn;
      e["message"] = f.message;
      j["dictionary_findings"].push_back(std::move(e));
    }
    wozloc::write_json_file(o.report, j);
  }

  std::cout << "dialogues translated: " << translated.dialogues.size() << "/"
            << corpus.dialogues.size() << "\n"
            << "requests: " << report.trace.requests << "\n"
            << "numeric hits: " << report.trace.numeric_hits << "\n"
            << "attention alignments: " << report.trace.attention_alignments
            << "\n"
            << "alignment failures: " << report.trace.alignment_failures << "\n"
            << "faithfulness: " << faithfulness.rate() << "\n"
            << "dictionary violations: " << dictionary_findings.size() << "\n";
  return 0;
}

struct EvaluateOptions {
  std::string config, in, report;
  std::string backend_command, backend_url;
  std::string mode = "jga";
  bool skip_final_turn = false;
  int jobs = 1;
};

int run_evaluate(const CLI::App& sub, EvaluateOptions o) {
  Overlay overlay;
  overlay.load(o.config);
  merge(sub, overlay, "--in", "in", o.in);
  merge(sub, overlay, "--report", "report", o.report);
  merge(sub, overlay, "--backend", "backend", o.backend_command);
  merge(sub, overlay, "--backend-url", "backend-url", o.backend_url);
  merge(sub, overlay, "--mode", "mode", o.mode);
  merge(sub, overlay, "--skip-final-turn", "skip-final-turn", o.skip_final_turn);
  merge(sub, overlay, "--jobs", "jobs", o.jobs);

  if (o.backend_command.empty() == o.backend_url.empty())
    throw UsageError("exactly one of --backend and --backend-url is required");
  if (o.mode != "jga" && o.mode != "gjga")
    throw UsageError("--mode must be jga or gjga");

  wozloc::Corpus corpus = wozloc::load_canonical(require_file(o.in, "input"));
  std::unique_ptr<wozloc::ParserBackend> backend;
  if (!o.backend_command.empty())
    backend = std::make_unique<wozloc::StdioParserBackend>(o.backend_command);
  else
    backend = std::make_unique<wozloc::HttpParserBackend>(o.backend_url);

  wozloc::EvalOptions options;
  options.mode = o.mode == "jga" ? wozloc::EvalMode::PredictedState
                                 : wozloc::EvalMode::GoldState;
  options.skip_final_turn = o.skip_final_turn;
  options.jobs = o.jobs;

  wozloc::EvalRun run = wozloc::run_csp_loop(corpus, *backend, options);
  wozloc::MetricsReport metrics = wozloc::make_metrics_report(run, options.mode);
  if (!o.report.empty()) wozloc::write_json_file(o.report, metrics.to_json());
  std::cout << metrics.to_text();
  return 0;
}

struct LintOptions {
  std::string config, in, report;
  std::vector<std::string> inferable;
  int64_t sample = -1;
  uint64_t seed = 0;
  uint64_t max_edit_distance = 1;
};

int run_lint(const CLI::App& sub, LintOptions o) {
  Overlay overlay;
  overlay.load(o.config);
  merge(sub, overlay, "--in", "in", o.in);
  merge(sub, overlay, "--report", "report", o.report);
  merge(sub, overlay, "--inferable", "inferable", o.inferable);
  merge(sub, overlay, "--sample", "sample", o.sample);
  merge(sub, overlay, "--max-edit-distance", "max-edit-distance",
        o.max_edit_distance);
  merge_seed(sub, overlay, o.seed);

  wozloc::Corpus corpus = wozloc::load_canonical(require_file(o.in, "input"));
  wozloc::LintConfig cfg;
  for (const auto& id : o.inferable)
    cfg.inferable_slots.insert(parse_slot_id(id));
  cfg.max_edit_distance = static_cast<std::size_t>(o.max_edit_distance);
  if (o.sample >= 0) cfg.sample_size = static_cast<std::size_t>(o.sample);
  cfg.seed = o.seed;

  wozloc::LintReport report = wozloc::lint_corpus(corpus, cfg);
  if (!o.report.empty()) wozloc::write_json_file(o.report, report.to_json());
  std::cout << report.to_text();
  return 0;  // findings are advisory
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dialogue-state corpus toolkit"};
  app.require_subcommand(1);
  int result = 0;

  auto add_config = [](CLI::App* sub, std::string& path) {
    sub->add_option("--config", path, "JSON config merged under flags");
  };

  auto convert_opts = std::make_shared<ConvertOptions>();
  CLI::App* convert =
      app.add_subcommand("convert", "Import a foreign corpus as canonical JSON");
  add_config(convert, convert_opts->config);
  convert->add_option("--in", convert_opts->in, "foreign corpus file");
  convert->add_option("--mapping", convert_opts->mapping, "field mapping JSON");
  convert->add_option("--out", convert_opts->out, "canonical output file");
  convert->add_option("--report", convert_opts->report, "import report JSON");
  convert->add_flag("--strict", convert_opts->strict,
                    "fail when the import reports issues");
  convert->callback(
      [&result, convert, convert_opts] { result = run_convert(*convert, *convert_opts); });

  auto stats_opts = std::make_shared<StatsOptions>();
  CLI::App* stats = app.add_subcommand("stats", "Corpus summary table");
  add_config(stats, stats_opts->config);
  stats->add_option("--in", stats_opts->in, "canonical corpus file");
  stats->add_option("--report", stats_opts->report, "stats JSON file");
  stats->callback(
      [&result, stats, stats_opts] { result = run_stats(*stats, *stats_opts); });

  auto spans_opts = std::make_shared<SpansOptions>();
  CLI::App* spans =
      app.add_subcommand("spans", "Detected entity spans, one JSON per turn");
  add_config(spans, spans_opts->config);
  spans->add_option("--in", spans_opts->in, "canonical corpus file");
  spans->add_option("--out", spans_opts->out, "output file (default stdout)");
  spans->callback(
      [&result, spans, spans_opts] { result = run_spans(*spans, *spans_opts); });

  auto translate_opts = std::make_shared<TranslateOptions>();
  CLI::App* translate = app.add_subcommand(
      "translate", "Translate a corpus with span-aligned value substitution");
  add_config(translate, translate_opts->config);
  translate->add_option("--in", translate_opts->in, "canonical corpus file");
  translate->add_option("--out", translate_opts->out, "translated corpus file");
  translate->add_option("--report", translate_opts->report, "pipeline report");
  translate->add_option("--src", translate_opts->src, "source language");
  translate->add_option("--tgt", translate_opts->tgt, "target language");
  translate->add_option("--client", translate_opts->client_command,
                        "translator child command (newline JSON)");
  translate->add_option("--client-url", translate_opts->client_url,
                        "translator HTTP endpoint");
  translate->add_option("--dict", translate_opts->dict_path,
                        "dependency dictionary JSON");
  translate->add_option("--target-ontology",
                        translate_opts->target_ontology_path,
                        "target-language ontology JSON");
  translate->add_option("--strategy", translate_opts->strategy,
                        "dictionary | identity | random-from-ontology");
  translate->add_option("--seed", translate_opts->seed, "substitution seed");
  translate->add_option("--theta", translate_opts->theta,
                        "attention run extension threshold");
  translate->add_flag("--no-align", translate_opts->no_align,
                      "skip span alignment and substitution");
  translate->add_option("--jobs", translate_opts->jobs,
                        "parallel dialogues");
  translate->callback([&result, translate, translate_opts] {
    result = run_translate(*translate, *translate_opts);
  });

  auto evaluate_opts = std::make_shared<EvaluateOptions>();
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Score a parser backend over the state recurrence");
  add_config(evaluate, evaluate_opts->config);
  evaluate->add_option("--in", evaluate_opts->in, "canonical corpus file");
  evaluate->add_option("--report", evaluate_opts->report, "metrics JSON file");
  evaluate->add_option("--backend", evaluate_opts->backend_command,
                       "parser child command (newline JSON)");
  evaluate->add_option("--backend-url", evaluate_opts->backend_url,
                       "parser HTTP endpoint");
  evaluate->add_option("--mode", evaluate_opts->mode, "jga | gjga");
  evaluate->add_flag("--skip-final-turn", evaluate_opts->skip_final_turn,
                     "exclude each dialogue's last turn");
  evaluate->add_option("--jobs", evaluate_opts->jobs, "parallel dialogues");
  evaluate->callback([&result, evaluate, evaluate_opts] {
    result = run_evaluate(*evaluate, *evaluate_opts);
  });

  auto lint_opts = std::make_shared<LintOptions>();
  CLI::App* lint =
      app.add_subcommand("lint", "Scan a corpus for annotation defects");
  add_config(lint, lint_opts->config);
  lint->add_option("--in", lint_opts->in, "canonical corpus file");
  lint->add_option("--report", lint_opts->report, "lint report JSON file");
  lint->add_option("--inferable", lint_opts->inferable,
                   "'domain slot' exempt from extra-slot checks");
  lint->add_option("--sample", lint_opts->sample,
                   "inspect a seeded sample of turns");
  lint->add_option("--seed", lint_opts->seed, "sampling seed");
  lint->add_option("--max-edit-distance", lint_opts->max_edit_distance,
                   "near-miss tolerance");
  lint->callback(
      [&result, lint, lint_opts] { result = run_lint(*lint, *lint_opts); });

  try {
    app.parse(argc, argv);
    return result;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
