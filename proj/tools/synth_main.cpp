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

#include "wozloc/corpus.hpp"
#include "wozloc/errors.hpp"
#include "wozloc/json_io.hpp"
#include "wozloc/synth.hpp"

namespace {

using wozloc::Json;

std::optional<wozloc::FindingKind> kind_from_name(const std::string& name) {
  if (name == "inexact-match") return wozloc::FindingKind::InexactMatch;
  if (name == "missing-slot") return wozloc::FindingKind::MissingSlot;
  if (name == "extra-slot") return wozloc::FindingKind::ExtraSlot;
  if (name == "delayed-annotation")
    return wozloc::FindingKind::DelayedAnnotation;
  if (name == "empty-annotation") return wozloc::FindingKind::EmptyAnnotation;
  if (name == "range-anomaly") return wozloc::FindingKind::RangeAnomaly;
  return std::nullopt;
}

Json expected_json(const std::vector<wozloc::Finding>& findings) {
  Json arr = Json::array();
  for (const auto& f : findings) arr.push_back(f.to_json());
  return arr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthetic fixture generator"};
  std::string kind = "clean";
  std::string out_path, expected_path;
  std::string source_ontology_path, target_ontology_path, dict_path;
  std::string mock_config_path, lint_config_path;
  wozloc::synth::CorpusSpec spec;
  uint64_t mock_seed = 0;
  bool mock_noisy = false;

  app.add_option("--kind", kind,
                 "clean | eval | mixed | inexact-match | missing-slot | "
                 "extra-slot | delayed-annotation | empty-annotation | "
                 "range-anomaly");
  app.add_option("--out", out_path, "canonical corpus output");
  app.add_option("--expected", expected_path,
                 "expected findings JSON (planted kinds)");
  app.add_option("--dialogues", spec.dialogues, "dialogue count");
  app.add_option("--turns", spec.turns, "turns per dialogue");
  app.add_option("--seed", spec.seed, "generator seed");
  app.add_option("--split", spec.split, "corpus split label");
  app.add_option("--source-ontology", source_ontology_path,
                 "also write the source ontology here");
  app.add_option("--target-ontology", target_ontology_path,
                 "also write the target ontology here");
  app.add_option("--dict", dict_path, "also write the dependency dictionary");
  app.add_option("--mock-config", mock_config_path,
                 "also write a mock translator config");
  app.add_option("--mock-seed", mock_seed, "seed for --mock-config");
  app.add_flag("--mock-noisy", mock_noisy, "noisy --mock-config");
  app.add_option("--lint-config", lint_config_path,
                 "also write lint settings for this schema");

  try {
    app.parse(argc, argv);

    if (!source_ontology_path.empty())
      wozloc::synth::source_ontology().save(source_ontology_path);
    if (!target_ontology_path.empty())
      wozloc::synth::target_ontology().save(target_ontology_path);
    if (!dict_path.empty())
      wozloc::synth::dependency_dictionary().save(dict_path);
    if (!mock_config_path.empty())
      wozloc::write_json_file(
          mock_config_path,
          wozloc::synth::mock_config(mock_seed, mock_noisy).to_json());
    if (!lint_config_path.empty()) {
      Json j;
      j["inferable"] = Json::array();
      for (const auto& slot : wozloc::synth::default_lint_config().inferable_slots)
        j["inferable"].push_back(slot.domain + " " + slot.slot);
      j["max-edit-distance"] =
          wozloc::synth::default_lint_config().max_edit_distance;
      wozloc::write_json_file(lint_config_path, j);
    }

    if (out_path.empty()) return 0;
    if (kind == "clean") {
      wozloc::save_canonical(wozloc::synth::make_clean_corpus(spec), out_path);
    } else if (kind == "eval") {
      wozloc::save_canonical(
          wozloc::synth::make_eval_corpus(spec.dialogues, spec.seed), out_path);
    } else if (kind == "mixed") {
      auto planted = wozloc::synth::make_mixed_corpus(spec);
      wozloc::save_canonical(planted.corpus, out_path);
      if (!expected_path.empty())
        wozloc::write_json_file(expected_path, expected_json(planted.expected));
    } else if (auto planted_kind = kind_from_name(kind)) {
      auto planted = wozloc::synth::make_planted_corpus(*planted_kind, spec);
      wozloc::save_canonical(planted.corpus, out_path);
      if (!expected_path.empty())
        wozloc::write_json_file(expected_path, expected_json(planted.expected));
    } else {
      throw wozloc::UsageError("unknown fixture kind: " + kind);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const wozloc::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
