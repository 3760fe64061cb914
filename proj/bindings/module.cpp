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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "wozloc/align.hpp"
#include "wozloc/corpus.hpp"
#include "wozloc/errors.hpp"
#include "wozloc/eval.hpp"
#include "wozloc/lint.hpp"
#include "wozloc/ontology.hpp"
#include "wozloc/pipeline.hpp"
#include "wozloc/rng.hpp"
#include "wozloc/state.hpp"
#include "wozloc/synth.hpp"
#include "wozloc/text.hpp"
#include "wozloc/translator.hpp"

namespace py = pybind11;

namespace {

using wozloc::BeliefState;
using wozloc::Json;

// Belief states cross the boundary as {"<domain> <slot>": "<value>"} with
// dontcare spelled literally; Json payloads as native python objects.
BeliefState state_from_dict(const py::dict& d) {
  BeliefState state;
  for (const auto& item : d) {
    auto key = item.first.cast<std::string>();
    auto value = item.second.cast<std::string>();
    auto space = key.find(' ');
    if (space == std::string::npos)
      throw wozloc::UsageError("slot key must be '<domain> <slot>': " + key);
    wozloc::SlotId id{key.substr(0, space), key.substr(space + 1)};
    state.insert_or_assign(id, value == "dontcare"
                                   ? wozloc::SlotValue::dontcare()
                                   : wozloc::SlotValue::regular(value));
  }
  return state;
}

py::dict state_to_dict(const BeliefState& state) {
  py::dict d;
  for (const auto& [id, value] : state)
    d[py::str(id.domain + " " + id.slot)] =
        value.kind == wozloc::SlotValue::Kind::DontCare ? "dontcare"
                                                        : value.text;
  return d;
}

py::object json_to_py(const Json& j) {
  auto loads = py::module_::import("json").attr("loads");
  return loads(j.dump());
}

wozloc::TokenOffsets offsets_from_py(
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  return pairs;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "dialogue-state serialization, alignment, translation and QA";

  py::register_exception<wozloc::UsageError>(m, "UsageError");
  py::register_exception<wozloc::ValidationError>(m, "ValidationError");
  py::register_exception<wozloc::AlignmentFailure>(m, "AlignmentFailure");

  m.def(
      "serialize_state",
      [](const py::dict& state) {
        return wozloc::serialize_state(state_from_dict(state));
      },
      py::arg("state"),
      "Render a belief state as the canonical quoted-value string.");

  m.def(
      "parse_state",
      [](const std::string& encoded) {
        return state_to_dict(wozloc::parse_state(encoded));
      },
      py::arg("encoded"), "Parse the canonical string back into a dict.");

  m.def(
      "expand_range",
      [](const std::string& range_text, long long observed) {
        auto range = wozloc::parse_range(range_text);
        if (!range)
          throw wozloc::UsageError("not a numeric range: " + range_text);
        return wozloc::format_range(wozloc::expand_range(*range, observed));
      },
      py::arg("range_text"), py::arg("observed"),
      "Widen a lo-hi range just enough to cover an observed integer.");

  m.def(
      "split_sentences",
      [](const std::string& text) {
        std::vector<std::pair<std::string, std::size_t>> out;
        for (const auto& s : wozloc::split_sentences(text))
          out.emplace_back(s.text, s.offset);
        return out;
      },
      py::arg("text"), "Sentence pieces with byte offsets; lossless tiling.");

  m.def(
      "align_span",
      [](std::pair<std::size_t, std::size_t> src_span,
         const std::vector<std::pair<std::size_t, std::size_t>>& src_toks,
         const std::vector<std::pair<std::size_t, std::size_t>>& tgt_toks,
         const wozloc::AttentionMatrix& attention, double theta) {
        wozloc::CharSpan span;
        span.start = src_span.first;
        span.end = src_span.second;
        wozloc::AlignmentConfig cfg;
        cfg.extension_threshold = theta;
        auto out = wozloc::align_span(span, offsets_from_py(src_toks),
                                      offsets_from_py(tgt_toks), attention, cfg);
        return std::make_pair(out.start, out.end);
      },
      py::arg("src_span"), py::arg("src_tokens"), py::arg("tgt_tokens"),
      py::arg("attention"), py::arg("theta") = 0.5,
      "Project a source byte span through a cross-attention matrix.");

  m.def(
      "numeric_span_recover",
      [](const std::string& value, const std::string& target_text)
          -> std::optional<std::pair<std::size_t, std::size_t>> {
        return wozloc::numeric_span_recover(value, target_text);
      },
      py::arg("value"), py::arg("target_text"),
      "Locate a numeric/date/time value when it survives verbatim.");

  m.def(
      "detect_entity_spans",
      [](const std::string& utterance, const py::dict& state) {
        std::vector<py::dict> out;
        for (const auto& s :
             wozloc::detect_entity_spans(utterance, state_from_dict(state))) {
          py::dict d;
          d["start"] = s.start;
          d["end"] = s.end;
          d["domain"] = s.slot.domain;
          d["slot"] = s.slot.slot;
          d["value"] = s.value;
          out.push_back(std::move(d));
        }
        return out;
      },
      py::arg("utterance"), py::arg("state"),
      "Spans of state values occurring verbatim in the utterance.");

  m.def("edit_distance",
        [](const std::string& a, const std::string& b) {
          return wozloc::text::edit_distance(wozloc::text::decode_utf8(a),
                                             wozloc::text::decode_utf8(b));
        },
        py::arg("a"), py::arg("b"));

  py::class_<wozloc::Ontology>(m, "Ontology")
      .def_static("load", &wozloc::Ontology::load, py::arg("path"))
      .def("save", &wozloc::Ontology::save, py::arg("path"));

  py::class_<wozloc::Corpus>(m, "Corpus")
      .def_static(
          "load",
          [](const std::string& path) { return wozloc::load_canonical(path); },
          py::arg("path"))
      .def("save",
           [](const wozloc::Corpus& c, const std::string& path) {
             wozloc::save_canonical(c, path);
           },
           py::arg("path"))
      .def("stats",
           [](const wozloc::Corpus& c) {
             return json_to_py(wozloc::corpus_stats(c).to_json());
           })
      .def("__len__",
           [](const wozloc::Corpus& c) { return c.dialogues.size(); })
      .def("dialogue_ids",
           [](const wozloc::Corpus& c) {
             std::vector<std::string> ids;
             for (const auto& d : c.dialogues) ids.push_back(d.id);
             return ids;
           })
      .def("turn",
           [](const wozloc::Corpus& c, std::size_t dialogue, int turn) {
             const auto& d = c.dialogues.at(dialogue);
             const auto& t = d.turns.at(static_cast<std::size_t>(turn));
             py::dict out;
             out["dialogue"] = d.id;
             out["agent"] = t.agent_utterance;
             out["user"] = t.user_utterance;
             out["state"] = state_to_dict(t.gold_state);
             return out;
           },
           py::arg("dialogue"), py::arg("turn"));

  m.def(
      "make_clean_corpus",
      [](std::size_t dialogues, int turns, uint64_t seed) {
        wozloc::synth::CorpusSpec spec;
        spec.dialogues = dialogues;
        spec.turns = turns;
        spec.seed = seed;
        return wozloc::synth::make_clean_corpus(spec);
      },
      py::arg("dialogues") = 50, py::arg("turns") = 8, py::arg("seed") = 1,
      "Deterministic synthetic two-domain corpus with verbatim mentions.");

  m.def(
      "lint",
      [](const wozloc::Corpus& corpus,
         const std::vector<std::string>& inferable,
         std::optional<std::size_t> sample, uint64_t seed) {
        wozloc::LintConfig cfg = wozloc::synth::default_lint_config();
        if (!inferable.empty()) {
          cfg.inferable_slots.clear();
          for (const auto& key : inferable) {
            auto space = key.find(' ');
            if (space == std::string::npos)
              throw wozloc::UsageError("inferable slot must be '<domain> <slot>'");
            cfg.inferable_slots.insert(
                {key.substr(0, space), key.substr(space + 1)});
          }
        }
        cfg.sample_size = sample;
        cfg.seed = seed;
        py::list out;
        for (const auto& f : wozloc::lint_corpus(corpus, cfg).findings)
          out.append(json_to_py(f.to_json()));
        return out;
      },
      py::arg("corpus"),
      py::arg("inferable") = std::vector<std::string>{"restaurant budget"},
      py::arg("sample") = std::nullopt, py::arg("seed") = 0,
      "Run every misannotation detector; findings as dicts.");

  m.def(
      "evaluate_scripted",
      [](const wozloc::Corpus& corpus, const std::string& backend_kind,
         const std::string& mode, bool skip_final_turn) {
        wozloc::ScriptedBackend backend(
            wozloc::ScriptedBackend::kind_from_string(backend_kind), corpus);
        wozloc::EvalOptions options;
        if (mode == "jga")
          options.mode = wozloc::EvalMode::PredictedState;
        else if (mode == "gjga")
          options.mode = wozloc::EvalMode::GoldState;
        else
          throw wozloc::UsageError("mode must be jga or gjga");
        options.skip_final_turn = skip_final_turn;
        auto run = wozloc::run_csp_loop(corpus, backend, options);
        return json_to_py(
            wozloc::make_metrics_report(run, options.mode).to_json());
      },
      py::arg("corpus"), py::arg("backend") = "oracle",
      py::arg("mode") = "jga", py::arg("skip_final_turn") = false,
      "Drive the state-tracking recurrence against a reference backend.");

  m.def(
      "translate_with_mock",
      [](const wozloc::Corpus& corpus, uint64_t seed, bool noisy,
         bool align_enabled, double theta) {
        wozloc::MockTranslator client(
            wozloc::synth::mock_config(wozloc::mix_seed(seed, 0xa11), noisy));
        wozloc::PipelineConfig cfg;
        cfg.align.extension_threshold = theta;
        cfg.align_enabled = align_enabled;
        cfg.seed = seed;
        wozloc::PipelineReport report;
        auto translated = wozloc::translate_corpus(
            corpus, client, wozloc::synth::dependency_dictionary(),
            wozloc::synth::target_ontology(), cfg, &report);
        py::dict out;
        out["corpus"] = py::cast(std::move(translated));
        out["report"] = json_to_py(report.to_json());
        return out;
      },
      py::arg("corpus"), py::arg("seed") = 1, py::arg("noisy") = false,
      py::arg("align_enabled") = true, py::arg("theta") = 0.5,
      "Translate through the deterministic mock; returns corpus and report.");

  m.def(
      "measure_faithfulness",
      [](const wozloc::Corpus& corpus) {
        return json_to_py(wozloc::measure_faithfulness(corpus).to_json());
      },
      py::arg("corpus"),
      "Fraction of state-entering values occurring verbatim at their turn.");
}
