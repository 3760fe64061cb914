# Copyright 2026 The wozloc Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================
"""Dialogue-state serialization, span alignment, translation and QA."""

from wozloc._core import (
    AlignmentFailure,
    Corpus,
    Ontology,
    UsageError,
    ValidationError,
    align_span,
    detect_entity_spans,
    edit_distance,
    evaluate_scripted,
    expand_range,
    lint,
    make_clean_corpus,
    measure_faithfulness,
    numeric_span_recover,
    parse_state,
    serialize_state,
    split_sentences,
    translate_with_mock,
)

__all__ = [
    "AlignmentFailure",
    "Corpus",
    "Ontology",
    "UsageError",
    "ValidationError",
    "align_span",
    "detect_entity_spans",
    "edit_distance",
    "evaluate_scripted",
    "expand_range",
    "lint",
    "make_clean_corpus",
    "measure_faithfulness",
    "numeric_span_recover",
    "parse_state",
    "serialize_state",
    "split_sentences",
    "translate_with_mock",
]

__version__ = "0.1.0"
