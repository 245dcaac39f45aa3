# Copyright 2026 The VICTR Authors.
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
"""Python bindings for the VICTR pipeline core."""

import json

from victr._core import (
    InputError,
    InvariantError,
    attend,
    builtin_text_features,
    classify_geometric_relation,
    fuse,
    gcn_forward,
    gradient_check,
    masked_cross_entropy,
    normalize_adjacency,
    pca_project,
    run_stage,
    train_gcn,
)


def parse_scene_graphs(conllu, max_duplication=10, many_value=3):
  """Parses CoNLL-U text into a list of scene-graph dicts."""
  from victr._core import parse_scene_graphs_json
  return json.loads(parse_scene_graphs_json(conllu, max_duplication, many_value))


__all__ = [
    "InputError",
    "InvariantError",
    "attend",
    "builtin_text_features",
    "classify_geometric_relation",
    "fuse",
    "gcn_forward",
    "gradient_check",
    "masked_cross_entropy",
    "normalize_adjacency",
    "parse_scene_graphs",
    "pca_project",
    "run_stage",
    "train_gcn",
]
