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
"""Smoke tests for the Python bindings."""

import math
import os
import pathlib

import numpy as np
import pytest

import victr

SOURCE_DIR = pathlib.Path(
    os.environ.get("VICTR_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
TOY = SOURCE_DIR / "data" / "toy"

MEN_RIDE_HORSES = """# caption_id = 1
# image_id = 1
1\ttwo\ttwo\tNUM\t_\tNumType=Card\t2\tnummod\t_\t_
2\tmen\tman\tNOUN\t_\tNumber=Plur\t4\tnsubj\t_\t_
3\tare\tbe\tAUX\t_\t_\t4\taux\t_\t_
4\triding\tride\tVERB\t_\t_\t0\troot\t_\t_
5\tbrown\tbrown\tADJ\t_\t_\t6\tamod\t_\t_
6\thorses\thorse\tNOUN\t_\tNumber=Plur\t4\tobj\t_\t_

"""


def test_parse_scene_graphs():
  (graph,) = victr.parse_scene_graphs(MEN_RIDE_HORSES)
  words = sorted(o["word"] for o in graph["objects"])
  assert words == ["horse", "horse", "man", "man"]
  assert len(graph["relations"]) == 2
  assert {a["word"] for a in graph["attributes"]} == {"brown"}


def test_parse_errors_raise_value_error():
  with pytest.raises(ValueError):
    victr.parse_scene_graphs("1\tdog\tdog\tNOUN\t_\t_\t0\troot\t_\t_\n")


def test_classify_geometric_relation():
  assert victr.classify_geometric_relation((0, 0, 10, 10), (20, 0, 10, 10)) == "left_of"
  assert victr.classify_geometric_relation((2, 2, 4, 4), (0, 0, 10, 10)) == "inside"


def test_gcn_forward_and_loss():
  a = victr.normalize_adjacency(np.array([[1.0, 1.0], [0.0, 1.0]]))
  np.testing.assert_allclose(a, [[0.5, 1 / math.sqrt(2)], [0.0, 1.0]])
  w1 = np.zeros((2, 3))
  w2 = np.zeros((3, 12))
  hidden, logits = victr.gcn_forward(a, w1, np.zeros(3), w2, np.zeros(12))
  assert hidden.shape == (2, 3)
  assert victr.masked_cross_entropy(logits, {0: 4}) == pytest.approx(math.log(12))


def test_train_gcn_two_cliques():
  block = np.ones((3, 3))
  a = victr.normalize_adjacency(np.block([[block, np.zeros((3, 3))], [np.zeros((3, 3)), block]]))
  labels = {i: int(i >= 3) for i in range(6)}
  result = victr.train_gcn(a, labels, hidden=16, num_classes=2, seed=1)
  assert result["accuracy"] == 1.0
  assert len(result["loss_history"]) == 200
  assert victr.gradient_check(a, labels, hidden=8, num_classes=2) < 1e-4


def test_pca_and_fusion():
  rng = np.random.default_rng(0)
  coords, eigenvalues = victr.pca_project(rng.normal(size=(10, 4)))
  assert coords.shape == (10, 2)
  assert eigenvalues[0] >= eigenvalues[1] >= 0
  words, sentence = victr.builtin_text_features(["a", "dog"], seed=3, width=8)
  np.testing.assert_allclose(np.linalg.norm(words, axis=1), 1.0)
  evs = rng.normal(size=(3, 5))
  attended, weights = victr.attend(words, evs, np.zeros((8, 5)))
  np.testing.assert_allclose(weights.sum(axis=1), 1.0)
  np.testing.assert_allclose(attended[0], evs.mean(axis=0))
  word, sent, attention = victr.fuse(words, sentence, evs, rng.normal(size=(8, 5)))
  assert word.shape == (2, 13)
  assert sent.shape == (13,)
  assert attention.shape == (2, 3)


def test_run_stage(tmp_path):
  overrides = {"out_dir": str(tmp_path), "epochs": "5"}
  config = str(TOY / "toy.cfg")
  assert victr.run_stage("parse", config, overrides)
  assert victr.run_stage("build-graphs", config, overrides)
  assert (tmp_path / "graphs" / "basic.vg").exists()
  with pytest.raises(ValueError):
    victr.run_stage("compose", config, overrides)
  with pytest.raises(ValueError):
    victr.run_stage("dance", config, overrides)
