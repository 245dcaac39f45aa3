// Copyright 2026 The VICTR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "victr/bounding_box.h"
#include "victr/corpus.h"
#include "victr/embedding.h"
#include "victr/error.h"
#include "victr/fusion.h"
#include "victr/gcn.h"
#include "victr/geometry.h"
#include "victr/pipeline.h"
#include "victr/relational_graph.h"
#include "victr/scene_parser.h"

namespace py = pybind11;

namespace victr {
namespace {

NormalizedAdjacency FromDense(const Eigen::MatrixXd &a) {
  if (a.rows() != a.cols()) throw InputError("adjacency must be square");
  NormalizedAdjacency out;
  out.matrix = a.sparseView();
  return out;
}

GcnModel MakeModel(Eigen::MatrixXd w1, Eigen::VectorXd b1, Eigen::MatrixXd w2,
                   Eigen::VectorXd b2) {
  GcnModel m;
  m.w1 = std::move(w1);
  m.b1 = std::move(b1);
  m.w2 = std::move(w2);
  m.b2 = std::move(b2);
  return m;
}

BoundingBox ToBox(const std::array<double, 4> &b) { return BoundingBox{b[0], b[1], b[2], b[3]}; }

std::string ParseSceneGraphsJson(const std::string &conllu, int max_duplication, int many_value) {
  QuantifierLexicon q = DefaultQuantifierLexicon();
  q.max_duplication = max_duplication;
  q.many_value = many_value;
  const SuperClassLexicon sc = DefaultSuperClassLexicon();
  nlohmann::json out = nlohmann::json::array();
  for (const DependencyGraph &g : ParseConllu(conllu, "<string>")) {
    out.push_back(SceneGraphToJson(ParseSceneGraph(g, q, sc)));
  }
  return out.dump();
}

py::dict TrainGcn(const Eigen::MatrixXd &adjacency, const NodeLabels &labels, int hidden,
                  int num_classes, double learning_rate, int epochs, uint64_t seed) {
  const NormalizedAdjacency adj = FromDense(adjacency);
  TrainConfig cfg;
  cfg.learning_rate = learning_rate;
  cfg.epochs = epochs;
  cfg.seed = seed;
  cfg.Validate();
  TrainResult r = Train(InitGcnModel(adj.size(), hidden, num_classes, cfg), adj, labels, cfg);
  py::dict out;
  out["embeddings"] = ExtractEmbeddings(r.model, adj).vectors;
  out["loss_history"] = r.loss_history;
  out["accuracy"] = Accuracy(r.model, adj, labels);
  out["w1"] = r.model.w1;
  out["b1"] = r.model.b1;
  out["w2"] = r.model.w2;
  out["b2"] = r.model.b2;
  return out;
}

std::string RunStage(const std::string &command, const std::string &config_path,
                     const std::map<std::string, std::string> &overrides,
                     const std::string &argument) {
  const PipelineConfig config = LoadPipelineConfig(config_path, overrides);
  if (command == "parse") return RunParse(config).summary;
  if (command == "build-graphs") return RunBuildGraphs(config).summary;
  if (command == "train") return RunTrain(config, argument.empty() ? "all" : argument).summary;
  if (command == "compose") return RunCompose(config).summary;
  if (command == "fuse") return RunFuse(config).summary;
  if (command == "project") return RunProject(config, argument.empty() ? "object" : argument).summary;
  if (command == "stats") return RunStats(config).summary;
  throw InputError("unknown command '" + command + "'");
}

}  // namespace
}  // namespace victr

PYBIND11_MODULE(_core, m) {
  using namespace victr;
  m.doc() = "VICTR pipeline core";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

  m.def("parse_scene_graphs_json", &ParseSceneGraphsJson, py::arg("conllu"),
        py::arg("max_duplication") = 10, py::arg("many_value") = 3,
        "Parse CoNLL-U text into a JSON list of scene graphs.");

  m.def(
      "classify_geometric_relation",
      [](const std::array<double, 4> &s, const std::array<double, 4> &o) {
        return std::string(GeometricRelationName(ClassifyGeometricRelation(ToBox(s), ToBox(o))));
      },
      py::arg("subject_box"), py::arg("object_box"),
      "Geometric relation of subject box (x, y, w, h) relative to object box.");

  m.def(
      "normalize_adjacency",
      [](const Eigen::MatrixXd &a) {
        return SymmetricNormalize(SparseMatrix(a.sparseView())).ToDense();
      },
      py::arg("adjacency"), "Symmetric degree normalization D^-1/2 A D^-1/2.");

  m.def(
      "gcn_forward",
      [](const Eigen::MatrixXd &adjacency, Eigen::MatrixXd w1, Eigen::VectorXd b1,
         Eigen::MatrixXd w2, Eigen::VectorXd b2) {
        const GcnActivations act =
            Forward(MakeModel(std::move(w1), std::move(b1), std::move(w2), std::move(b2)),
                    FromDense(adjacency));
        return py::make_tuple(act.hidden, act.logits);
      },
      py::arg("adjacency"), py::arg("w1"), py::arg("b1"), py::arg("w2"), py::arg("b2"),
      "Two-layer GCN forward pass; returns (hidden, logits).");

  m.def("masked_cross_entropy", &MaskedCrossEntropy, py::arg("logits"), py::arg("labels"));

  m.def("train_gcn", &TrainGcn, py::arg("adjacency"), py::arg("labels"), py::arg("hidden"),
        py::arg("num_classes"), py::arg("learning_rate") = 0.02, py::arg("epochs") = 200,
        py::arg("seed") = 0, "Train a GCN on a normalized dense adjacency.");

  m.def(
      "gradient_check",
      [](const Eigen::MatrixXd &adjacency, const NodeLabels &labels, int hidden, int num_classes,
         double epsilon, uint64_t seed) {
        TrainConfig cfg;
        cfg.seed = seed;
        const NormalizedAdjacency adj = FromDense(adjacency);
        return GradientCheck(InitGcnModel(adj.size(), hidden, num_classes, cfg), adj, labels,
                             epsilon, 128, seed);
      },
      py::arg("adjacency"), py::arg("labels"), py::arg("hidden"), py::arg("num_classes"),
      py::arg("epsilon") = 1e-5, py::arg("seed") = 0,
      "Max relative error between analytic and numeric gradients of a fresh model.");

  m.def(
      "pca_project",
      [](const Eigen::MatrixXd &vectors, int out_dim) {
        const PcaResult r = PcaProject(vectors, out_dim);
        return py::make_tuple(r.coordinates, r.eigenvalues);
      },
      py::arg("vectors"), py::arg("out_dim") = 2, "Returns (coordinates, eigenvalues).");

  m.def(
      "attend",
      [](const Eigen::MatrixXd &words, const Eigen::MatrixXd &evs, const Eigen::MatrixXd &w) {
        TextFeatures text;
        text.words = words;
        VisualSemanticMatrix vs;
        vs.rows = evs;
        const Attention a = Attend(text, vs, FusionParameters{w});
        return py::make_tuple(a.attended, a.weights);
      },
      py::arg("words"), py::arg("evs"), py::arg("w"), "Returns (attended, attention weights).");

  m.def(
      "fuse",
      [](const Eigen::MatrixXd &words, const Eigen::VectorXd &sentence,
         const Eigen::MatrixXd &evs, const Eigen::MatrixXd &w) {
        TextFeatures text{words, sentence};
        VisualSemanticMatrix vs;
        vs.rows = evs;
        const FusedRepresentation f = Fuse(0, text, vs, FusionParameters{w});
        return py::make_tuple(f.word, f.sentence, f.attention);
      },
      py::arg("words"), py::arg("sentence"), py::arg("evs"), py::arg("w"),
      "Returns (word-level, sentence-level, attention).");

  m.def(
      "builtin_text_features",
      [](const std::vector<std::string> &tokens, uint64_t seed, int width) {
        const TextFeatures t = BuiltinTextFeatures(tokens, seed, width);
        return py::make_tuple(t.words, t.sentence);
      },
      py::arg("tokens"), py::arg("seed") = 0, py::arg("width") = 256,
      "Deterministic unit word vectors and their mean.");

  m.def("run_stage", &RunStage, py::arg("command"), py::arg("config") = "",
        py::arg("overrides") = std::map<std::string, std::string>{}, py::arg("argument") = "",
        "Run one pipeline stage and return its summary line.");
}
