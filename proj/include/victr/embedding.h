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

// Visual semantic embeddings composed from the trained graph embeddings.
//
// With B the basic width and P the total positional width (six tables):
//
//   E_o(word) = basic ∥ left_of ∥ right_of ∥ above ∥ below ∥ inside ∥ surrounding
//   E_r(word) = same layout, width B + P
//   E_a(word) = basic only, width B
//
// A scene-graph object's visual semantic row is
//
//   E_o(word) ∥ mean E_a over its attributes ∥ mean E_r over incident relations
//
// of width 2(B + P) + B. Empty pools and unknown words give zero vectors.

#ifndef VICTR_EMBEDDING_H_
#define VICTR_EMBEDDING_H_

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "victr/gcn.h"
#include "victr/geometry.h"
#include "victr/relational_graph.h"
#include "victr/scene_graph.h"

namespace victr {

struct ComposedTables {
  int basic_width = 0;       // B
  int positional_width = 0;  // P, the six tables together
  std::map<std::string, Eigen::VectorXd> objects;     // width B + P
  std::map<std::string, Eigen::VectorXd> relations;   // width B + P
  std::map<std::string, Eigen::VectorXd> attributes;  // width B

  int object_width() const { return basic_width + positional_width; }
  // 2(B + P) + B.
  int visual_semantic_width() const { return 2 * object_width() + basic_width; }
};

// All tables must have one row per vocabulary node; the six positional
// tables must share one width. Throws InputError otherwise, or when a table
// carries a non-zero vocab hash different from the vocabulary's.
ComposedTables ComposeTables(const Vocabulary &vocab, const EmbeddingTable &basic,
                             std::span<const EmbeddingTable> positional);

struct VisualSemanticMatrix {
  Eigen::MatrixXd rows;         // |O| x V
  std::vector<int> object_ids;  // parallel to rows
};

VisualSemanticMatrix SceneVisualSemantics(const SceneGraph &graph,
                                          const ComposedTables &tables);

// Mean visual semantic row of each object word over all of its occurrences
// in `corpus`, in sorted word order.
struct WordVectors {
  std::vector<std::string> words;
  Eigen::MatrixXd vectors;
};
WordVectors ObjectWordVectors(std::span<const SceneGraph> corpus,
                              const ComposedTables &tables);

struct PcaResult {
  Eigen::MatrixXd coordinates;  // n x out_dim
  Eigen::MatrixXd components;   // d x out_dim, unit columns
  Eigen::VectorXd eigenvalues;  // out_dim covariance eigenvalues, descending
  Eigen::VectorXd mean;         // d
};

// Projects the mean-centered rows of `vectors` onto the top `out_dim`
// eigenvectors of their covariance (normalized by n - 1). Each component's
// largest-magnitude entry is made positive. Components beyond the data rank
// are zero. Throws InputError if there are fewer rows than `out_dim`.
PcaResult PcaProject(const Eigen::MatrixXd &vectors, int out_dim = 2);

}  // namespace victr

#endif  // VICTR_EMBEDDING_H_
