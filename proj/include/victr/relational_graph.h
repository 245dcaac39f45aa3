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

// Corpus-level relational graphs over the object / relation / attribute
// vocabulary.
//
// Edges and their conditional-frequency weights:
//
//   object o   -> relation r : count(o->r) / sum_r' count(o->r')
//   relation r -> object o   : count(r->o) / sum_o' count(r->o')
//   object o   -> attribute a: count(a->o) / sum_o' count(a->o')
//
// The object->attribute edge is stored in display direction (o, a) but its
// count is the number of times attribute a modifies o, normalized over all
// objects that a modifies. Every node carries an implicit self-loop of
// weight 1.
//
// The basic graph counts every relation triple of the corpus. Each of the
// six positional graphs counts only the triples whose subject and object
// boxes realize that geometric relation.

#ifndef VICTR_RELATIONAL_GRAPH_H_
#define VICTR_RELATIONAL_GRAPH_H_

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "victr/bounding_box.h"
#include "victr/geometry.h"
#include "victr/scene_graph.h"

namespace victr {

enum class NodeKind { kObject = 0, kRelation = 1, kAttribute = 2 };

std::string_view NodeKindName(NodeKind kind);
std::optional<NodeKind> NodeKindFromName(std::string_view name);

struct VocabularyNode {
  std::string word;
  NodeKind kind = NodeKind::kObject;
  std::string super_class;  // objects only

  bool operator==(const VocabularyNode &) const = default;
};

class Vocabulary {
 public:
  // Returns the index of (word, kind), appending a node if it is new.
  int Add(const std::string &word, NodeKind kind);
  std::optional<int> Find(const std::string &word, NodeKind kind) const;
  // Throws InputError for out-of-vocabulary words.
  int Index(const std::string &word, NodeKind kind) const;

  const VocabularyNode &node(int i) const { return nodes_.at(i); }
  const std::vector<VocabularyNode> &nodes() const { return nodes_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  void set_super_class(int i, std::string super_class) {
    nodes_.at(i).super_class = std::move(super_class);
  }

  // Sorted distinct super-classes of the object nodes.
  std::vector<std::string> SuperClasses() const;
  // FNV-1a over (word, kind) in node order.
  uint64_t Hash() const;

  bool operator==(const Vocabulary &other) const { return nodes_ == other.nodes_; }

 private:
  std::vector<VocabularyNode> nodes_;
  std::map<std::pair<std::string, NodeKind>, int> index_;
};

// One node per distinct (word, kind) in first-appearance order: per scene
// graph, relation triples (s, p, o), then attributes (o, a), then any
// remaining objects. An object node's super-class is the majority over its
// occurrences, ties going to the lexicographically smallest.
// Throws InputError on an empty corpus.
Vocabulary BuildVocabulary(std::span<const SceneGraph> corpus);

using EdgeKey = std::pair<int, int>;  // (src, dst)

struct RelationalGraph {
  std::shared_ptr<const Vocabulary> vocab;
  // nullopt for the basic graph.
  std::optional<GeometricRelation> position;
  std::map<EdgeKey, uint64_t> counts;
  std::map<EdgeKey, double> weights;

  // "basic" or the geometric relation name.
  std::string KindName() const;
  uint64_t Count(int src, int dst) const;
  // 1 on the diagonal, 0 for absent edges.
  double Weight(int src, int dst) const;
  // Nodes incident to at least one edge.
  std::vector<int> ActiveNodes() const;
  // Element-wise count sum; weights are cleared.
  void MergeCounts(const RelationalGraph &other);
};

// Basic graph counts: for each triple (s, p, o), s->p and p->o; for each
// attribute (o, a), the display edge o->a. Weights are left empty.
// Throws InputError for words missing from `vocab`.
RelationalGraph AccumulateCounts(std::span<const SceneGraph> corpus,
                                 std::shared_ptr<const Vocabulary> vocab);

// Fills `weights` from `counts`; see the file comment.
RelationalGraph ComputeWeights(RelationalGraph graph);

// Matched boxes of one scene graph, keyed by object id.
using ObjectBoxes = std::map<int, BoundingBox>;

// Six weighted graphs in kAllGeometricRelations order. `box_matches` is
// parallel to `corpus`.
std::array<RelationalGraph, kNumGeometricRelations> BuildPositionalGraphs(
    std::span<const SceneGraph> corpus, std::shared_ptr<const Vocabulary> vocab,
    std::span<const ObjectBoxes> box_matches);

struct WeightSumReport {
  int object_families = 0;     // objects with relation successors
  int relation_families = 0;   // relations with object successors
  int attribute_families = 0;  // attributes with at least one object
  double max_object_error = 0;
  double max_relation_error = 0;
  double max_attribute_error = 0;

  bool ok(double tolerance = 1e-9) const {
    return max_object_error <= tolerance && max_relation_error <= tolerance &&
           max_attribute_error <= tolerance;
  }
};

// Checks that every per-node weight family sums to one.
WeightSumReport CheckWeightSums(const RelationalGraph &graph);

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// D^{-1/2} A D^{-1/2}, with D the row sums of A.
struct NormalizedAdjacency {
  SparseMatrix matrix;

  int size() const { return static_cast<int>(matrix.rows()); }
  Eigen::MatrixXd ToDense() const { return Eigen::MatrixXd(matrix); }
};

// Weighted adjacency with unit self-loops. `mirror_attribute_edges` adds
// a->o next to each o->a edge with the same weight.
SparseMatrix WeightedAdjacency(const RelationalGraph &graph,
                               bool mirror_attribute_edges = false);

// Rows and columns of `a` restricted to `nodes`, in the given order.
SparseMatrix InducedSubmatrix(const SparseMatrix &a, std::span<const int> nodes);

NormalizedAdjacency SymmetricNormalize(const SparseMatrix &a);

inline NormalizedAdjacency NormalizeAdjacency(const RelationalGraph &graph,
                                              bool mirror_attribute_edges = false) {
  return SymmetricNormalize(WeightedAdjacency(graph, mirror_attribute_edges));
}

// Graph file: magic VICTRG1, JSON header {version, kind, N, nnz, vocab},
// then nnz records (src u32, dst u32, count u64, weight f64) sorted by
// (src, dst), then an FNV-1a checksum (u64) of header text and records.
std::string EncodeGraph(const RelationalGraph &graph);
RelationalGraph DecodeGraph(std::string_view bytes, const std::string &what);
void WriteGraph(const RelationalGraph &graph, const std::string &path);
RelationalGraph ReadGraph(const std::string &path);

}  // namespace victr

#endif  // VICTR_RELATIONAL_GRAPH_H_
