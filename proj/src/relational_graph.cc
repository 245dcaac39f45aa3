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

#include "victr/relational_graph.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "victr/binary_io.h"
#include "victr/error.h"

namespace victr {

using nlohmann::json;

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kObject: return "object";
    case NodeKind::kRelation: return "relation";
    case NodeKind::kAttribute: return "attribute";
  }
  return "";
}

std::optional<NodeKind> NodeKindFromName(std::string_view name) {
  for (NodeKind k : {NodeKind::kObject, NodeKind::kRelation, NodeKind::kAttribute}) {
    if (NodeKindName(k) == name) return k;
  }
  return std::nullopt;
}

int Vocabulary::Add(const std::string &word, NodeKind kind) {
  auto [it, inserted] = index_.try_emplace({word, kind}, size());
  if (inserted) nodes_.push_back({word, kind, ""});
  return it->second;
}

std::optional<int> Vocabulary::Find(const std::string &word, NodeKind kind) const {
  auto it = index_.find({word, kind});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Vocabulary::Index(const std::string &word, NodeKind kind) const {
  auto i = Find(word, kind);
  if (!i) {
    throw InputError("out-of-vocabulary " + std::string(NodeKindName(kind)) + " '" +
                     word + "'");
  }
  return *i;
}

std::vector<std::string> Vocabulary::SuperClasses() const {
  std::set<std::string> classes;
  for (const VocabularyNode &n : nodes_) {
    if (n.kind == NodeKind::kObject) classes.insert(n.super_class);
  }
  return {classes.begin(), classes.end()};
}

uint64_t Vocabulary::Hash() const {
  uint64_t h = Fnv1a64("");
  for (const VocabularyNode &n : nodes_) {
    h = Fnv1a64(n.word, h);
    h = Fnv1a64(std::string_view("\t"), h);
    h = Fnv1a64(NodeKindName(n.kind), h);
    h = Fnv1a64(std::string_view("\n"), h);
  }
  return h;
}

Vocabulary BuildVocabulary(std::span<const SceneGraph> corpus) {
  if (corpus.empty()) throw InputError("cannot build a vocabulary from an empty corpus");
  Vocabulary vocab;
  std::map<int, std::map<std::string, int>> votes;
  for (const SceneGraph &sg : corpus) {
    auto word_of = [&](int id) -> const std::string & {
      const SceneObject *o = sg.FindObject(id);
      if (o == nullptr) throw InputError("scene graph references unknown object");
      return o->word;
    };
    for (const SceneRelation &r : sg.relations) {
      vocab.Add(word_of(r.subject), NodeKind::kObject);
      vocab.Add(r.predicate, NodeKind::kRelation);
      vocab.Add(word_of(r.object), NodeKind::kObject);
    }
    for (const SceneAttribute &a : sg.attributes) {
      vocab.Add(word_of(a.object_id), NodeKind::kObject);
      vocab.Add(a.word, NodeKind::kAttribute);
    }
    for (const SceneObject &o : sg.objects) {
      ++votes[vocab.Add(o.word, NodeKind::kObject)][o.super_class];
    }
  }
  for (const auto &[node, tally] : votes) {
    const std::string *best = nullptr;
    int best_count = -1;
    for (const auto &[super_class, n] : tally) {  // map order: ties keep the smaller
      if (n > best_count) {
        best = &super_class;
        best_count = n;
      }
    }
    vocab.set_super_class(node, *best);
  }
  return vocab;
}

std::string RelationalGraph::KindName() const {
  return position ? std::string(GeometricRelationName(*position)) : "basic";
}

uint64_t RelationalGraph::Count(int src, int dst) const {
  auto it = counts.find({src, dst});
  return it == counts.end() ? 0 : it->second;
}

double RelationalGraph::Weight(int src, int dst) const {
  if (src == dst) return 1.0;
  auto it = weights.find({src, dst});
  return it == weights.end() ? 0.0 : it->second;
}

std::vector<int> RelationalGraph::ActiveNodes() const {
  std::set<int> nodes;
  for (const auto &[edge, count] : counts) {
    nodes.insert(edge.first);
    nodes.insert(edge.second);
  }
  return {nodes.begin(), nodes.end()};
}

void RelationalGraph::MergeCounts(const RelationalGraph &other) {
  for (const auto &[edge, count] : other.counts) counts[edge] += count;
  weights.clear();
}

namespace {

void CountRelation(RelationalGraph &g, const Vocabulary &vocab, const std::string &subject,
                   const std::string &predicate, const std::string &object) {
  const int s = vocab.Index(subject, NodeKind::kObject);
  const int p = vocab.Index(predicate, NodeKind::kRelation);
  const int o = vocab.Index(object, NodeKind::kObject);
  ++g.counts[{s, p}];
  ++g.counts[{p, o}];
}

const std::string &ObjectWord(const SceneGraph &sg, int id) {
  const SceneObject *o = sg.FindObject(id);
  if (o == nullptr) throw InputError("scene graph references unknown object");
  return o->word;
}

}  // namespace

RelationalGraph AccumulateCounts(std::span<const SceneGraph> corpus,
                                 std::shared_ptr<const Vocabulary> vocab) {
  RelationalGraph g;
  g.vocab = std::move(vocab);
  for (const SceneGraph &sg : corpus) {
    for (const SceneRelation &r : sg.relations) {
      CountRelation(g, *g.vocab, ObjectWord(sg, r.subject), r.predicate,
                    ObjectWord(sg, r.object));
    }
    for (const SceneAttribute &a : sg.attributes) {
      const int o = g.vocab->Index(ObjectWord(sg, a.object_id), NodeKind::kObject);
      const int attr = g.vocab->Index(a.word, NodeKind::kAttribute);
      ++g.counts[{o, attr}];
    }
  }
  return g;
}

RelationalGraph ComputeWeights(RelationalGraph graph) {
  const Vocabulary &vocab = *graph.vocab;
  std::map<int, uint64_t> out_to_relations;  // per object
  std::map<int, uint64_t> out_to_objects;    // per relation
  std::map<int, uint64_t> attribute_totals;  // per attribute
  for (const auto &[edge, count] : graph.counts) {
    const NodeKind src = vocab.node(edge.first).kind;
    const NodeKind dst = vocab.node(edge.second).kind;
    if (src == NodeKind::kObject && dst == NodeKind::kRelation) {
      out_to_relations[edge.first] += count;
    } else if (src == NodeKind::kRelation && dst == NodeKind::kObject) {
      out_to_objects[edge.first] += count;
    } else if (src == NodeKind::kObject && dst == NodeKind::kAttribute) {
      attribute_totals[edge.second] += count;
    } else {
      throw InvariantError("edge between " + std::string(NodeKindName(src)) + " and " +
                           std::string(NodeKindName(dst)) + " nodes");
    }
  }
  graph.weights.clear();
  for (const auto &[edge, count] : graph.counts) {
    if (count == 0) continue;
    const NodeKind src = vocab.node(edge.first).kind;
    const NodeKind dst = vocab.node(edge.second).kind;
    uint64_t denominator = 0;
    if (dst == NodeKind::kRelation) {
      denominator = out_to_relations[edge.first];
    } else if (src == NodeKind::kRelation) {
      denominator = out_to_objects[edge.first];
    } else {
      denominator = attribute_totals[edge.second];
    }
    graph.weights[edge] = static_cast<double>(count) / static_cast<double>(denominator);
  }
  return graph;
}

std::array<RelationalGraph, kNumGeometricRelations> BuildPositionalGraphs(
    std::span<const SceneGraph> corpus, std::shared_ptr<const Vocabulary> vocab,
    std::span<const ObjectBoxes> box_matches) {
  if (box_matches.size() != corpus.size()) {
    throw InputError("box matches must be parallel to the corpus");
  }
  std::array<RelationalGraph, kNumGeometricRelations> graphs;
  for (int k = 0; k < kNumGeometricRelations; ++k) {
    graphs[k].vocab = vocab;
    graphs[k].position = kAllGeometricRelations[k];
  }
  for (size_t i = 0; i < corpus.size(); ++i) {
    const SceneGraph &sg = corpus[i];
    const ObjectBoxes &boxes = box_matches[i];
    for (const SceneRelation &r : sg.relations) {
      auto s = boxes.find(r.subject);
      auto o = boxes.find(r.object);
      if (s == boxes.end() || o == boxes.end()) continue;
      const GeometricRelation where = ClassifyGeometricRelation(s->second, o->second);
      CountRelation(graphs[static_cast<int>(where)], *vocab, ObjectWord(sg, r.subject),
                    r.predicate, ObjectWord(sg, r.object));
    }
  }
  for (RelationalGraph &g : graphs) g = ComputeWeights(std::move(g));
  return graphs;
}

WeightSumReport CheckWeightSums(const RelationalGraph &graph) {
  const Vocabulary &vocab = *graph.vocab;
  std::map<int, double> object_sums, relation_sums, attribute_sums;
  for (const auto &[edge, w] : graph.weights) {
    const NodeKind src = vocab.node(edge.first).kind;
    const NodeKind dst = vocab.node(edge.second).kind;
    if (dst == NodeKind::kRelation) {
      object_sums[edge.first] += w;
    } else if (src == NodeKind::kRelation) {
      relation_sums[edge.first] += w;
    } else if (dst == NodeKind::kAttribute) {
      attribute_sums[edge.second] += w;
    }
  }
  WeightSumReport report;
  report.object_families = static_cast<int>(object_sums.size());
  report.relation_families = static_cast<int>(relation_sums.size());
  report.attribute_families = static_cast<int>(attribute_sums.size());
  for (const auto &[n, s] : object_sums) {
    report.max_object_error = std::max(report.max_object_error, std::abs(s - 1.0));
  }
  for (const auto &[n, s] : relation_sums) {
    report.max_relation_error = std::max(report.max_relation_error, std::abs(s - 1.0));
  }
  for (const auto &[n, s] : attribute_sums) {
    report.max_attribute_error = std::max(report.max_attribute_error, std::abs(s - 1.0));
  }
  // Weights must also lie in (0, 1].
  for (const auto &[edge, w] : graph.weights) {
    if (!(w > 0.0 && w <= 1.0)) report.max_object_error = std::max(report.max_object_error, 1.0);
  }
  return report;
}

SparseMatrix WeightedAdjacency(const RelationalGraph &graph, bool mirror_attribute_edges) {
  const int n = graph.vocab->size();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(n + graph.weights.size() * 2);
  for (int i = 0; i < n; ++i) entries.emplace_back(i, i, 1.0);
  for (const auto &[edge, w] : graph.weights) {
    entries.emplace_back(edge.first, edge.second, w);
    if (mirror_attribute_edges &&
        graph.vocab->node(edge.second).kind == NodeKind::kAttribute) {
      entries.emplace_back(edge.second, edge.first, w);
    }
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

SparseMatrix InducedSubmatrix(const SparseMatrix &a, std::span<const int> nodes) {
  std::vector<int> position(a.rows(), -1);
  for (size_t k = 0; k < nodes.size(); ++k) position[nodes[k]] = static_cast<int>(k);
  std::vector<Eigen::Triplet<double>> entries;
  for (size_t k = 0; k < nodes.size(); ++k) {
    for (SparseMatrix::InnerIterator it(a, nodes[k]); it; ++it) {
      const int col = position[it.col()];
      if (col >= 0) entries.emplace_back(static_cast<int>(k), col, it.value());
    }
  }
  const auto m = static_cast<Eigen::Index>(nodes.size());
  SparseMatrix sub(m, m);
  sub.setFromTriplets(entries.begin(), entries.end());
  return sub;
}

NormalizedAdjacency SymmetricNormalize(const SparseMatrix &a) {
  Eigen::VectorXd inv_sqrt_degree(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double d = a.row(i).sum();
    inv_sqrt_degree[i] = d > 0 ? 1.0 / std::sqrt(d) : 0.0;
  }
  NormalizedAdjacency out;
  out.matrix = a;
  for (Eigen::Index i = 0; i < out.matrix.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(out.matrix, i); it; ++it) {
      it.valueRef() = it.value() * inv_sqrt_degree[it.row()] * inv_sqrt_degree[it.col()];
    }
  }
  return out;
}

std::string EncodeGraph(const RelationalGraph &graph) {
  json vocab = json::array();
  for (const VocabularyNode &n : graph.vocab->nodes()) {
    vocab.push_back({n.word, NodeKindName(n.kind), n.super_class});
  }
  const json header = {{"version", 1},
                       {"kind", graph.KindName()},
                       {"N", graph.vocab->size()},
                       {"nnz", graph.counts.size()},
                       {"vocab", vocab}};
  BinaryWriter records;
  for (const auto &[edge, count] : graph.counts) {
    records.PutU32(static_cast<uint32_t>(edge.first));
    records.PutU32(static_cast<uint32_t>(edge.second));
    records.PutU64(count);
    records.PutF64(graph.Weight(edge.first, edge.second));
  }
  const std::string header_text = header.dump();
  const uint64_t checksum = Fnv1a64(records.buffer(), Fnv1a64(header_text));
  records.PutU64(checksum);
  return EncodeFramed(kGraphMagic, header, records.buffer());
}

RelationalGraph DecodeGraph(std::string_view bytes, const std::string &what) {
  FramedFile file = DecodeFramed(bytes, kGraphMagic, what);
  const json &h = file.header;
  RelationalGraph g;
  auto vocab = std::make_shared<Vocabulary>();
  uint64_t nnz = 0;
  try {
    if (h.at("version").get<int>() != 1) {
      throw InputError(what + ": unsupported graph version " + h.at("version").dump());
    }
    const std::string kind = h.at("kind").get<std::string>();
    if (kind != "basic") {
      g.position = GeometricRelationFromName(kind);
      if (!g.position) throw InputError(what + ": unknown graph kind '" + kind + "'");
    }
    for (const json &node : h.at("vocab")) {
      auto k = NodeKindFromName(node.at(1).get<std::string>());
      if (!k) throw InputError(what + ": unknown node kind");
      const int i = vocab->Add(node.at(0).get<std::string>(), *k);
      vocab->set_super_class(i, node.at(2).get<std::string>());
    }
    if (h.at("N").get<int>() != vocab->size()) {
      throw InputError(what + ": header N does not match vocabulary");
    }
    nnz = h.at("nnz").get<uint64_t>();
  } catch (const json::exception &e) {
    throw InputError(what + ": malformed graph header: " + e.what());
  }
  constexpr size_t kRecordSize = 4 + 4 + 8 + 8;
  if (file.payload.size() != nnz * kRecordSize + 8) {
    throw InputError(what + ": payload size does not match nnz");
  }
  const std::string_view records = std::string_view(file.payload).substr(0, nnz * kRecordSize);
  BinaryReader r(file.payload, what);
  for (uint64_t e = 0; e < nnz; ++e) {
    const int src = static_cast<int>(r.GetU32());
    const int dst = static_cast<int>(r.GetU32());
    const uint64_t count = r.GetU64();
    const double weight = r.GetF64();
    if (src >= vocab->size() || dst >= vocab->size() || src == dst) {
      throw InputError(what + ": edge record out of range");
    }
    g.counts[{src, dst}] = count;
    if (weight != 0.0) g.weights[{src, dst}] = weight;
  }
  const uint64_t checksum = r.GetU64();
  if (checksum != Fnv1a64(records, Fnv1a64(file.header_text))) {
    throw InputError(what + ": checksum mismatch");
  }
  g.vocab = std::move(vocab);
  return g;
}

void WriteGraph(const RelationalGraph &graph, const std::string &path) {
  WriteFileBytes(path, EncodeGraph(graph));
}

RelationalGraph ReadGraph(const std::string &path) {
  return DecodeGraph(ReadFileBytes(path), path);
}

}  // namespace victr
