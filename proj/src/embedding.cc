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

#include "victr/embedding.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "victr/error.h"

namespace victr {
namespace {

void CheckTable(const EmbeddingTable &t, const Vocabulary &vocab, const std::string &name) {
  if (t.size() != vocab.size()) {
    throw InputError(name + " table has " + std::to_string(t.size()) +
                     " rows, vocabulary has " + std::to_string(vocab.size()));
  }
  if (t.vocab_hash != 0 && t.vocab_hash != vocab.Hash()) {
    throw InputError(name + " table was built for a different vocabulary");
  }
}

const Eigen::VectorXd *Lookup(const std::map<std::string, Eigen::VectorXd> &m,
                              const std::string &word) {
  auto it = m.find(word);
  return it == m.end() ? nullptr : &it->second;
}

}  // namespace

ComposedTables ComposeTables(const Vocabulary &vocab, const EmbeddingTable &basic,
                             std::span<const EmbeddingTable> positional) {
  if (positional.size() != kNumGeometricRelations) {
    throw InputError("expected " + std::to_string(kNumGeometricRelations) +
                     " positional tables, got " + std::to_string(positional.size()));
  }
  CheckTable(basic, vocab, "basic");
  const int width = positional.front().width();
  for (size_t k = 0; k < positional.size(); ++k) {
    const std::string name(GeometricRelationName(kAllGeometricRelations[k]));
    CheckTable(positional[k], vocab, name);
    if (positional[k].width() != width) {
      throw InputError(name + " table has width " + std::to_string(positional[k].width()) +
                       ", expected " + std::to_string(width));
    }
  }

  ComposedTables out;
  out.basic_width = basic.width();
  out.positional_width = width * static_cast<int>(positional.size());
  for (int i = 0; i < vocab.size(); ++i) {
    const VocabularyNode &node = vocab.node(i);
    if (node.kind == NodeKind::kAttribute) {
      out.attributes[node.word] = basic.vectors.row(i).transpose();
      continue;
    }
    Eigen::VectorXd v(out.object_width());
    v.head(out.basic_width) = basic.vectors.row(i).transpose();
    for (size_t k = 0; k < positional.size(); ++k) {
      v.segment(out.basic_width + static_cast<Eigen::Index>(k) * width, width) =
          positional[k].vectors.row(i).transpose();
    }
    auto &dest = node.kind == NodeKind::kObject ? out.objects : out.relations;
    dest[node.word] = std::move(v);
  }
  return out;
}

VisualSemanticMatrix SceneVisualSemantics(const SceneGraph &graph,
                                          const ComposedTables &tables) {
  const int b = tables.basic_width;
  const int op = tables.object_width();
  VisualSemanticMatrix out;
  out.rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(graph.objects.size()),
                                   tables.visual_semantic_width());
  for (size_t r = 0; r < graph.objects.size(); ++r) {
    const SceneObject &obj = graph.objects[r];
    out.object_ids.push_back(obj.id);
    auto row = out.rows.row(static_cast<Eigen::Index>(r));
    if (const auto *v = Lookup(tables.objects, obj.word)) row.head(op) = v->transpose();

    Eigen::VectorXd attr = Eigen::VectorXd::Zero(b);
    int n_attr = 0;
    for (const SceneAttribute &a : graph.attributes) {
      if (a.object_id != obj.id) continue;
      ++n_attr;
      if (const auto *v = Lookup(tables.attributes, a.word)) attr += *v;
    }
    if (n_attr > 0) row.segment(op, b) = attr.transpose() / n_attr;

    Eigen::VectorXd rel = Eigen::VectorXd::Zero(op);
    int n_rel = 0;
    for (const SceneRelation &rr : graph.relations) {
      if (rr.subject != obj.id && rr.object != obj.id) continue;
      ++n_rel;
      if (const auto *v = Lookup(tables.relations, rr.predicate)) rel += *v;
    }
    if (n_rel > 0) row.tail(op) = rel.transpose() / n_rel;
  }
  return out;
}

WordVectors ObjectWordVectors(std::span<const SceneGraph> corpus,
                              const ComposedTables &tables) {
  std::map<std::string, std::pair<Eigen::VectorXd, int>> sums;
  for (const SceneGraph &g : corpus) {
    const VisualSemanticMatrix m = SceneVisualSemantics(g, tables);
    for (size_t r = 0; r < g.objects.size(); ++r) {
      auto [it, fresh] = sums.try_emplace(g.objects[r].word);
      if (fresh) it->second = {Eigen::VectorXd::Zero(m.rows.cols()), 0};
      it->second.first += m.rows.row(static_cast<Eigen::Index>(r)).transpose();
      ++it->second.second;
    }
  }
  WordVectors out;
  out.vectors.resize(static_cast<Eigen::Index>(sums.size()), tables.visual_semantic_width());
  Eigen::Index i = 0;
  for (const auto &[word, acc] : sums) {
    out.words.push_back(word);
    out.vectors.row(i++) = acc.first.transpose() / acc.second;
  }
  return out;
}

PcaResult PcaProject(const Eigen::MatrixXd &vectors, int out_dim) {
  const Eigen::Index n = vectors.rows();
  const Eigen::Index d = vectors.cols();
  if (out_dim < 1) throw InputError("projection dimension must be >= 1");
  if (n < out_dim) {
    throw InputError("need at least " + std::to_string(out_dim) + " vectors to project, got " +
                     std::to_string(n));
  }
  PcaResult out;
  out.mean = vectors.colwise().mean().transpose();
  const Eigen::MatrixXd centered = vectors.rowwise() - out.mean.transpose();
  out.components = Eigen::MatrixXd::Zero(d, out_dim);
  out.eigenvalues = Eigen::VectorXd::Zero(out_dim);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd &s = svd.singularValues();
  const double denom = static_cast<double>(std::max<Eigen::Index>(n - 1, 1));
  const Eigen::Index rank = std::min<Eigen::Index>(s.size(), out_dim);
  // Singular values at rounding level count as zero (numerical rank).
  const double tolerance = s.size() == 0 ? 0.0
                                         : s(0) * static_cast<double>(std::max(n, d)) *
                                               std::numeric_limits<double>::epsilon();
  for (Eigen::Index k = 0; k < rank; ++k) {
    if (!(s(k) > tolerance)) break;
    Eigen::VectorXd c = svd.matrixV().col(k);
    Eigen::Index arg = 0;
    c.cwiseAbs().maxCoeff(&arg);
    if (c(arg) < 0) c = -c;
    out.components.col(k) = c;
    out.eigenvalues(k) = s(k) * s(k) / denom;
  }
  out.coordinates = centered * out.components;
  // Normalize negative zeros for stable text output.
  out.coordinates = out.coordinates.array() + 0.0;
  return out;
}

}  // namespace victr
