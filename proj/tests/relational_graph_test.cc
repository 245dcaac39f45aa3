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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "support/oracles.h"
#include "support/synthetic_corpus.h"
#include "victr/error.h"

namespace victr {
namespace {

SceneGraph Triple(const std::string &s, const std::string &p, const std::string &o) {
  SceneGraph g;
  g.objects = {{0, s, "x"}, {1, o, "x"}};
  g.relations = {{0, p, 1}};
  return g;
}

SceneGraph Attribute(const std::string &o, const std::string &a) {
  SceneGraph g;
  g.objects = {{0, o, "x"}};
  g.attributes = {{0, a}};
  return g;
}

std::shared_ptr<const Vocabulary> Vocab(std::span<const SceneGraph> corpus) {
  return std::make_shared<const Vocabulary>(BuildVocabulary(corpus));
}

RelationalGraph Basic(std::span<const SceneGraph> corpus) {
  return ComputeWeights(AccumulateCounts(corpus, Vocab(corpus)));
}

TEST(WeightTest, HandCountedRelations) {
  const std::vector<SceneGraph> corpus = {Triple("man", "ride", "horse"),
                                          Triple("man", "ride", "horse"),
                                          Triple("man", "on", "skateboard")};
  const RelationalGraph g = Basic(corpus);
  const Vocabulary &v = *g.vocab;
  const int man = v.Index("man", NodeKind::kObject);
  const int ride = v.Index("ride", NodeKind::kRelation);
  const int on = v.Index("on", NodeKind::kRelation);
  const int horse = v.Index("horse", NodeKind::kObject);
  EXPECT_EQ(g.Count(man, ride), 2u);
  EXPECT_EQ(g.Count(man, on), 1u);
  EXPECT_DOUBLE_EQ(g.Weight(man, ride), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(g.Weight(man, on), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(g.Weight(ride, horse), 1.0);
  EXPECT_DOUBLE_EQ(g.Weight(man, man), 1.0);
  EXPECT_EQ(g.Weight(horse, man), 0.0);
  EXPECT_TRUE(CheckWeightSums(g).ok());
}

TEST(WeightTest, AttributeWeightsShareTheAttribute) {
  const std::vector<SceneGraph> corpus = {Attribute("dog", "brown"), Attribute("dog", "brown"),
                                          Attribute("horse", "brown")};
  const RelationalGraph g = Basic(corpus);
  const Vocabulary &v = *g.vocab;
  const int brown = v.Index("brown", NodeKind::kAttribute);
  EXPECT_DOUBLE_EQ(g.Weight(v.Index("dog", NodeKind::kObject), brown), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(g.Weight(v.Index("horse", NodeKind::kObject), brown), 1.0 / 3.0);
  const WeightSumReport report = CheckWeightSums(g);
  EXPECT_EQ(report.attribute_families, 1);
  EXPECT_TRUE(report.ok());
}

TEST(WeightTest, SameWordDifferentKindsAreDistinctNodes) {
  std::vector<SceneGraph> corpus = {Triple("top", "on", "table")};
  corpus.push_back(Attribute("shirt", "top"));
  const auto v = Vocab(corpus);
  EXPECT_NE(v->Index("top", NodeKind::kObject), v->Index("top", NodeKind::kAttribute));
  EXPECT_THROW(v->Index("top", NodeKind::kRelation), InputError);
}

TEST(WeightTest, EmptyCorpusIsAnError) {
  EXPECT_THROW(BuildVocabulary(std::span<const SceneGraph>()), InputError);
}

TEST(AdjacencyTest, TwoNodeNormalization) {
  std::vector<SceneGraph> corpus = {Attribute("dog", "brown")};
  const RelationalGraph g = Basic(corpus);
  const Eigen::MatrixXd a = NormalizeAdjacency(g).ToDense();
  ASSERT_EQ(a.rows(), 2);
  const int dog = g.vocab->Index("dog", NodeKind::kObject);
  const int brown = g.vocab->Index("brown", NodeKind::kAttribute);
  EXPECT_DOUBLE_EQ(a(dog, dog), 0.5);
  EXPECT_DOUBLE_EQ(a(dog, brown), 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(a(brown, dog), 0.0);
  EXPECT_DOUBLE_EQ(a(brown, brown), 1.0);
  // Mirroring makes the attribute edge symmetric.
  const Eigen::MatrixXd m = NormalizeAdjacency(g, true).ToDense();
  EXPECT_DOUBLE_EQ(m(dog, brown), 0.5);
  EXPECT_DOUBLE_EQ(m(brown, dog), 0.5);
}

TEST(AdjacencyTest, IsolatedNodeKeepsItsSelfLoop) {
  std::vector<SceneGraph> corpus = {Triple("man", "ride", "horse")};
  SceneGraph lonely;
  lonely.objects = {{0, "tree", "plant"}};
  corpus.push_back(lonely);
  const RelationalGraph g = Basic(corpus);
  const int tree = g.vocab->Index("tree", NodeKind::kObject);
  const Eigen::MatrixXd a = NormalizeAdjacency(g).ToDense();
  EXPECT_DOUBLE_EQ(a(tree, tree), 1.0);
  EXPECT_DOUBLE_EQ(a.row(tree).sum(), 1.0);
  EXPECT_DOUBLE_EQ(a.col(tree).sum(), 1.0);
  EXPECT_EQ(g.ActiveNodes().size(), 3u);
}

TEST(AdjacencyTest, InducedSubmatrixKeepsSelectedEntries) {
  std::mt19937_64 rng(8);
  const auto corpus = testing::RandomSceneGraphs(rng, 10);
  const RelationalGraph g = Basic(corpus);
  const SparseMatrix a = WeightedAdjacency(g);
  const std::vector<int> nodes = g.ActiveNodes();
  const Eigen::MatrixXd sub(InducedSubmatrix(a, nodes));
  const Eigen::MatrixXd full(a);
  for (size_t i = 0; i < nodes.size(); ++i) {
    for (size_t j = 0; j < nodes.size(); ++j) EXPECT_EQ(sub(i, j), full(nodes[i], nodes[j]));
  }
}

TEST(GraphPropertyTest, WeightsMatchNaiveOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto corpus = testing::RandomSceneGraphs(rng, 1 + trial);
    const RelationalGraph g = Basic(corpus);
    const auto expected = testing::NaiveWeights(corpus);
    size_t edges = 0;
    for (const auto &[key, w] : expected) {
      const auto &[kind, src, dst] = key;
      const NodeKind sk = kind == "ro" ? NodeKind::kRelation : NodeKind::kObject;
      const NodeKind dk = kind == "or"   ? NodeKind::kRelation
                          : kind == "ro" ? NodeKind::kObject
                                         : NodeKind::kAttribute;
      const int s = g.vocab->Index(src, sk), d = g.vocab->Index(dst, dk);
      EXPECT_NEAR(g.Weight(s, d), w, 1e-12) << kind << " " << src << " " << dst;
      ++edges;
    }
    EXPECT_EQ(g.weights.size(), edges);
    EXPECT_TRUE(CheckWeightSums(g).ok());
  }
}

TEST(GraphPropertyTest, NormalizedEntriesMatchOracleAndStayInUnitRange) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const auto corpus = testing::RandomSceneGraphs(rng, 2 + trial);
    const RelationalGraph g = Basic(corpus);
    const int n = g.vocab->size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a[i][j] = g.Weight(i, j);
    }
    std::vector<double> degree(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) degree[i] += a[i][j];
    }
    const Eigen::MatrixXd got = NormalizeAdjacency(g).ToDense();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double want = a[i][j] / std::sqrt(degree[i] * degree[j]);
        EXPECT_NEAR(got(i, j), want, 1e-12);
        EXPECT_GE(got(i, j), 0.0);
        EXPECT_LE(got(i, j), 1.0);
      }
    }
  }
}

TEST(GraphPropertyTest, CountsAreAdditiveOverCorpusSplits) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto corpus = testing::RandomSceneGraphs(rng, 12);
    const auto vocab = Vocab(corpus);
    const size_t cut = rng() % corpus.size();
    const std::span<const SceneGraph> all(corpus);
    RelationalGraph merged = AccumulateCounts(all.subspan(0, cut), vocab);
    merged.MergeCounts(AccumulateCounts(all.subspan(cut), vocab));
    const RelationalGraph whole = AccumulateCounts(all, vocab);
    EXPECT_EQ(merged.counts, whole.counts);
    EXPECT_EQ(ComputeWeights(merged).weights, ComputeWeights(whole).weights);
  }
}

TEST(GraphPropertyTest, PositionalGraphsPartitionRelationCounts) {
  std::mt19937_64 rng(24);
  std::uniform_int_distribution<int> pos(0, 100), size(1, 50);
  for (int trial = 0; trial < 10; ++trial) {
    const auto corpus = testing::RandomSceneGraphs(rng, 15);
    const auto vocab = Vocab(corpus);
    std::vector<ObjectBoxes> boxes;
    for (const SceneGraph &g : corpus) {
      ObjectBoxes b;
      for (const SceneObject &o : g.objects) {
        b[o.id] = {double(pos(rng)), double(pos(rng)), double(size(rng)), double(size(rng))};
      }
      boxes.push_back(b);
    }
    const auto positional = BuildPositionalGraphs(corpus, vocab, boxes);
    const RelationalGraph basic = AccumulateCounts(corpus, vocab);
    std::map<EdgeKey, uint64_t> sum;
    for (const RelationalGraph &p : positional) {
      EXPECT_TRUE(CheckWeightSums(p).ok());
      for (const auto &[e, c] : p.counts) sum[e] += c;
    }
    for (const auto &[e, c] : basic.counts) {
      if (vocab->node(e.second).kind == NodeKind::kAttribute) {
        EXPECT_EQ(sum.count(e), 0u);
      } else {
        EXPECT_EQ(sum[e], c);
      }
    }
  }
}

TEST(GraphPropertyTest, UnmatchedObjectsAreSkipped) {
  const std::vector<SceneGraph> corpus = {Triple("man", "ride", "horse")};
  const auto vocab = Vocab(corpus);
  const std::vector<ObjectBoxes> only_man = {{{0, {0, 0, 1, 1}}}};
  for (const RelationalGraph &p : BuildPositionalGraphs(corpus, vocab, only_man)) {
    EXPECT_TRUE(p.counts.empty());
  }
  EXPECT_THROW(BuildPositionalGraphs(corpus, vocab, {}), InputError);
}

TEST(GraphCodecTest, RoundTrip) {
  std::mt19937_64 rng(25);
  const auto corpus = testing::RandomSceneGraphs(rng, 8);
  const auto vocab = Vocab(corpus);
  std::vector<ObjectBoxes> boxes(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    for (const SceneObject &o : corpus[i].objects) boxes[i][o.id] = {double(o.id * 10), 0, 5, 5};
  }
  std::vector<RelationalGraph> graphs = {ComputeWeights(AccumulateCounts(corpus, vocab))};
  for (const auto &p : BuildPositionalGraphs(corpus, vocab, boxes)) graphs.push_back(p);
  for (const RelationalGraph &g : graphs) {
    const std::string bytes = EncodeGraph(g);
    const RelationalGraph back = DecodeGraph(bytes, "mem");
    EXPECT_EQ(back.KindName(), g.KindName());
    EXPECT_EQ(*back.vocab, *g.vocab);
    EXPECT_EQ(back.counts, g.counts);
    EXPECT_EQ(back.weights, g.weights);
    EXPECT_EQ(EncodeGraph(back), bytes);
  }
}

TEST(GraphCodecTest, RejectsWrongMagicAndCorruption) {
  const std::vector<SceneGraph> corpus = {Triple("man", "ride", "horse")};
  const std::string bytes = EncodeGraph(Basic(corpus));
  std::string wrong = bytes;
  wrong[5] = 'X';
  EXPECT_THROW(DecodeGraph(wrong, "magic"), InputError);
  std::string flipped = bytes;
  flipped[flipped.size() - 12] ^= 0x01;
  EXPECT_THROW(DecodeGraph(flipped, "flip"), InputError);
  EXPECT_THROW(DecodeGraph(bytes.substr(0, bytes.size() - 3), "short"), InputError);
  EXPECT_THROW(ReadGraph("/nonexistent/basic.vg"), InputError);
}

}  // namespace
}  // namespace victr
