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

#include "victr/scene_parser.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "victr/error.h"

namespace victr {
namespace {

// Builds a graph from "form lemma upos feats head deprel" lines.
DependencyGraph Graph(const std::string &rows) {
  std::istringstream in(rows);
  std::string text = "# caption_id = 1\n# image_id = 1\n";
  std::string line;
  int index = 0;
  while (std::getline(in, line)) {
    std::istringstream f(line);
    std::string form, lemma, upos, feats, head, deprel;
    if (!(f >> form >> lemma >> upos >> feats >> head >> deprel)) continue;
    text += std::to_string(++index) + "\t" + form + "\t" + lemma + "\t" + upos + "\t_\t" + feats +
            "\t" + head + "\t" + deprel + "\t_\t_\n";
  }
  return ParseConllu(text, "test").at(0);
}

SceneGraph Parse(const std::string &rows, QuantifierLexicon q = DefaultQuantifierLexicon()) {
  return ParseSceneGraph(Graph(rows), q, DefaultSuperClassLexicon());
}

int CountWord(const SceneGraph &g, const std::string &word) {
  return static_cast<int>(std::count_if(g.objects.begin(), g.objects.end(),
                                        [&](const SceneObject &o) { return o.word == word; }));
}

std::string WordOf(const SceneGraph &g, int id) { return g.FindObject(id)->word; }

std::multiset<std::tuple<std::string, std::string, std::string>> Triples(const SceneGraph &g) {
  std::multiset<std::tuple<std::string, std::string, std::string>> out;
  for (const SceneRelation &r : g.relations) {
    out.insert({WordOf(g, r.subject), r.predicate, WordOf(g, r.object)});
  }
  return out;
}

std::multiset<std::pair<std::string, std::string>> Attributes(const SceneGraph &g) {
  std::multiset<std::pair<std::string, std::string>> out;
  for (const SceneAttribute &a : g.attributes) out.insert({WordOf(g, a.object_id), a.word});
  return out;
}

constexpr char kTwoMenBrownHorses[] = R"(
two two NUM NumType=Card 2 nummod
men man NOUN Number=Plur 4 nsubj
are be AUX _ 4 aux
riding ride VERB _ 0 root
brown brown ADJ _ 6 amod
horses horse NOUN Number=Plur 4 obj
)";

constexpr char kTwoMenABrownHorse[] = R"(
two two NUM NumType=Card 2 nummod
men man NOUN Number=Plur 4 nsubj
are be AUX _ 4 aux
riding ride VERB _ 0 root
a a DET _ 7 det
brown brown ADJ _ 7 amod
horse horse NOUN Number=Sing 4 obj
)";

TEST(QuantifierTest, PluralObjectFollowsSubjectCount) {
  const SceneGraph g = Parse(kTwoMenBrownHorses);
  EXPECT_EQ(CountWord(g, "man"), 2);
  EXPECT_EQ(CountWord(g, "horse"), 2);
  EXPECT_EQ(g.objects.size(), 4u);
  // Every horse is brown, and the riders pair up one to one.
  EXPECT_EQ(Attributes(g), (std::multiset<std::pair<std::string, std::string>>{
                               {"horse", "brown"}, {"horse", "brown"}}));
  ASSERT_EQ(g.relations.size(), 2u);
  EXPECT_NE(g.relations[0].subject, g.relations[1].subject);
  EXPECT_NE(g.relations[0].object, g.relations[1].object);
}

TEST(QuantifierTest, SingularObjectStaysSingle) {
  const SceneGraph g = Parse(kTwoMenABrownHorse);
  EXPECT_EQ(CountWord(g, "man"), 2);
  EXPECT_EQ(CountWord(g, "horse"), 1);
  EXPECT_EQ(Triples(g), (std::multiset<std::tuple<std::string, std::string, std::string>>{
                            {"man", "ride", "horse"}, {"man", "ride", "horse"}}));
}

constexpr char kDozenOfEggs[] = R"(
a a DET _ 2 det
dozen dozen NOUN _ 0 root
of of ADP _ 4 case
eggs egg NOUN Number=Plur 2 nmod
)";

TEST(QuantifierTest, DozenPhraseRespectsCap) {
  QuantifierLexicon wide = DefaultQuantifierLexicon();
  wide.max_duplication = 20;
  EXPECT_EQ(CountWord(Parse(kDozenOfEggs, wide), "egg"), 12);
  EXPECT_EQ(Parse(kDozenOfEggs, wide).objects.size(), 12u);
  // Default cap is 10.
  EXPECT_EQ(CountWord(Parse(kDozenOfEggs), "egg"), 10);
}

TEST(QuantifierTest, VagueQuantifierUsesManyValue) {
  constexpr char rows[] = R"(
a a DET _ 2 det
lot lot NOUN _ 0 root
of of ADP _ 4 case
birds bird NOUN Number=Plur 2 nmod
)";
  EXPECT_EQ(CountWord(Parse(rows), "bird"), 3);
  QuantifierLexicon q = DefaultQuantifierLexicon();
  q.many_value = 5;
  EXPECT_EQ(CountWord(Parse(rows, q), "bird"), 5);
}

TEST(QuantifierTest, DigitsAndCap) {
  constexpr char rows[] = R"(
20 20 NUM _ 2 nummod
birds bird NOUN Number=Plur 0 root
)";
  EXPECT_EQ(CountWord(Parse(rows), "bird"), 10);
  QuantifierLexicon q = DefaultQuantifierLexicon();
  q.max_duplication = 4;
  EXPECT_EQ(CountWord(Parse(rows, q), "bird"), 4);
}

TEST(QuantifierTest, ExpansionIsIdempotentAndWellFormed) {
  const QuantifierLexicon q = DefaultQuantifierLexicon();
  std::vector<DependencyGraph> inputs = LoadConllu(VICTR_SOURCE_DIR "/data/toy/captions.conllu");
  for (const char *rows : {kTwoMenBrownHorses, kTwoMenABrownHorse, kDozenOfEggs}) {
    inputs.push_back(Graph(rows));
  }
  for (const DependencyGraph &g : inputs) {
    const DependencyGraph once = ExpandQuantifiers(g, q);
    EXPECT_NO_THROW(ValidateDependencyGraph(once)) << g.caption_id;
    EXPECT_EQ(ExpandQuantifiers(once, q), once) << g.caption_id;
  }
}

TEST(QuantifierTest, ObjectCountMatchesQuantities) {
  // three cars (3) + the road (1) + "a couple of" dogs (2) = 6.
  constexpr char rows[] = R"(
three three NUM _ 2 nummod
cars car NOUN Number=Plur 4 nsubj
are be AUX _ 4 aux
parked park VERB _ 0 root
near near ADP _ 10 case
a a DET _ 10 det
couple couple NOUN _ 10 nummod
of of ADP _ 10 case
the the DET _ 10 det
dogs dog NOUN Number=Plur 4 obl
on on ADP _ 13 case
the the DET _ 13 det
road road NOUN _ 4 obl
)";
  const SceneGraph g = Parse(rows);
  EXPECT_EQ(CountWord(g, "car"), 3);
  EXPECT_EQ(CountWord(g, "dog"), 2);
  EXPECT_EQ(CountWord(g, "road"), 1);
  EXPECT_EQ(g.objects.size(), 6u);
}

TEST(ExtractTest, VerbWithObject) {
  constexpr char rows[] = R"(
man man NOUN _ 2 nsubj
rides ride VERB _ 0 root
a a DET _ 4 det
horse horse NOUN _ 2 obj
)";
  const SceneGraph g = Parse(rows);
  ASSERT_EQ(g.objects.size(), 2u);
  EXPECT_EQ(g.objects[0].word, "man");
  EXPECT_EQ(g.objects[1].word, "horse");
  EXPECT_EQ(Triples(g), (std::multiset<std::tuple<std::string, std::string, std::string>>{
                            {"man", "ride", "horse"}}));
  EXPECT_TRUE(g.attributes.empty());
}

TEST(ExtractTest, AdjectivalModifier) {
  constexpr char rows[] = R"(
a a DET _ 3 det
brown brown ADJ _ 3 amod
dog dog NOUN _ 0 root
)";
  const SceneGraph g = Parse(rows);
  ASSERT_EQ(g.objects.size(), 1u);
  EXPECT_EQ(Attributes(g), (std::multiset<std::pair<std::string, std::string>>{{"dog", "brown"}}));
}

TEST(ExtractTest, NominalModifiersWithPrepositions) {
  constexpr char rows[] = R"(
a a DET _ 2 det
man man NOUN _ 0 root
on on ADP _ 5 case
a a DET _ 5 det
skateboard skateboard NOUN _ 2 nmod
with with ADP _ 9 case
a a DET _ 9 det
brown brown ADJ _ 9 amod
dog dog NOUN _ 2 nmod
)";
  const SceneGraph g = Parse(rows);
  ASSERT_EQ(g.objects.size(), 3u);
  EXPECT_EQ(Triples(g), (std::multiset<std::tuple<std::string, std::string, std::string>>{
                            {"man", "on", "skateboard"}, {"man", "with", "dog"}}));
  EXPECT_EQ(Attributes(g), (std::multiset<std::pair<std::string, std::string>>{{"dog", "brown"}}));
}

TEST(ExtractTest, VerbObliqueBecomesVerbPreposition) {
  constexpr char rows[] = R"(
a a DET _ 2 det
cat cat NOUN _ 3 nsubj
sits sit VERB _ 0 root
on on ADP _ 6 case
the the DET _ 6 det
table table NOUN _ 3 obl
)";
  EXPECT_EQ(Triples(Parse(rows)), (std::multiset<std::tuple<std::string, std::string, std::string>>{
                                      {"cat", "sit on", "table"}}));
}

TEST(ExtractTest, MultiwordCaseMarker) {
  constexpr char rows[] = R"(
a a DET _ 2 det
dog dog NOUN _ 7 nsubj
is be AUX _ 7 cop
next next ADV _ 7 case
to to ADP _ 4 fixed
a a DET _ 7 det
horse horse NOUN _ 0 root
)";
  EXPECT_EQ(Triples(Parse(rows)), (std::multiset<std::tuple<std::string, std::string, std::string>>{
                                      {"dog", "next to", "horse"}}));
}

TEST(ExtractTest, CopularAdjectiveIsAttribute) {
  constexpr char rows[] = R"(
the the DET _ 2 det
dog dog NOUN _ 4 nsubj
is be AUX _ 4 cop
brown brown ADJ _ 0 root
)";
  const SceneGraph g = Parse(rows);
  EXPECT_TRUE(g.relations.empty());
  EXPECT_EQ(Attributes(g), (std::multiset<std::pair<std::string, std::string>>{{"dog", "brown"}}));
}

TEST(ExtractTest, CoordinatedSubjectsShareTheVerb) {
  constexpr char rows[] = R"(
a a DET _ 2 det
woman woman NOUN _ 6 nsubj
and and CCONJ _ 5 cc
a a DET _ 5 det
dog dog NOUN _ 2 conj
play play VERB _ 0 root
in in ADP _ 9 case
the the DET _ 9 det
park park NOUN _ 6 obl
)";
  EXPECT_EQ(Triples(Parse(rows)), (std::multiset<std::tuple<std::string, std::string, std::string>>{
                                      {"woman", "play in", "park"}, {"dog", "play in", "park"}}));
}

TEST(ExtractTest, NoNounsGivesEmptyGraph) {
  constexpr char rows[] = R"(
running run VERB _ 0 root
fast fast ADV _ 1 advmod
)";
  const SceneGraph g = Parse(rows);
  EXPECT_TRUE(g.objects.empty());
  EXPECT_TRUE(g.relations.empty());
  EXPECT_TRUE(g.attributes.empty());
}

TEST(SuperClassTest, LookupAndFallback) {
  const SuperClassLexicon lex = DefaultSuperClassLexicon();
  EXPECT_EQ(lex.Lookup("dog"), "animal");
  EXPECT_EQ(lex.Lookup("Dog"), "animal");
  EXPECT_EQ(lex.Lookup("zzyzx"), "other");
  for (const char *w : {"truck", "boat", "train"}) EXPECT_EQ(lex.Lookup(w), "vehicle") << w;
}

TEST(SuperClassTest, AssignsEveryObject) {
  SceneGraph g;
  g.objects = {{0, "dog", ""}, {1, "zzyzx", ""}};
  SuperClassLexicon lex;
  lex.entries = {{"dog", "animal"}};
  lex.fallback = "misc";
  const SceneGraph out = AssignSuperClasses(g, lex);
  EXPECT_EQ(out.objects[0].super_class, "animal");
  EXPECT_EQ(out.objects[1].super_class, "misc");
}

TEST(ParserPropertyTest, ToyCorpusIsWellFormedAndDeterministic) {
  const auto graphs = LoadConllu(VICTR_SOURCE_DIR "/data/toy/captions.conllu");
  const QuantifierLexicon q = DefaultQuantifierLexicon();
  const SuperClassLexicon s = DefaultSuperClassLexicon();
  for (const DependencyGraph &dep : graphs) {
    const SceneGraph g = ParseSceneGraph(dep, q, s);
    EXPECT_NO_THROW(ValidateSceneGraph(g)) << dep.caption_id;
    EXPECT_EQ(ParseSceneGraph(dep, q, s), g);
    for (size_t i = 0; i < g.objects.size(); ++i) {
      EXPECT_EQ(g.objects[i].id, static_cast<int>(i));
      EXPECT_FALSE(g.objects[i].super_class.empty());
    }
  }
}

TEST(LexiconTest, LoadsQuantifierFile) {
  const std::string path = ::testing::TempDir() + "/quant.tsv";
  {
    std::ofstream out(path);
    out << "# comment\nseven\t7\na handful of\tMANY\nheaps of\t4\n";
  }
  const QuantifierLexicon q = LoadQuantifierLexicon(path);
  EXPECT_EQ(q.numeral_map.at("seven"), 7);
  EXPECT_EQ(q.phrase_map.at("a handful of"), QuantifierLexicon::kMany);
  EXPECT_EQ(q.phrase_map.at("heaps of"), 4);
  EXPECT_THROW(LoadQuantifierLexicon("/nonexistent.tsv"), InputError);
}

}  // namespace
}  // namespace victr
