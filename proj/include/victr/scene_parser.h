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

// Rule-based conversion of a dependency-parsed caption into a scene graph.
//
// The conversion runs in three stages:
//
//  1. ExpandQuantifiers: the quantity checker. Nouns carrying a numeric
//     modifier ("two men") or introduced by a quantifier phrase ("a dozen
//     of eggs") are replicated, together with their adjectival modifiers, so
//     that every depicted instance becomes its own node. A plural direct
//     object with no quantifier of its own takes the count of its verb's
//     subject ("two men are riding brown horses" gives two horses). The
//     quantifier tokens themselves are consumed, which makes the stage
//     idempotent. Replicas carry "CopyOf=<index>" in the MISC column.
//
//  2. ExtractSceneGraph: nouns become objects, adjectives attached through
//     amod or a copula become attributes, and relations are read off verb
//     arguments (nsubj + obj/iobj), prepositional noun modifiers
//     (nmod + case) and verb obliques (obl + case, predicate "verb prep").
//
//  3. AssignSuperClasses: lexicon lookup with a fallback class.

#ifndef VICTR_SCENE_PARSER_H_
#define VICTR_SCENE_PARSER_H_

#include <map>
#include <string>

#include "victr/corpus.h"
#include "victr/scene_graph.h"

namespace victr {

struct QuantifierLexicon {
  // Value of a phrase that resolves to "many" rather than a number.
  static constexpr int kMany = -1;

  // Single numerals reached through a nummod dependency ("two" -> 2).
  std::map<std::string, int> numeral_map;
  // Lower-cased, space-separated surface phrases matched in the token
  // sequence ("a dozen of" -> 12, "a lot of" -> kMany).
  std::map<std::string, int> phrase_map;
  int many_value = 3;
  int max_duplication = 10;

  // Resolves a phrase_map value, mapping kMany to many_value.
  int Resolve(int value) const { return value == kMany ? many_value : value; }
};

// English numerals one..twenty plus common quantifier phrases.
QuantifierLexicon DefaultQuantifierLexicon();

// Reads `word<TAB>value` lines; value is a positive integer or MANY.
// Entries containing a space or valued MANY go to phrase_map, the rest to
// numeral_map. Lines starting with '#' are comments.
QuantifierLexicon LoadQuantifierLexicon(const std::string &path);

struct SuperClassLexicon {
  std::map<std::string, std::string> entries;  // lower-cased lemma keys
  std::string fallback = "other";

  const std::string &Lookup(const std::string &lemma) const;
};

// COCO category names and common caption nouns mapped to the twelve COCO
// supercategories.
SuperClassLexicon DefaultSuperClassLexicon();

// Reads `lemma<TAB>super_class` lines.
SuperClassLexicon LoadSuperClassLexicon(const std::string &path,
                                        const std::string &fallback = "other");

DependencyGraph ExpandQuantifiers(const DependencyGraph &graph,
                                  const QuantifierLexicon &lexicon);

// Objects are left with an empty super_class; see AssignSuperClasses.
SceneGraph ExtractSceneGraph(const DependencyGraph &graph);

SceneGraph AssignSuperClasses(SceneGraph graph, const SuperClassLexicon &lexicon);

// ExpandQuantifiers + ExtractSceneGraph + AssignSuperClasses.
SceneGraph ParseSceneGraph(const DependencyGraph &graph,
                           const QuantifierLexicon &quantifiers,
                           const SuperClassLexicon &super_classes);

}  // namespace victr

#endif  // VICTR_SCENE_PARSER_H_
