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

#ifndef VICTR_GEOMETRY_H_
#define VICTR_GEOMETRY_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "victr/bounding_box.h"
#include "victr/corpus.h"
#include "victr/scene_graph.h"

namespace victr {

// Position of a subject box relative to an object box.
enum class GeometricRelation {
  kLeftOf = 0,
  kRightOf,
  kAbove,
  kBelow,
  kInside,
  kSurrounding,
};

inline constexpr int kNumGeometricRelations = 6;

// Fixed order used for graph files and embedding concatenation.
inline constexpr std::array<GeometricRelation, kNumGeometricRelations>
    kAllGeometricRelations = {
        GeometricRelation::kLeftOf, GeometricRelation::kRightOf,
        GeometricRelation::kAbove,  GeometricRelation::kBelow,
        GeometricRelation::kInside, GeometricRelation::kSurrounding};

std::string_view GeometricRelationName(GeometricRelation r);  // "left_of", ...
std::optional<GeometricRelation> GeometricRelationFromName(std::string_view name);
GeometricRelation Inverse(GeometricRelation r);

// Containment first (inclusive edges; identical boxes count as inside),
// then the dominant axis of the center offset from s to o. Concentric boxes
// that do not nest fall back to the top-left corner offset.
GeometricRelation ClassifyGeometricRelation(const BoundingBox &s, const BoundingBox &o);

// caption lemma -> category name
using AliasTable = std::map<std::string, std::string>;

// Caption words for COCO categories ("man" -> "person", "table" ->
// "dining table", ...).
AliasTable DefaultAliasTable();
// Reads `caption_lemma<TAB>category_name` lines.
AliasTable LoadAliasTable(const std::string &path);

// Pairs scene-graph objects with annotated boxes of the same image. Objects
// are visited in id order; each claims the largest unclaimed box of its
// category (its own word, or its alias). Unmatched objects are omitted.
// Throws InputError when the image has no annotations.
std::vector<std::pair<int, BoundingBox>> MatchObjectsToBoxes(
    const SceneGraph &graph, const InstanceSet &instances, ImageId image_id,
    const AliasTable &aliases = {});

}  // namespace victr

#endif  // VICTR_GEOMETRY_H_
