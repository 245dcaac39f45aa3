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

#include "victr/geometry.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "victr/error.h"

namespace victr {
namespace {

bool Contains(const BoundingBox &outer, const BoundingBox &inner) {
  return inner.x >= outer.x && inner.y >= outer.y &&
         inner.x + inner.w <= outer.x + outer.w &&
         inner.y + inner.h <= outer.y + outer.h;
}

// Axis-dominant direction of an offset from s to o, describing s.
// Returns nullopt for a zero offset.
std::optional<GeometricRelation> Direction(double dx, double dy) {
  if (dx == 0 && dy == 0) return std::nullopt;
  if (std::abs(dx) >= std::abs(dy)) {
    return dx > 0 ? GeometricRelation::kLeftOf : GeometricRelation::kRightOf;
  }
  return dy > 0 ? GeometricRelation::kAbove : GeometricRelation::kBelow;
}

}  // namespace

std::string_view GeometricRelationName(GeometricRelation r) {
  switch (r) {
    case GeometricRelation::kLeftOf: return "left_of";
    case GeometricRelation::kRightOf: return "right_of";
    case GeometricRelation::kAbove: return "above";
    case GeometricRelation::kBelow: return "below";
    case GeometricRelation::kInside: return "inside";
    case GeometricRelation::kSurrounding: return "surrounding";
  }
  return "";
}

std::optional<GeometricRelation> GeometricRelationFromName(std::string_view name) {
  for (GeometricRelation r : kAllGeometricRelations) {
    if (GeometricRelationName(r) == name) return r;
  }
  return std::nullopt;
}

GeometricRelation Inverse(GeometricRelation r) {
  switch (r) {
    case GeometricRelation::kLeftOf: return GeometricRelation::kRightOf;
    case GeometricRelation::kRightOf: return GeometricRelation::kLeftOf;
    case GeometricRelation::kAbove: return GeometricRelation::kBelow;
    case GeometricRelation::kBelow: return GeometricRelation::kAbove;
    case GeometricRelation::kInside: return GeometricRelation::kSurrounding;
    case GeometricRelation::kSurrounding: return GeometricRelation::kInside;
  }
  return r;
}

GeometricRelation ClassifyGeometricRelation(const BoundingBox &s, const BoundingBox &o) {
  if (Contains(o, s)) return GeometricRelation::kInside;
  if (Contains(s, o)) return GeometricRelation::kSurrounding;
  // Doubled center offset keeps the comparison exact for exact inputs.
  const double dx = (2 * o.x + o.w) - (2 * s.x + s.w);
  const double dy = (2 * o.y + o.h) - (2 * s.y + s.h);
  if (auto r = Direction(dx, dy)) return *r;
  // Concentric crossing boxes; their corners necessarily differ.
  return Direction(o.x - s.x, o.y - s.y).value_or(GeometricRelation::kInside);
}

AliasTable DefaultAliasTable() {
  return {
      {"man", "person"},       {"woman", "person"},      {"boy", "person"},
      {"girl", "person"},      {"child", "person"},      {"kid", "person"},
      {"people", "person"},    {"player", "person"},     {"guy", "person"},
      {"lady", "person"},      {"baby", "person"},       {"skier", "person"},
      {"surfer", "person"},    {"skateboarder", "person"}, {"rider", "person"},
      {"bike", "bicycle"},     {"plane", "airplane"},    {"jet", "airplane"},
      {"motorbike", "motorcycle"}, {"ship", "boat"},     {"puppy", "dog"},
      {"kitten", "cat"},       {"pony", "horse"},        {"table", "dining table"},
      {"desk", "dining table"}, {"sofa", "couch"},       {"phone", "cell phone"},
      {"television", "tv"},    {"ball", "sports ball"},  {"racket", "tennis racket"},
      {"hydrant", "fire hydrant"}, {"doughnut", "donut"}, {"fridge", "refrigerator"},
      {"glass", "wine glass"}, {"plant", "potted plant"}, {"bag", "handbag"},
  };
}

AliasTable LoadAliasTable(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  AliasTable table;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw ParseError(path, line_no, "expected caption_lemma<TAB>category_name");
    }
    table[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return table;
}

std::vector<std::pair<int, BoundingBox>> MatchObjectsToBoxes(
    const SceneGraph &graph, const InstanceSet &instances, ImageId image_id,
    const AliasTable &aliases) {
  auto it = instances.boxes.find(image_id);
  if (it == instances.boxes.end()) {
    throw InputError("no instance annotations for image " + std::to_string(image_id));
  }
  const std::vector<Instance> &boxes = it->second;
  std::vector<bool> claimed(boxes.size(), false);

  std::vector<const SceneObject *> objects;
  for (const SceneObject &o : graph.objects) objects.push_back(&o);
  std::stable_sort(objects.begin(), objects.end(),
                   [](const SceneObject *a, const SceneObject *b) { return a->id < b->id; });

  std::vector<std::pair<int, BoundingBox>> matches;
  for (const SceneObject *o : objects) {
    std::string category = o->word;
    if (!instances.categories.count(category)) {
      auto alias = aliases.find(o->word);
      if (alias == aliases.end()) continue;
      category = alias->second;
    }
    int best = -1;
    for (size_t b = 0; b < boxes.size(); ++b) {
      if (claimed[b] || boxes[b].category != category) continue;
      if (best < 0 || boxes[b].box.area() > boxes[best].box.area()) best = static_cast<int>(b);
    }
    if (best < 0) continue;
    claimed[best] = true;
    matches.emplace_back(o->id, boxes[best].box);
  }
  return matches;
}

}  // namespace victr
