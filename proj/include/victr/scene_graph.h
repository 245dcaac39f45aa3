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

#ifndef VICTR_SCENE_GRAPH_H_
#define VICTR_SCENE_GRAPH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace victr {

using CaptionId = int64_t;
using ImageId = int64_t;

struct SceneObject {
  int id = 0;
  std::string word;
  std::string super_class;

  bool operator==(const SceneObject &) const = default;
};

struct SceneAttribute {
  int object_id = 0;
  std::string word;

  bool operator==(const SceneAttribute &) const = default;
};

struct SceneRelation {
  int subject = 0;
  std::string predicate;
  int object = 0;

  bool operator==(const SceneRelation &) const = default;
};

// Objects, attributes and subject-predicate-object relations extracted from
// one caption. Object ids are assigned in document order starting at 0.
struct SceneGraph {
  CaptionId caption_id = 0;
  ImageId image_id = 0;
  std::vector<SceneObject> objects;
  std::vector<SceneAttribute> attributes;
  std::vector<SceneRelation> relations;

  // |O| + |R| + |A|.
  size_t Richness() const {
    return objects.size() + relations.size() + attributes.size();
  }

  // Returns nullptr if no object carries `id`.
  const SceneObject *FindObject(int id) const;

  bool operator==(const SceneGraph &) const = default;
};

// Throws InputError on duplicate object ids, dangling references,
// self-relations or duplicate triples.
void ValidateSceneGraph(const SceneGraph &graph);

nlohmann::json SceneGraphToJson(const SceneGraph &graph);
SceneGraph SceneGraphFromJson(const nlohmann::json &j);

}  // namespace victr

#endif  // VICTR_SCENE_GRAPH_H_
