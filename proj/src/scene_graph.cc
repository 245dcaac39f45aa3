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

#include "victr/scene_graph.h"

#include <set>
#include <tuple>

#include "victr/error.h"

namespace victr {

using nlohmann::json;

const SceneObject *SceneGraph::FindObject(int id) const {
  for (const SceneObject &o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

void ValidateSceneGraph(const SceneGraph &graph) {
  const std::string where = "scene graph " + std::to_string(graph.caption_id);
  std::set<int> ids;
  for (const SceneObject &o : graph.objects) {
    if (!ids.insert(o.id).second) {
      throw InputError(where + ": duplicate object id " + std::to_string(o.id));
    }
    if (o.word.empty()) throw InputError(where + ": object with empty word");
  }
  for (const SceneAttribute &a : graph.attributes) {
    if (!ids.count(a.object_id)) {
      throw InputError(where + ": attribute references unknown object " +
                       std::to_string(a.object_id));
    }
  }
  std::set<std::tuple<int, std::string, int>> triples;
  for (const SceneRelation &r : graph.relations) {
    if (!ids.count(r.subject) || !ids.count(r.object)) {
      throw InputError(where + ": relation references unknown object");
    }
    if (r.subject == r.object) {
      throw InputError(where + ": relation '" + r.predicate +
                       "' links an object to itself");
    }
    if (!triples.emplace(r.subject, r.predicate, r.object).second) {
      throw InputError(where + ": duplicate relation triple");
    }
  }
}

json SceneGraphToJson(const SceneGraph &graph) {
  json objects = json::array();
  for (const SceneObject &o : graph.objects) {
    objects.push_back({{"id", o.id}, {"word", o.word}, {"super_class", o.super_class}});
  }
  json attributes = json::array();
  for (const SceneAttribute &a : graph.attributes) {
    attributes.push_back({{"object_id", a.object_id}, {"word", a.word}});
  }
  json relations = json::array();
  for (const SceneRelation &r : graph.relations) {
    relations.push_back(
        {{"subject", r.subject}, {"predicate", r.predicate}, {"object", r.object}});
  }
  return {{"caption_id", graph.caption_id},
          {"image_id", graph.image_id},
          {"objects", objects},
          {"attributes", attributes},
          {"relations", relations}};
}

SceneGraph SceneGraphFromJson(const json &j) {
  SceneGraph graph;
  try {
    graph.caption_id = j.at("caption_id").get<CaptionId>();
    graph.image_id = j.at("image_id").get<ImageId>();
    for (const json &o : j.at("objects")) {
      graph.objects.push_back({o.at("id").get<int>(), o.at("word").get<std::string>(),
                               o.value("super_class", std::string())});
    }
    for (const json &a : j.at("attributes")) {
      graph.attributes.push_back(
          {a.at("object_id").get<int>(), a.at("word").get<std::string>()});
    }
    for (const json &r : j.at("relations")) {
      graph.relations.push_back({r.at("subject").get<int>(),
                                 r.at("predicate").get<std::string>(),
                                 r.at("object").get<int>()});
    }
  } catch (const json::exception &e) {
    throw InputError(std::string("malformed scene graph json: ") + e.what());
  }
  ValidateSceneGraph(graph);
  return graph;
}

}  // namespace victr
