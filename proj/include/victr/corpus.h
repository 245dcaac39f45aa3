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

// Loaders for the caption corpus: CoNLL-U dependency parses of the
// captions, COCO-style caption and instance annotation files.

#ifndef VICTR_CORPUS_H_
#define VICTR_CORPUS_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "victr/bounding_box.h"
#include "victr/scene_graph.h"

namespace victr {

// One CoNLL-U word line. String fields keep the file's spelling, including
// "_" for unspecified values.
struct Token {
  int index = 1;  // 1-based
  std::string surface;
  std::string lemma;
  std::string upos;
  std::string xpos = "_";
  std::string feats = "_";
  int head = 0;  // 0 = root
  std::string deprel;
  std::string misc = "_";

  // Lower-cased lemma, falling back to the surface form when the lemma is
  // unspecified.
  std::string NormalizedLemma() const;
  // Relation label without its subtype ("nmod:poss" -> "nmod").
  std::string_view BaseDeprel() const;

  bool operator==(const Token &) const = default;
};

struct DependencyGraph {
  CaptionId caption_id = 0;
  ImageId image_id = 0;
  std::vector<Token> tokens;

  const Token &token(int index) const { return tokens.at(index - 1); }
  int size() const { return static_cast<int>(tokens.size()); }

  bool operator==(const DependencyGraph &) const = default;
};

// Throws InputError unless indices run 1..n, every head is 0 or a valid
// index other than the token itself, deprels are nonempty and at least one
// token is attached to the root.
void ValidateDependencyGraph(const DependencyGraph &graph);

// Parses CoNLL-U text. `source` is used in error messages. Multi-word token
// ranges ("2-3") and empty nodes ("2.1") are skipped.
std::vector<DependencyGraph> ParseConllu(std::string_view text,
                                         const std::string &source);
std::vector<DependencyGraph> LoadConllu(const std::string &path);
std::string FormatConllu(std::span<const DependencyGraph> graphs);

struct Caption {
  CaptionId id = 0;
  std::string text;

  bool operator==(const Caption &) const = default;
};

struct CaptionSet {
  // Annotation order is preserved within each image.
  std::map<ImageId, std::vector<Caption>> captions;

  size_t num_captions() const;
  // Returns nullptr when the id is unknown.
  const Caption *Find(CaptionId id) const;
  // Image owning a caption, or -1.
  ImageId ImageOf(CaptionId id) const;
};

CaptionSet CaptionsFromJson(const nlohmann::json &j, const std::string &source);
CaptionSet LoadCaptions(const std::string &path);

struct Instance {
  std::string category;
  std::string super_class;
  BoundingBox box;

  bool operator==(const Instance &) const = default;
};

struct InstanceSet {
  std::map<ImageId, std::vector<Instance>> boxes;
  // category name -> super-class
  std::map<std::string, std::string> categories;
};

InstanceSet InstancesFromJson(const nlohmann::json &j, const std::string &source);
InstanceSet LoadInstances(const std::string &path);

// Picks the caption whose scene graph has the largest |O|+|R|+|A|, breaking
// ties by the lowest caption id. Throws InputError on an empty list.
CaptionId SelectRichestCaption(
    std::span<const std::pair<CaptionId, SceneGraph>> captions);

}  // namespace victr

#endif  // VICTR_CORPUS_H_
