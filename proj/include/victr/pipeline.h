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

// File-based pipeline stages. Each stage reads the artifacts of the
// previous one from the output directory:
//
//   parse         scene_graphs/<caption_id>.json, scene_graphs/index.json
//   build-graphs  graphs/<kind>.vg, graphs/stats.json
//   train         models/<kind>.vm, models/<kind>_loss.csv,
//                 embeddings/<kind>.emb
//   compose       composed/evs.emb, composed/manifest.json
//   fuse          fused/<caption_id>.vf
//   project       projection/<kind>.tsv, projection/<kind>.svg
//
// where <kind> is "basic" or a geometric relation name. Every stage is
// deterministic: rerunning it on unchanged inputs rewrites identical bytes.

#ifndef VICTR_PIPELINE_H_
#define VICTR_PIPELINE_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "victr/scene_graph.h"

namespace victr {

struct PipelineConfig {
  // Inputs. Empty optional paths select the built-in defaults.
  std::string conllu;
  std::string captions;
  std::string instances;         // optional; no boxes without it
  std::string quantifiers;       // optional lexicon
  std::string super_classes;     // optional lexicon
  std::string aliases;           // optional caption-word -> category table
  std::string text_features;     // optional directory of <caption_id>.emb
  std::string fusion_weights;    // optional D x V embedding file
  std::string out_dir = "victr_out";

  int basic_width = 200;
  int positional_width = 50;
  int text_width = 256;

  double learning_rate = 0.02;
  int epochs = 200;
  uint64_t seed = 0;
  double init_scale = 1.0;

  int max_duplication = 10;
  int many_value = 3;
  std::string caption_mode = "all";  // all | richest
  bool mirror_attribute_edges = false;

  // Throws InputError for out-of-range values.
  void Validate() const;
};

// Applies `key = value` assignments. Keys are the field names above.
// Relative paths in a file are resolved against `base_dir`. Throws
// InputError for unknown keys or malformed values.
void ApplyConfigValues(const std::map<std::string, std::string> &values,
                       const std::string &base_dir, PipelineConfig *config);

// Reads a `key = value` file ('#' starts a comment).
std::map<std::string, std::string> ReadConfigFile(const std::string &path);

// Defaults, then the file (if non-empty), then the overrides.
PipelineConfig LoadPipelineConfig(const std::string &path,
                                  const std::map<std::string, std::string> &overrides);

// "basic" followed by the six geometric relation names.
const std::vector<std::string> &GraphKinds();

struct StageResult {
  std::string summary;              // one human-readable line
  std::vector<std::string> outputs;  // files written
};

StageResult RunParse(const PipelineConfig &config);
StageResult RunBuildGraphs(const PipelineConfig &config);
// `selector` is a graph kind or "all".
StageResult RunTrain(const PipelineConfig &config, const std::string &selector);
StageResult RunCompose(const PipelineConfig &config);
StageResult RunFuse(const PipelineConfig &config);
// `kind` is object, relation, attribute, or all (zero-padded joint
// projection).
StageResult RunProject(const PipelineConfig &config, const std::string &kind);
StageResult RunStats(const PipelineConfig &config);

// Scene graphs listed in scene_graphs/index.json, in index order.
std::vector<SceneGraph> LoadSceneGraphs(const std::string &out_dir);

// Lower-cased word tokens of a caption.
std::vector<std::string> TokenizeCaption(const std::string &text);

}  // namespace victr

#endif  // VICTR_PIPELINE_H_
