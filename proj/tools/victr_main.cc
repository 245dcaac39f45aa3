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

// Command line driver for the VICTR pipeline stages.
//
//   victr --config toy.cfg parse
//   victr --config toy.cfg build-graphs
//   victr --config toy.cfg train --graph all
//   victr --config toy.cfg compose
//   victr --config toy.cfg fuse
//   victr --config toy.cfg project --kind object
//
// Exit status: 0 on success, 2 for input errors, 3 for invariant breaches.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "victr/error.h"
#include "victr/pipeline.h"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInvariant = 3;

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"VICTR visual-contextual text representation pipeline", "victr"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> out_dir, caption_mode;
  std::optional<uint64_t> seed;
  std::vector<std::string> settings;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out-dir", out_dir, "artifact directory");
  app.add_option("--seed", seed, "random seed for training and fusion");
  app.add_option("--caption-mode", caption_mode, "all or richest")
      ->check(CLI::IsMember({"all", "richest"}));
  app.add_option("--set", settings, "extra key=value configuration override");

  std::string graph = "all";
  std::string kind = "object";
  auto *parse = app.add_subcommand("parse", "parse captions into scene graphs");
  auto *build = app.add_subcommand("build-graphs", "build basic and positional graphs");
  auto *train = app.add_subcommand("train", "train GCN embeddings");
  train->add_option("--graph", graph, "basic, a position name, or all");
  auto *compose = app.add_subcommand("compose", "compose visual semantic vectors");
  auto *fuse = app.add_subcommand("fuse", "fuse text features with visual semantics");
  auto *project = app.add_subcommand("project", "2-d PCA projection");
  project->add_option("--kind", kind, "object, relation, attribute or all")
      ->check(CLI::IsMember({"object", "relation", "attribute", "all"}));
  auto *stats = app.add_subcommand("stats", "summarize existing artifacts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    std::map<std::string, std::string> overrides;
    for (const std::string &s : settings) {
      const size_t eq = s.find('=');
      if (eq == std::string::npos) throw victr::InputError("--set expects key=value, got " + s);
      overrides[s.substr(0, eq)] = s.substr(eq + 1);
    }
    if (out_dir) overrides["out_dir"] = *out_dir;
    if (seed) overrides["seed"] = std::to_string(*seed);
    if (caption_mode) overrides["caption_mode"] = *caption_mode;
    const victr::PipelineConfig config = victr::LoadPipelineConfig(config_path, overrides);

    victr::StageResult result;
    if (*parse) {
      result = victr::RunParse(config);
    } else if (*build) {
      result = victr::RunBuildGraphs(config);
    } else if (*train) {
      result = victr::RunTrain(config, graph);
    } else if (*compose) {
      result = victr::RunCompose(config);
    } else if (*fuse) {
      result = victr::RunFuse(config);
    } else if (*project) {
      result = victr::RunProject(config, kind);
    } else if (*stats) {
      result = victr::RunStats(config);
    }
    std::cout << result.summary << std::endl;
    return 0;
  } catch (const victr::InvariantError &e) {
    std::cerr << "victr: invariant violated: " << e.what() << std::endl;
    return kExitInvariant;
  } catch (const victr::InputError &e) {
    std::cerr << "victr: " << e.what() << std::endl;
    return kExitInput;
  } catch (const std::exception &e) {
    std::cerr << "victr: " << e.what() << std::endl;
    return kExitInput;
  }
}
