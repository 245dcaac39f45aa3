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

#include "support/synthetic_corpus.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "json.hpp"
#include "victr/binary_io.h"

namespace victr::testing {
namespace {

namespace fs = std::filesystem;

int Uniform(std::mt19937_64 &rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
}

double Unit(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Verb {
  std::string lemma, singular, plural;
};

struct Community {
  const std::vector<std::string> *nouns;
  std::vector<Verb> verbs;
  std::vector<std::string> preps;
  std::vector<std::string> adjectives;
};

const Community &Animals() {
  static const Community c{&AnimalNouns(),
                           {{"chase", "chases", "chase"},
                            {"follow", "follows", "follow"},
                            {"lick", "licks", "lick"},
                            {"sniff", "sniffs", "sniff"}},
                           {"near", "beside"},
                           {"spotted", "hungry", "furry", "small"}};
  return c;
}

const Community &Vehicles() {
  static const Community c{&VehicleNouns(),
                           {{"tow", "tows", "tow"},
                            {"block", "blocks", "block"},
                            {"pull", "pulls", "pull"},
                            {"overtake", "overtakes", "overtake"}},
                           {"behind", "along"},
                           {"red", "rusty", "shiny", "old"}};
  return c;
}

// A token whose head is given as a position in the same list.
struct Draft {
  std::string surface, lemma, upos, xpos, feats;
  int head;  // 0-based position of the head, -1 for root
  std::string deprel;
};

}  // namespace

std::vector<SceneGraph> RandomSceneGraphs(std::mt19937_64 &rng, int num_graphs) {
  std::vector<SceneGraph> out;
  for (int g = 0; g < num_graphs; ++g) {
    SceneGraph sg;
    sg.caption_id = g + 1;
    sg.image_id = g / 3 + 1;
    const int n = Uniform(rng, 1, 6);
    for (int i = 0; i < n; ++i) {
      sg.objects.push_back({i, "o" + std::to_string(Uniform(rng, 0, 9)), "c"});
    }
    const int n_attr = Uniform(rng, 0, 4);
    for (int i = 0; i < n_attr; ++i) {
      sg.attributes.push_back({Uniform(rng, 0, n - 1), "a" + std::to_string(Uniform(rng, 0, 4))});
    }
    std::set<std::tuple<int, std::string, int>> seen;
    const int n_rel = n < 2 ? 0 : Uniform(rng, 0, 5);
    for (int i = 0; i < n_rel; ++i) {
      const int s = Uniform(rng, 0, n - 1);
      const int o = Uniform(rng, 0, n - 1);
      const std::string p = "p" + std::to_string(Uniform(rng, 0, 5));
      if (s == o || !seen.insert({s, p, o}).second) continue;
      sg.relations.push_back({s, p, o});
    }
    out.push_back(std::move(sg));
  }
  return out;
}

const std::vector<std::string> &AnimalNouns() {
  static const std::vector<std::string> v = {"dog",      "cat",   "horse",  "cow",
                                             "bird",     "sheep", "zebra",  "giraffe"};
  return v;
}

const std::vector<std::string> &VehicleNouns() {
  static const std::vector<std::string> v = {"car",  "truck",      "train",    "bicycle",
                                             "boat", "motorcycle", "airplane", "bus"};
  return v;
}

CorpusFiles WriteCommunityCorpus(const std::string &dir, int num_images,
                                 int captions_per_image, uint64_t seed) {
  std::mt19937_64 rng(seed);
  fs::create_directories(dir);
  std::vector<DependencyGraph> graphs;
  nlohmann::json captions_json;
  captions_json["images"] = nlohmann::json::array();
  captions_json["annotations"] = nlohmann::json::array();
  nlohmann::json instances_json;
  instances_json["images"] = nlohmann::json::array();
  instances_json["annotations"] = nlohmann::json::array();
  instances_json["categories"] = nlohmann::json::array();

  std::map<std::string, int> category_ids;
  for (const auto *nouns : {&AnimalNouns(), &VehicleNouns()}) {
    for (const std::string &noun : *nouns) {
      const int id = static_cast<int>(category_ids.size()) + 1;
      category_ids[noun] = id;
      instances_json["categories"].push_back(
          {{"id", id}, {"name", noun}, {"supercategory", nouns == &AnimalNouns() ? "animal" : "vehicle"}});
    }
  }
  auto plural = [](const std::string &noun) {
    if (noun == "sheep") return noun;
    if (noun == "bus") return std::string("buses");
    return noun + "s";
  };

  int box_id = 0;
  for (int image = 1; image <= num_images; ++image) {
    const Community &com = image % 2 == 1 ? Animals() : Vehicles();
    const std::vector<std::string> &nouns = *com.nouns;
    captions_json["images"].push_back({{"id", image}, {"width", 640}, {"height", 480}});
    instances_json["images"].push_back({{"id", image}, {"width", 640}, {"height", 480}});
    std::map<std::string, int> needed;
    for (int k = 1; k <= captions_per_image; ++k) {
      std::vector<std::string> pick = nouns;
      std::shuffle(pick.begin(), pick.end(), rng);
      const double u = Unit(rng);
      const int count = u < 0.6 ? 1 : (u < 0.8 ? 2 : 3);
      const Verb &verb = com.verbs[Uniform(rng, 0, static_cast<int>(com.verbs.size()) - 1)];
      const bool subj_adj = Unit(rng) < 0.5;
      const bool obj_adj = Unit(rng) < 0.5;
      const bool oblique = Unit(rng) < 0.5;

      std::vector<Draft> d;
      // Subject phrase; the subject noun sits at index `subj`, the verb
      // right after it.
      const int subj = 1 + (subj_adj ? 1 : 0);
      const int verb_at = subj + 1;
      if (count == 1) {
        d.push_back({"a", "a", "DET", "DT", "_", subj, "det"});
      } else {
        const std::string num = count == 2 ? "two" : "three";
        d.push_back({num, num, "NUM", "CD", "NumType=Card", subj, "nummod"});
      }
      if (subj_adj) {
        const std::string &a = com.adjectives[Uniform(rng, 0, 3)];
        d.push_back({a, a, "ADJ", "JJ", "Degree=Pos", subj, "amod"});
      }
      d.push_back({count == 1 ? pick[0] : plural(pick[0]), pick[0], "NOUN",
                   count == 1 ? "NN" : "NNS", count == 1 ? "Number=Sing" : "Number=Plur",
                   verb_at, "nsubj"});
      d.push_back({count == 1 ? verb.singular : verb.plural, verb.lemma, "VERB",
                   count == 1 ? "VBZ" : "VBP", "_", -1, "root"});
      const int obj = verb_at + 2 + (obj_adj ? 1 : 0);
      d.push_back({"a", "a", "DET", "DT", "_", obj, "det"});
      if (obj_adj) {
        const std::string &a = com.adjectives[Uniform(rng, 0, 3)];
        d.push_back({a, a, "ADJ", "JJ", "Degree=Pos", obj, "amod"});
      }
      d.push_back({pick[1], pick[1], "NOUN", "NN", "Number=Sing", verb_at, "obj"});
      if (oblique) {
        const std::string &p = com.preps[Uniform(rng, 0, 1)];
        const int obl = obj + 3;
        d.push_back({p, p, "ADP", "IN", "_", obl, "case"});
        d.push_back({"the", "the", "DET", "DT", "_", obl, "det"});
        d.push_back({pick[2], pick[2], "NOUN", "NN", "Number=Sing", verb_at, "obl"});
      }

      DependencyGraph g;
      g.caption_id = image * 10 + k;
      g.image_id = image;
      std::string text;
      for (size_t i = 0; i < d.size(); ++i) {
        Token t;
        t.index = static_cast<int>(i) + 1;
        t.surface = d[i].surface;
        t.lemma = d[i].lemma;
        t.upos = d[i].upos;
        t.xpos = d[i].xpos;
        t.feats = d[i].feats;
        t.head = d[i].head + 1;
        t.deprel = d[i].deprel;
        g.tokens.push_back(std::move(t));
        text += (i ? " " : "") + d[i].surface;
      }
      graphs.push_back(std::move(g));
      captions_json["annotations"].push_back(
          {{"image_id", image}, {"id", image * 10 + k}, {"caption", text}});

      std::map<std::string, int> here;
      here[pick[0]] += count;
      here[pick[1]] += 1;
      if (oblique) here[pick[2]] += 1;
      for (const auto &[noun, c] : here) needed[noun] = std::max(needed[noun], c);
    }
    for (const auto &[noun, c] : needed) {
      for (int i = 0; i < c; ++i) {
        const int w = Uniform(rng, 20, 200), h = Uniform(rng, 20, 200);
        instances_json["annotations"].push_back({{"id", ++box_id},
                                                 {"image_id", image},
                                                 {"category_id", category_ids[noun]},
                                                 {"bbox", {Uniform(rng, 0, 440), Uniform(rng, 0, 280), w, h}}});
      }
    }
  }

  CorpusFiles files;
  files.dir = dir;
  files.conllu = (fs::path(dir) / "captions.conllu").string();
  files.captions = (fs::path(dir) / "captions.json").string();
  files.instances = (fs::path(dir) / "instances.json").string();
  files.config = (fs::path(dir) / "corpus.cfg").string();
  files.num_captions = num_images * captions_per_image;
  WriteFileBytes(files.conllu, FormatConllu(graphs));
  WriteFileBytes(files.captions, captions_json.dump(1) + "\n");
  WriteFileBytes(files.instances, instances_json.dump(1) + "\n");
  WriteFileBytes(files.config,
                 "conllu = captions.conllu\ncaptions = captions.json\n"
                 "instances = instances.json\nout_dir = out\n");
  return files;
}

std::string MakeTempDir(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("victr_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace victr::testing
