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

#include "victr/pipeline.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "victr/binary_io.h"
#include "victr/corpus.h"
#include "victr/embedding.h"
#include "victr/error.h"
#include "victr/fusion.h"
#include "victr/gcn.h"
#include "victr/geometry.h"
#include "victr/relational_graph.h"
#include "victr/scene_parser.h"

namespace victr {
namespace {

namespace fs = std::filesystem;

std::string Trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

template <typename T>
T ParseNumber(const std::string &key, const std::string &value) {
  T out{};
  const char *end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw InputError("config key '" + key + "': cannot parse '" + value + "'");
  }
  return out;
}

double ParseDouble(const std::string &key, const std::string &value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception &) {
  }
  throw InputError("config key '" + key + "': cannot parse '" + value + "'");
}

bool ParseBool(const std::string &key, const std::string &value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw InputError("config key '" + key + "': expected true or false, got '" + value + "'");
}

std::string ResolvePath(const std::string &base_dir, const std::string &value) {
  if (value.empty() || base_dir.empty() || fs::path(value).is_absolute()) return value;
  return (fs::path(base_dir) / value).lexically_normal().string();
}

std::string Path(const PipelineConfig &c, const std::string &sub, const std::string &name) {
  return (fs::path(c.out_dir) / sub / name).string();
}

void RequireFile(const std::string &path, const std::string &what) {
  if (path.empty()) throw InputError("no " + what + " path configured");
  if (!fs::exists(path)) throw InputError(what + " file not found: " + path);
}

// Existence check for an upstream artifact, naming the stage to run.
void RequireArtifact(const std::string &path, const std::string &stage) {
  if (!fs::exists(path)) {
    throw InputError("missing " + path + "; run `" + stage + "` first");
  }
}

void FreshDir(const fs::path &dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
}

void WriteText(const std::string &path, const std::string &text) {
  WriteFileBytes(path, text);
}

nlohmann::json ReadJsonFile(const std::string &path) {
  try {
    return nlohmann::json::parse(ReadFileBytes(path));
  } catch (const nlohmann::json::exception &e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string FormatDouble(double v, const char *fmt = "%.9g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

QuantifierLexicon QuantifiersFor(const PipelineConfig &c) {
  QuantifierLexicon q =
      c.quantifiers.empty() ? DefaultQuantifierLexicon() : LoadQuantifierLexicon(c.quantifiers);
  q.many_value = c.many_value;
  q.max_duplication = c.max_duplication;
  return q;
}

SuperClassLexicon SuperClassesFor(const PipelineConfig &c) {
  return c.super_classes.empty() ? DefaultSuperClassLexicon()
                                 : LoadSuperClassLexicon(c.super_classes);
}

std::string GraphPath(const PipelineConfig &c, const std::string &kind) {
  return Path(c, "graphs", kind + ".vg");
}

std::string EmbeddingPath(const PipelineConfig &c, const std::string &kind) {
  return Path(c, "embeddings", kind + ".emb");
}

RelationalGraph ReadStageGraph(const PipelineConfig &c, const std::string &kind) {
  const std::string path = GraphPath(c, kind);
  RequireArtifact(path, "build-graphs");
  return ReadGraph(path);
}

struct Composed {
  std::shared_ptr<const Vocabulary> vocab;
  ComposedTables tables;
};

Composed LoadComposedTables(const PipelineConfig &c) {
  Composed out;
  out.vocab = ReadStageGraph(c, "basic").vocab;
  std::vector<EmbeddingTable> tables;
  for (const std::string &kind : GraphKinds()) {
    const std::string path = EmbeddingPath(c, kind);
    RequireArtifact(path, "train");
    tables.push_back(ReadEmbeddings(path));
  }
  if (tables[0].width() != c.basic_width) {
    throw InputError("basic embeddings have width " + std::to_string(tables[0].width()) +
                     ", configured " + std::to_string(c.basic_width));
  }
  out.tables = ComposeTables(*out.vocab, tables[0],
                             std::span<const EmbeddingTable>(tables).subspan(1));
  return out;
}

// Fixed palette for projection plots.
constexpr const char *kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                    "#bcbd22", "#17becf", "#393b79", "#637939"};

std::string EscapeXml(const std::string &s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string ScatterSvg(const std::vector<std::string> &words,
                       const std::vector<std::string> &groups, const Eigen::MatrixXd &xy) {
  constexpr double kSize = 640, kMargin = 40;
  const double x0 = xy.col(0).minCoeff(), x1 = xy.col(0).maxCoeff();
  const double y0 = xy.col(1).minCoeff(), y1 = xy.col(1).maxCoeff();
  const double sx = x1 > x0 ? (kSize - 2 * kMargin) / (x1 - x0) : 0;
  const double sy = y1 > y0 ? (kSize - 2 * kMargin) / (y1 - y0) : 0;
  std::map<std::string, int> color;
  for (const std::string &g : groups) color.try_emplace(g, static_cast<int>(color.size()));

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\""
      << kSize << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (size_t i = 0; i < words.size(); ++i) {
    const double px = kMargin + (xy(i, 0) - x0) * sx;
    const double py = kSize - kMargin - (xy(i, 1) - y0) * sy;
    const char *fill = kPalette[color[groups[i]] % std::size(kPalette)];
    svg << "<circle cx=\"" << FormatDouble(px, "%.2f") << "\" cy=\"" << FormatDouble(py, "%.2f")
        << "\" r=\"4\" fill=\"" << fill << "\"><title>" << EscapeXml(groups[i])
        << "</title></circle>\n<text x=\"" << FormatDouble(px + 5, "%.2f") << "\" y=\""
        << FormatDouble(py - 5, "%.2f") << "\" font-size=\"10\">" << EscapeXml(words[i])
        << "</text>\n";
  }
  int row = 0;
  for (const auto &[g, c] : color) {
    svg << "<text x=\"8\" y=\"" << 14 + 12 * row++ << "\" font-size=\"10\" fill=\""
        << kPalette[c % std::size(kPalette)] << "\">" << EscapeXml(g) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

void PipelineConfig::Validate() const {
  auto positive = [](int v, const char *name) {
    if (v < 1) throw InputError(std::string(name) + " must be >= 1, got " + std::to_string(v));
  };
  positive(basic_width, "basic_width");
  positive(positional_width, "positional_width");
  positive(text_width, "text_width");
  positive(epochs, "epochs");
  positive(max_duplication, "max_duplication");
  positive(many_value, "many_value");
  if (!(learning_rate > 0)) throw InputError("learning_rate must be positive");
  if (!(init_scale >= 0)) throw InputError("init_scale must be non-negative");
  if (caption_mode != "all" && caption_mode != "richest") {
    throw InputError("caption_mode must be all or richest, got '" + caption_mode + "'");
  }
  if (out_dir.empty()) throw InputError("out_dir must not be empty");
}

void ApplyConfigValues(const std::map<std::string, std::string> &values,
                       const std::string &base_dir, PipelineConfig *c) {
  const std::map<std::string, std::string *> paths = {
      {"conllu", &c->conllu},
      {"captions", &c->captions},
      {"instances", &c->instances},
      {"quantifiers", &c->quantifiers},
      {"super_classes", &c->super_classes},
      {"aliases", &c->aliases},
      {"text_features", &c->text_features},
      {"fusion_weights", &c->fusion_weights},
      {"out_dir", &c->out_dir},
  };
  const std::map<std::string, int *> ints = {
      {"basic_width", &c->basic_width},   {"positional_width", &c->positional_width},
      {"text_width", &c->text_width},     {"epochs", &c->epochs},
      {"max_duplication", &c->max_duplication}, {"many_value", &c->many_value},
  };
  for (const auto &[key, value] : values) {
    if (auto it = paths.find(key); it != paths.end()) {
      *it->second = ResolvePath(base_dir, value);
    } else if (auto jt = ints.find(key); jt != ints.end()) {
      *jt->second = ParseNumber<int>(key, value);
    } else if (key == "learning_rate") {
      c->learning_rate = ParseDouble(key, value);
    } else if (key == "init_scale") {
      c->init_scale = ParseDouble(key, value);
    } else if (key == "seed") {
      c->seed = ParseNumber<uint64_t>(key, value);
    } else if (key == "caption_mode") {
      c->caption_mode = value;
    } else if (key == "mirror_attribute_edges") {
      c->mirror_attribute_edges = ParseBool(key, value);
    } else {
      throw InputError("unknown config key '" + key + "'");
    }
  }
}

std::map<std::string, std::string> ReadConfigFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string text = Trim(line);
    if (text.empty()) continue;
    const size_t eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(path, line_no, "expected key = value");
    const std::string key = Trim(std::string_view(text).substr(0, eq));
    if (key.empty()) throw ParseError(path, line_no, "empty key");
    out[key] = Trim(std::string_view(text).substr(eq + 1));
  }
  return out;
}

PipelineConfig LoadPipelineConfig(const std::string &path,
                                  const std::map<std::string, std::string> &overrides) {
  PipelineConfig c;
  if (!path.empty()) {
    ApplyConfigValues(ReadConfigFile(path), fs::path(path).parent_path().string(), &c);
  }
  ApplyConfigValues(overrides, "", &c);
  c.Validate();
  return c;
}

const std::vector<std::string> &GraphKinds() {
  static const std::vector<std::string> kinds = [] {
    std::vector<std::string> k = {"basic"};
    for (GeometricRelation r : kAllGeometricRelations) {
      k.emplace_back(GeometricRelationName(r));
    }
    return k;
  }();
  return kinds;
}

std::vector<std::string> TokenizeCaption(const std::string &text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const unsigned char u = static_cast<unsigned char>(ch);
    if (std::isalnum(u) || ch == '\'' || u >= 0x80) {
      cur += static_cast<char>(std::tolower(u));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<SceneGraph> LoadSceneGraphs(const std::string &out_dir) {
  const std::string index_path = (fs::path(out_dir) / "scene_graphs" / "index.json").string();
  RequireArtifact(index_path, "parse");
  const nlohmann::json index = ReadJsonFile(index_path);
  if (!index.contains("captions") || !index["captions"].is_array()) {
    throw InputError(index_path + ": missing captions list");
  }
  std::vector<SceneGraph> out;
  for (const auto &id : index["captions"]) {
    const std::string path =
        (fs::path(out_dir) / "scene_graphs" / (std::to_string(id.get<CaptionId>()) + ".json"))
            .string();
    RequireArtifact(path, "parse");
    try {
      out.push_back(SceneGraphFromJson(ReadJsonFile(path)));
    } catch (const nlohmann::json::exception &e) {
      throw InputError(path + ": " + e.what());
    }
  }
  return out;
}

StageResult RunParse(const PipelineConfig &config) {
  config.Validate();
  RequireFile(config.conllu, "conllu");
  RequireFile(config.captions, "captions");
  const std::vector<DependencyGraph> deps = LoadConllu(config.conllu);
  const CaptionSet captions = LoadCaptions(config.captions);
  const QuantifierLexicon quantifiers = QuantifiersFor(config);
  const SuperClassLexicon super_classes = SuperClassesFor(config);

  std::vector<SceneGraph> graphs;
  std::set<CaptionId> seen;
  for (const DependencyGraph &dep : deps) {
    if (captions.Find(dep.caption_id) == nullptr) {
      throw InputError(config.conllu + ": caption_id " + std::to_string(dep.caption_id) +
                       " is not in " + config.captions);
    }
    if (!seen.insert(dep.caption_id).second) {
      throw InputError(config.conllu + ": caption_id " + std::to_string(dep.caption_id) +
                       " appears twice");
    }
    const ImageId image = captions.ImageOf(dep.caption_id);
    if (dep.image_id != 0 && dep.image_id != image) {
      throw InputError(config.conllu + ": caption " + std::to_string(dep.caption_id) +
                       " has image_id " + std::to_string(dep.image_id) + " but captions say " +
                       std::to_string(image));
    }
    SceneGraph sg = ParseSceneGraph(dep, quantifiers, super_classes);
    sg.caption_id = dep.caption_id;
    sg.image_id = image;
    graphs.push_back(std::move(sg));
  }

  if (config.caption_mode == "richest") {
    std::map<ImageId, std::vector<std::pair<CaptionId, SceneGraph>>> by_image;
    for (SceneGraph &g : graphs) by_image[g.image_id].emplace_back(g.caption_id, g);
    std::vector<SceneGraph> richest;
    for (const auto &[image, list] : by_image) {
      const CaptionId best = SelectRichestCaption(list);
      for (const auto &[id, g] : list) {
        if (id == best) richest.push_back(g);
      }
    }
    graphs = std::move(richest);
  }

  const fs::path dir = fs::path(config.out_dir) / "scene_graphs";
  FreshDir(dir);
  StageResult result;
  nlohmann::json index;
  index["caption_mode"] = config.caption_mode;
  index["captions"] = nlohmann::json::array();
  size_t objects = 0, relations = 0, attributes = 0;
  for (const SceneGraph &g : graphs) {
    const std::string path = (dir / (std::to_string(g.caption_id) + ".json")).string();
    WriteText(path, SceneGraphToJson(g).dump(2) + "\n");
    result.outputs.push_back(path);
    index["captions"].push_back(g.caption_id);
    objects += g.objects.size();
    relations += g.relations.size();
    attributes += g.attributes.size();
  }
  index["objects"] = objects;
  index["relations"] = relations;
  index["attributes"] = attributes;
  const std::string index_path = (dir / "index.json").string();
  WriteText(index_path, index.dump(2) + "\n");
  result.outputs.push_back(index_path);
  result.summary = "parsed " + std::to_string(graphs.size()) + " scene graphs: " +
                   std::to_string(objects) + " objects, " + std::to_string(relations) +
                   " relations, " + std::to_string(attributes) + " attributes";
  return result;
}

StageResult RunBuildGraphs(const PipelineConfig &config) {
  config.Validate();
  const std::vector<SceneGraph> corpus = LoadSceneGraphs(config.out_dir);
  auto vocab = std::make_shared<const Vocabulary>(BuildVocabulary(corpus));
  RelationalGraph basic = ComputeWeights(AccumulateCounts(corpus, vocab));

  std::vector<ObjectBoxes> boxes(corpus.size());
  size_t matched = 0;
  if (!config.instances.empty()) {
    RequireFile(config.instances, "instances");
    const InstanceSet instances = LoadInstances(config.instances);
    const AliasTable aliases =
        config.aliases.empty() ? DefaultAliasTable() : LoadAliasTable(config.aliases);
    for (size_t i = 0; i < corpus.size(); ++i) {
      if (!instances.boxes.contains(corpus[i].image_id)) continue;
      for (const auto &[id, box] :
           MatchObjectsToBoxes(corpus[i], instances, corpus[i].image_id, aliases)) {
        boxes[i][id] = box;
        ++matched;
      }
    }
  }
  auto positional = BuildPositionalGraphs(corpus, vocab, boxes);

  std::vector<const RelationalGraph *> all = {&basic};
  for (const RelationalGraph &g : positional) all.push_back(&g);

  const fs::path dir = fs::path(config.out_dir) / "graphs";
  FreshDir(dir);
  StageResult result;
  nlohmann::json stats;
  stats["vocab"]["nodes"] = vocab->size();
  stats["vocab"]["hash"] = vocab->Hash();
  stats["vocab"]["super_classes"] = vocab->SuperClasses();
  int counts[3] = {0, 0, 0};
  for (const VocabularyNode &n : vocab->nodes()) ++counts[static_cast<int>(n.kind)];
  stats["vocab"]["objects"] = counts[0];
  stats["vocab"]["relations"] = counts[1];
  stats["vocab"]["attributes"] = counts[2];
  stats["matched_objects"] = matched;
  size_t total_edges = 0;
  for (const RelationalGraph *g : all) {
    const WeightSumReport report = CheckWeightSums(*g);
    if (!report.ok()) {
      throw InvariantError(g->KindName() + " graph weights do not sum to one (errors " +
                           FormatDouble(report.max_object_error) + ", " +
                           FormatDouble(report.max_relation_error) + ", " +
                           FormatDouble(report.max_attribute_error) + ")");
    }
    nlohmann::json &s = stats["graphs"][g->KindName()];
    s["edges"] = g->weights.size();
    s["active_nodes"] = g->ActiveNodes().size();
    s["object_families"] = report.object_families;
    s["relation_families"] = report.relation_families;
    s["attribute_families"] = report.attribute_families;
    s["max_sum_error"] = std::max({report.max_object_error, report.max_relation_error,
                                   report.max_attribute_error});
    total_edges += g->weights.size();
    const std::string path = GraphPath(config, g->KindName());
    WriteGraph(*g, path);
    result.outputs.push_back(path);
  }
  const std::string stats_path = (dir / "stats.json").string();
  WriteText(stats_path, stats.dump(2) + "\n");
  result.outputs.push_back(stats_path);
  result.summary = "built 7 graphs over " + std::to_string(vocab->size()) + " nodes, " +
                   std::to_string(total_edges) + " edges, " + std::to_string(matched) +
                   " objects matched to boxes; weight sums ok";
  return result;
}

StageResult RunTrain(const PipelineConfig &config, const std::string &selector) {
  config.Validate();
  std::vector<std::string> kinds;
  if (selector == "all") {
    kinds = GraphKinds();
  } else if (std::find(GraphKinds().begin(), GraphKinds().end(), selector) !=
             GraphKinds().end()) {
    kinds = {selector};
  } else {
    throw InputError("unknown graph '" + selector + "'; expected all, basic or a position");
  }
  fs::create_directories(fs::path(config.out_dir) / "models");
  fs::create_directories(fs::path(config.out_dir) / "embeddings");

  StageResult result;
  std::ostringstream summary;
  for (const std::string &kind : kinds) {
    const RelationalGraph graph = ReadStageGraph(config, kind);
    const Vocabulary &vocab = *graph.vocab;
    const std::vector<std::string> classes = vocab.SuperClasses();
    if (classes.empty()) throw InputError("vocabulary has no object super-classes");
    const bool is_basic = !graph.position.has_value();
    const int hidden = is_basic ? config.basic_width : config.positional_width;

    // The basic graph trains over the whole vocabulary; a positional graph
    // over the nodes it actually connects.
    std::vector<int> nodes;
    if (is_basic) {
      for (int i = 0; i < vocab.size(); ++i) nodes.push_back(i);
    } else {
      nodes = graph.ActiveNodes();
    }
    SparseMatrix a = WeightedAdjacency(graph, config.mirror_attribute_edges);
    if (!is_basic) a = InducedSubmatrix(a, nodes);
    const NormalizedAdjacency adj = SymmetricNormalize(a);

    NodeLabels labels;
    for (size_t i = 0; i < nodes.size(); ++i) {
      const VocabularyNode &n = vocab.node(nodes[i]);
      if (n.kind != NodeKind::kObject) continue;
      labels[static_cast<int>(i)] = static_cast<int>(
          std::lower_bound(classes.begin(), classes.end(), n.super_class) - classes.begin());
    }

    TrainConfig tc;
    tc.learning_rate = config.learning_rate;
    tc.epochs = config.epochs;
    tc.seed = config.seed;
    tc.init_scale = config.init_scale;
    GcnModel model =
        InitGcnModel(static_cast<int>(nodes.size()), hidden, static_cast<int>(classes.size()), tc);
    std::vector<double> history;
    double accuracy = 0.0;
    if (!labels.empty()) {
      TrainResult trained = Train(std::move(model), adj, labels, tc);
      model = std::move(trained.model);
      history = std::move(trained.loss_history);
      accuracy = Accuracy(model, adj, labels);
    }

    EmbeddingTable table;
    table.vocab_hash = vocab.Hash();
    table.vectors = Eigen::MatrixXd::Zero(vocab.size(), hidden);
    if (!nodes.empty()) {
      const EmbeddingTable local = ExtractEmbeddings(model, adj);
      for (size_t i = 0; i < nodes.size(); ++i) {
        table.vectors.row(nodes[i]) = local.vectors.row(static_cast<Eigen::Index>(i));
      }
    }

    const std::string model_path = Path(config, "models", kind + ".vm");
    const std::string loss_path = Path(config, "models", kind + "_loss.csv");
    const std::string emb_path = EmbeddingPath(config, kind);
    WriteModel(model, model_path);
    std::string csv = "epoch,loss\n";
    for (size_t e = 0; e < history.size(); ++e) {
      csv += std::to_string(e) + "," + FormatDouble(history[e], "%.17g") + "\n";
    }
    WriteText(loss_path, csv);
    WriteEmbeddings(table, emb_path);
    result.outputs.insert(result.outputs.end(), {model_path, loss_path, emb_path});

    if (summary.tellp() > 0) summary << "; ";
    summary << kind << ": N=" << nodes.size() << " H=" << hidden;
    if (history.empty()) {
      summary << " (no labeled nodes, zero embeddings)";
    } else {
      summary << " loss " << FormatDouble(history.front(), "%.4f") << "->"
              << FormatDouble(history.back(), "%.4f") << " acc "
              << FormatDouble(accuracy, "%.3f");
    }
  }
  result.summary = "trained " + summary.str();
  return result;
}

StageResult RunCompose(const PipelineConfig &config) {
  config.Validate();
  const Composed composed = LoadComposedTables(config);
  const std::vector<SceneGraph> corpus = LoadSceneGraphs(config.out_dir);
  const int width = composed.tables.visual_semantic_width();

  std::vector<VisualSemanticMatrix> parts;
  Eigen::Index total = 0;
  for (const SceneGraph &g : corpus) {
    parts.push_back(SceneVisualSemantics(g, composed.tables));
    total += parts.back().rows.rows();
  }
  EmbeddingTable evs;
  evs.vocab_hash = composed.vocab->Hash();
  evs.vectors.resize(total, width);
  nlohmann::json manifest;
  manifest["B"] = composed.tables.basic_width;
  manifest["P"] = composed.tables.positional_width;
  manifest["V"] = width;
  manifest["rows"] = total;
  manifest["scene_graphs"] = nlohmann::json::array();
  Eigen::Index offset = 0;
  for (size_t i = 0; i < corpus.size(); ++i) {
    const Eigen::Index n = parts[i].rows.rows();
    if (n > 0) evs.vectors.middleRows(offset, n) = parts[i].rows;
    nlohmann::json entry;
    entry["caption_id"] = corpus[i].caption_id;
    entry["image_id"] = corpus[i].image_id;
    entry["offset"] = offset;
    entry["rows"] = n;
    entry["object_ids"] = parts[i].object_ids;
    manifest["scene_graphs"].push_back(std::move(entry));
    offset += n;
  }

  const fs::path dir = fs::path(config.out_dir) / "composed";
  FreshDir(dir);
  const std::string evs_path = (dir / "evs.emb").string();
  const std::string manifest_path = (dir / "manifest.json").string();
  WriteEmbeddings(evs, evs_path);
  WriteText(manifest_path, manifest.dump(2) + "\n");
  StageResult result;
  result.outputs = {evs_path, manifest_path};
  result.summary = "composed " + std::to_string(total) + " visual semantic rows of width " +
                   std::to_string(width) + " (object/relation width " +
                   std::to_string(composed.tables.object_width()) + ") for " +
                   std::to_string(corpus.size()) + " scene graphs";
  return result;
}

StageResult RunFuse(const PipelineConfig &config) {
  config.Validate();
  const std::string manifest_path = Path(config, "composed", "manifest.json");
  const std::string evs_path = Path(config, "composed", "evs.emb");
  RequireArtifact(manifest_path, "compose");
  RequireArtifact(evs_path, "compose");
  const nlohmann::json manifest = ReadJsonFile(manifest_path);
  const EmbeddingTable evs = ReadEmbeddings(evs_path);
  const int v = manifest.at("V").get<int>();
  if (evs.width() != v && evs.size() > 0) {
    throw InputError(evs_path + ": width " + std::to_string(evs.width()) + " but manifest says " +
                     std::to_string(v));
  }
  const int d = config.text_width;
  const FusionParameters params = config.fusion_weights.empty()
                                      ? InitFusionParameters(d, v, config.seed)
                                      : LoadFusionParameters(config.fusion_weights, d, v);
  std::optional<CaptionSet> captions;
  if (config.text_features.empty()) {
    RequireFile(config.captions, "captions");
    captions = LoadCaptions(config.captions);
  }

  const fs::path dir = fs::path(config.out_dir) / "fused";
  FreshDir(dir);
  StageResult result;
  for (const auto &entry : manifest.at("scene_graphs")) {
    const CaptionId id = entry.at("caption_id").get<CaptionId>();
    const Eigen::Index offset = entry.at("offset").get<Eigen::Index>();
    const Eigen::Index rows = entry.at("rows").get<Eigen::Index>();
    if (offset < 0 || rows < 0 || offset + rows > evs.size()) {
      throw InputError(manifest_path + ": rows of caption " + std::to_string(id) +
                       " fall outside " + evs_path);
    }
    VisualSemanticMatrix vs;
    vs.rows = evs.vectors.middleRows(offset, rows);
    vs.object_ids = entry.at("object_ids").get<std::vector<int>>();

    TextFeatures text;
    if (captions) {
      const Caption *caption = captions->Find(id);
      if (caption == nullptr) {
        throw InputError("caption " + std::to_string(id) + " missing from " + config.captions);
      }
      const std::vector<std::string> tokens = TokenizeCaption(caption->text);
      if (tokens.empty()) throw InputError("caption " + std::to_string(id) + " has no words");
      text = BuiltinTextFeatures(tokens, config.seed, d);
    } else {
      text = LoadTextFeatures(
          (fs::path(config.text_features) / (std::to_string(id) + ".emb")).string(), d);
    }
    const FusedRepresentation fused = Fuse(id, text, vs, params);
    const std::string path = (dir / (std::to_string(id) + ".vf")).string();
    WriteFused(fused, path);
    result.outputs.push_back(path);
  }
  result.summary = "fused " + std::to_string(result.outputs.size()) +
                   " captions: word/sentence width " + std::to_string(d + v) + " (D=" +
                   std::to_string(d) + ", V=" + std::to_string(v) + ")";
  return result;
}

StageResult RunProject(const PipelineConfig &config, const std::string &kind) {
  config.Validate();
  if (kind != "object" && kind != "relation" && kind != "attribute" && kind != "all") {
    throw InputError("unknown projection kind '" + kind +
                     "'; expected object, relation, attribute or all");
  }
  const Composed composed = LoadComposedTables(config);
  std::vector<std::string> words, groups;
  std::vector<Eigen::VectorXd> rows;

  if (kind == "object" || kind == "all") {
    const std::vector<SceneGraph> corpus = LoadSceneGraphs(config.out_dir);
    const WordVectors wv = ObjectWordVectors(corpus, composed.tables);
    for (size_t i = 0; i < wv.words.size(); ++i) {
      words.push_back(wv.words[i]);
      const auto idx = composed.vocab->Find(wv.words[i], NodeKind::kObject);
      groups.push_back(kind == "all"        ? std::string("object")
                       : idx.has_value()    ? composed.vocab->node(*idx).super_class
                                            : std::string("unknown"));
      rows.push_back(wv.vectors.row(static_cast<Eigen::Index>(i)).transpose());
    }
  }
  auto add_table = [&](const std::map<std::string, Eigen::VectorXd> &table, const char *name) {
    for (const auto &[word, vec] : table) {
      words.push_back(word);
      groups.push_back(name);
      rows.push_back(vec);
    }
  };
  if (kind == "relation" || kind == "all") add_table(composed.tables.relations, "relation");
  if (kind == "attribute" || kind == "all") add_table(composed.tables.attributes, "attribute");

  Eigen::Index width = 0;
  for (const auto &r : rows) width = std::max(width, r.size());
  // Narrower kinds are zero-padded in the joint projection.
  Eigen::MatrixXd data = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), width);
  for (size_t i = 0; i < rows.size(); ++i) {
    data.row(static_cast<Eigen::Index>(i)).head(rows[i].size()) = rows[i].transpose();
  }
  const PcaResult pca = PcaProject(data, 2);

  const fs::path dir = fs::path(config.out_dir) / "projection";
  fs::create_directories(dir);
  std::string tsv = "word\tkind\tx\ty\n";
  for (size_t i = 0; i < words.size(); ++i) {
    tsv += words[i] + "\t" + groups[i] + "\t" + FormatDouble(pca.coordinates(i, 0)) + "\t" +
           FormatDouble(pca.coordinates(i, 1)) + "\n";
  }
  const std::string tsv_path = (dir / (kind + ".tsv")).string();
  const std::string svg_path = (dir / (kind + ".svg")).string();
  WriteText(tsv_path, tsv);
  WriteText(svg_path, ScatterSvg(words, groups, pca.coordinates));
  StageResult result;
  result.outputs = {tsv_path, svg_path};
  result.summary = "projected " + std::to_string(words.size()) + " " + kind +
                   " vectors of width " + std::to_string(width) + " to 2-d (eigenvalues " +
                   FormatDouble(pca.eigenvalues(0), "%.4g") + ", " +
                   FormatDouble(pca.eigenvalues(1), "%.4g") + ")" +
                   (kind == "all" ? "; joint zero-padded mode" : "");
  return result;
}

StageResult RunStats(const PipelineConfig &config) {
  config.Validate();
  std::ostringstream out;
  const fs::path root(config.out_dir);
  const fs::path index = root / "scene_graphs" / "index.json";
  if (fs::exists(index)) {
    const nlohmann::json j = ReadJsonFile(index.string());
    out << "scene graphs: " << j["captions"].size() << " (" << j.value("caption_mode", "?")
        << "), objects " << j.value("objects", 0) << ", relations " << j.value("relations", 0)
        << ", attributes " << j.value("attributes", 0) << "\n";
  } else {
    out << "scene graphs: none\n";
  }
  for (const std::string &kind : GraphKinds()) {
    const std::string gpath = GraphPath(config, kind);
    if (!fs::exists(gpath)) continue;
    const RelationalGraph g = ReadGraph(gpath);
    out << "graph " << kind << ": " << g.vocab->size() << " nodes, " << g.weights.size()
        << " edges, " << g.ActiveNodes().size() << " active";
    const std::string epath = EmbeddingPath(config, kind);
    if (fs::exists(epath)) {
      const EmbeddingTable t = ReadEmbeddings(epath);
      out << ", embeddings " << t.size() << "x" << t.width();
    }
    out << "\n";
  }
  const fs::path manifest = root / "composed" / "manifest.json";
  if (fs::exists(manifest)) {
    const nlohmann::json j = ReadJsonFile(manifest.string());
    out << "composed: " << j.value("rows", 0) << " rows of width " << j.value("V", 0) << "\n";
  }
  if (fs::exists(root / "fused")) {
    size_t n = 0;
    for (const auto &e : fs::directory_iterator(root / "fused")) {
      if (e.path().extension() == ".vf") ++n;
    }
    out << "fused: " << n << " captions\n";
  }
  StageResult result;
  result.summary = out.str();
  if (!result.summary.empty() && result.summary.back() == '\n') result.summary.pop_back();
  return result;
}

}  // namespace victr
