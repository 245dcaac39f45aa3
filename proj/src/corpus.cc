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

#include "victr/corpus.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <set>

#include "victr/binary_io.h"
#include "victr/error.h"

namespace victr {

using nlohmann::json;

namespace {

std::string ToLower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

template <typename T>
std::optional<T> ParseInteger(std::string_view s) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Accumulates one sentence block while scanning.
struct PendingSentence {
  size_t first_line = 0;
  std::optional<CaptionId> caption_id;
  std::optional<ImageId> image_id;
  std::vector<Token> tokens;
  std::vector<size_t> token_lines;

  bool empty() const { return tokens.empty() && !caption_id && !image_id; }
};

DependencyGraph FinishSentence(PendingSentence &s, const std::string &source) {
  if (s.tokens.empty()) {
    throw ParseError(source, s.first_line, "sentence block without tokens");
  }
  if (!s.caption_id) {
    throw ParseError(source, s.first_line, "missing '# caption_id = <id>' comment");
  }
  if (!s.image_id) {
    throw ParseError(source, s.first_line, "missing '# image_id = <id>' comment");
  }
  const int n = static_cast<int>(s.tokens.size());
  bool has_root = false;
  for (size_t i = 0; i < s.tokens.size(); ++i) {
    const Token &t = s.tokens[i];
    if (t.head < 0 || t.head > n) {
      throw ParseError(source, s.token_lines[i],
                       "head " + std::to_string(t.head) + " out of range for " +
                           std::to_string(n) + "-token sentence");
    }
    if (t.head == t.index) {
      throw ParseError(source, s.token_lines[i], "token is its own head");
    }
    has_root |= t.head == 0;
  }
  if (!has_root) throw ParseError(source, s.first_line, "sentence has no root token");

  DependencyGraph g;
  g.caption_id = *s.caption_id;
  g.image_id = *s.image_id;
  g.tokens = std::move(s.tokens);
  s = PendingSentence();
  return g;
}

}  // namespace

std::string Token::NormalizedLemma() const {
  if (lemma.empty() || lemma == "_") return ToLower(surface);
  return ToLower(lemma);
}

std::string_view Token::BaseDeprel() const {
  std::string_view d = deprel;
  return d.substr(0, d.find(':'));
}

void ValidateDependencyGraph(const DependencyGraph &graph) {
  const std::string where = "dependency graph " + std::to_string(graph.caption_id);
  const int n = graph.size();
  bool has_root = false;
  for (int i = 0; i < n; ++i) {
    const Token &t = graph.tokens[i];
    if (t.index != i + 1) throw InputError(where + ": token indices not contiguous");
    if (t.head < 0 || t.head > n) throw InputError(where + ": head out of range");
    if (t.head == t.index) throw InputError(where + ": token is its own head");
    if (t.deprel.empty()) throw InputError(where + ": empty deprel");
    has_root |= t.head == 0;
  }
  if (n > 0 && !has_root) throw InputError(where + ": no root token");
}

std::vector<DependencyGraph> ParseConllu(std::string_view text,
                                         const std::string &source) {
  std::vector<DependencyGraph> graphs;
  PendingSentence pending;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (Trim(line).empty()) {
      if (!pending.empty()) graphs.push_back(FinishSentence(pending, source));
      if (end == text.size()) break;
      continue;
    }
    if (pending.empty()) pending.first_line = line_no;

    if (line.front() == '#') {
      std::string_view body = Trim(line.substr(1));
      size_t eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      std::string_view key = Trim(body.substr(0, eq));
      std::string_view value = Trim(body.substr(eq + 1));
      if (key == "caption_id" || key == "image_id") {
        auto id = ParseInteger<int64_t>(value);
        if (!id) {
          throw ParseError(source, line_no, "malformed " + std::string(key) + " '" +
                                                std::string(value) + "'");
        }
        (key == "caption_id" ? pending.caption_id : pending.image_id) = *id;
      }
      continue;
    }

    std::vector<std::string_view> f = SplitTabs(line);
    if (f.size() != 10) {
      throw ParseError(source, line_no,
                       "expected 10 tab-separated columns, found " + std::to_string(f.size()));
    }
    if (f[0].find_first_of("-.") != std::string_view::npos) continue;

    auto index = ParseInteger<int>(f[0]);
    if (!index || *index != static_cast<int>(pending.tokens.size()) + 1) {
      throw ParseError(source, line_no, "token index '" + std::string(f[0]) +
                                            "' is not the next index in sequence");
    }
    auto head = ParseInteger<int>(f[6]);
    if (!head) {
      throw ParseError(source, line_no, "malformed head '" + std::string(f[6]) + "'");
    }
    if (f[7].empty() || f[7] == "_") throw ParseError(source, line_no, "missing deprel");

    Token t;
    t.index = *index;
    t.surface = f[1];
    t.lemma = f[2];
    t.upos = f[3];
    t.xpos = f[4];
    t.feats = f[5];
    t.head = *head;
    t.deprel = f[7];
    t.misc = f[9];
    pending.tokens.push_back(std::move(t));
    pending.token_lines.push_back(line_no);
    if (end == text.size()) break;
  }
  if (!pending.empty()) graphs.push_back(FinishSentence(pending, source));
  return graphs;
}

std::vector<DependencyGraph> LoadConllu(const std::string &path) {
  return ParseConllu(ReadFileBytes(path), path);
}

std::string FormatConllu(std::span<const DependencyGraph> graphs) {
  std::string out;
  for (const DependencyGraph &g : graphs) {
    out += "# caption_id = " + std::to_string(g.caption_id) + "\n";
    out += "# image_id = " + std::to_string(g.image_id) + "\n";
    for (const Token &t : g.tokens) {
      out += std::to_string(t.index) + '\t' + t.surface + '\t' + t.lemma + '\t' + t.upos +
             '\t' + t.xpos + '\t' + t.feats + '\t' + std::to_string(t.head) + '\t' +
             t.deprel + "\t_\t" + t.misc + '\n';
    }
    out += '\n';
  }
  return out;
}

size_t CaptionSet::num_captions() const {
  size_t n = 0;
  for (const auto &[image, list] : captions) n += list.size();
  return n;
}

const Caption *CaptionSet::Find(CaptionId id) const {
  for (const auto &[image, list] : captions) {
    for (const Caption &c : list) {
      if (c.id == id) return &c;
    }
  }
  return nullptr;
}

ImageId CaptionSet::ImageOf(CaptionId id) const {
  for (const auto &[image, list] : captions) {
    for (const Caption &c : list) {
      if (c.id == id) return image;
    }
  }
  return -1;
}

CaptionSet CaptionsFromJson(const json &j, const std::string &source) {
  if (!j.is_object() || !j.contains("annotations") || !j["annotations"].is_array()) {
    throw InputError(source + ": expected an object with an 'annotations' array");
  }
  CaptionSet set;
  std::set<CaptionId> seen;
  const json &annotations = j["annotations"];
  for (size_t i = 0; i < annotations.size(); ++i) {
    const json &a = annotations[i];
    const std::string where = source + ": annotations[" + std::to_string(i) + "]";
    for (const char *field : {"image_id", "id", "caption"}) {
      if (!a.is_object() || !a.contains(field)) {
        throw InputError(where + ": missing field '" + field + "'");
      }
    }
    Caption c;
    ImageId image = 0;
    try {
      image = a["image_id"].get<ImageId>();
      c.id = a["id"].get<CaptionId>();
      c.text = a["caption"].get<std::string>();
    } catch (const json::exception &e) {
      throw InputError(where + ": " + e.what());
    }
    if (!seen.insert(c.id).second) {
      throw InputError(where + ": duplicate caption id " + std::to_string(c.id));
    }
    set.captions[image].push_back(std::move(c));
  }
  return set;
}

CaptionSet LoadCaptions(const std::string &path) {
  json j;
  try {
    j = json::parse(ReadFileBytes(path));
  } catch (const json::exception &e) {
    throw InputError(path + ": " + e.what());
  }
  return CaptionsFromJson(j, path);
}

InstanceSet InstancesFromJson(const json &j, const std::string &source) {
  if (!j.is_object() || !j.contains("annotations") || !j.contains("categories")) {
    throw InputError(source + ": expected 'annotations' and 'categories'");
  }
  InstanceSet set;
  std::map<int64_t, std::string> names;
  const json &categories = j["categories"];
  for (size_t i = 0; i < categories.size(); ++i) {
    const json &c = categories[i];
    const std::string where = source + ": categories[" + std::to_string(i) + "]";
    try {
      const int64_t id = c.at("id").get<int64_t>();
      const std::string name = c.at("name").get<std::string>();
      const std::string super_class = c.at("supercategory").get<std::string>();
      auto [it, inserted] = set.categories.emplace(name, super_class);
      if (!inserted && it->second != super_class) {
        throw InputError(where + ": category '" + name +
                         "' mapped to two super-classes");
      }
      names[id] = name;
    } catch (const json::exception &e) {
      throw InputError(where + ": " + e.what());
    }
  }
  const json &annotations = j["annotations"];
  for (size_t i = 0; i < annotations.size(); ++i) {
    const json &a = annotations[i];
    const std::string where = source + ": annotations[" + std::to_string(i) + "]";
    Instance inst;
    ImageId image = 0;
    int64_t category_id = 0;
    try {
      image = a.at("image_id").get<ImageId>();
      category_id = a.at("category_id").get<int64_t>();
      const json &bbox = a.at("bbox");
      if (!bbox.is_array() || bbox.size() != 4) {
        throw InputError(where + ": bbox must be [x, y, w, h]");
      }
      inst.box = {bbox[0].get<double>(), bbox[1].get<double>(), bbox[2].get<double>(),
                  bbox[3].get<double>()};
    } catch (const json::exception &e) {
      throw InputError(where + ": " + e.what());
    }
    auto it = names.find(category_id);
    if (it == names.end()) {
      throw InputError(where + ": unknown category_id " + std::to_string(category_id));
    }
    if (!inst.box.valid()) {
      throw InputError(where + ": bbox width and height must be positive");
    }
    inst.category = it->second;
    inst.super_class = set.categories.at(it->second);
    set.boxes[image].push_back(std::move(inst));
  }
  return set;
}

InstanceSet LoadInstances(const std::string &path) {
  json j;
  try {
    j = json::parse(ReadFileBytes(path));
  } catch (const json::exception &e) {
    throw InputError(path + ": " + e.what());
  }
  return InstancesFromJson(j, path);
}

CaptionId SelectRichestCaption(
    std::span<const std::pair<CaptionId, SceneGraph>> captions) {
  if (captions.empty()) throw InputError("SelectRichestCaption: no captions");
  const std::pair<CaptionId, SceneGraph> *best = &captions.front();
  for (const auto &candidate : captions) {
    const size_t score = candidate.second.Richness();
    const size_t best_score = best->second.Richness();
    if (score > best_score || (score == best_score && candidate.first < best->first)) {
      best = &candidate;
    }
  }
  return best->first;
}

}  // namespace victr
