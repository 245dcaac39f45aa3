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

#include "victr/scene_parser.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>
#include <vector>

#include "victr/error.h"

namespace victr {
namespace {

std::string ToLower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> SplitSpaces(const std::string &s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

std::optional<int> ParsePositive(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value < 1) return std::nullopt;
  return value;
}

bool IsNoun(const Token &t) { return t.upos == "NOUN" || t.upos == "PROPN"; }

bool IsPlural(const Token &t) {
  if (t.feats.find("Number=Plur") != std::string::npos) return true;
  if (t.feats.find("Number=Sing") != std::string::npos) return false;
  if (t.xpos == "NNS" || t.xpos == "NNPS") return true;
  const std::string surface = ToLower(t.surface);
  return surface != t.NormalizedLemma() && !surface.empty() && surface.back() == 's';
}

// Reads "CopyOf=<index>" from a MISC column; 0 when absent.
int CopyOf(const Token &t) {
  static constexpr std::string_view kKey = "CopyOf=";
  size_t pos = t.misc.find(kKey);
  if (pos == std::string::npos) return 0;
  size_t end = t.misc.find('|', pos);
  std::string_view value = std::string_view(t.misc).substr(
      pos + kKey.size(), end == std::string::npos ? std::string::npos
                                                  : end - pos - kKey.size());
  return ParsePositive(value).value_or(0);
}

std::string WithCopyOf(const std::string &misc, int index) {
  std::vector<std::string> parts;
  if (misc != "_" && !misc.empty()) {
    std::string_view rest = misc;
    while (true) {
      size_t bar = rest.find('|');
      std::string_view part = rest.substr(0, bar);
      if (!part.starts_with("CopyOf=")) parts.emplace_back(part);
      if (bar == std::string_view::npos) break;
      rest.remove_prefix(bar + 1);
    }
  }
  if (index > 0) parts.push_back("CopyOf=" + std::to_string(index));
  if (parts.empty()) return "_";
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += '|';
    out += parts[i];
  }
  return out;
}

std::vector<std::vector<int>> ChildLists(const DependencyGraph &g) {
  std::vector<std::vector<int>> children(g.size() + 1);
  for (const Token &t : g.tokens) children[t.head].push_back(t.index);
  return children;
}

struct Phrase {
  int begin;   // first token
  int end;     // one past the last token
  int target;  // quantified noun
};

}  // namespace

QuantifierLexicon DefaultQuantifierLexicon() {
  QuantifierLexicon lex;
  const char *numerals[] = {"one",     "two",     "three",     "four",     "five",
                            "six",     "seven",   "eight",     "nine",     "ten",
                            "eleven",  "twelve",  "thirteen",  "fourteen", "fifteen",
                            "sixteen", "seventeen", "eighteen", "nineteen", "twenty"};
  for (int i = 0; i < 20; ++i) lex.numeral_map[numerals[i]] = i + 1;
  lex.numeral_map["dozen"] = 12;

  const int many = QuantifierLexicon::kMany;
  lex.phrase_map = {
      {"a couple of", 2}, {"a pair of", 2},    {"both of", 2},      {"both", 2},
      {"a dozen of", 12}, {"a dozen", 12},     {"dozens of", many}, {"a lot of", many},
      {"lots of", many},  {"a few", many},     {"several", many},   {"many", many},
      {"a group of", many}, {"a flock of", many}, {"a herd of", many},
      {"a bunch of", many}, {"a number of", many}, {"hundreds of", many},
  };
  return lex;
}

QuantifierLexicon LoadQuantifierLexicon(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  QuantifierLexicon lex;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(path, line_no, "expected word<TAB>value");
    const std::string key = ToLower(line.substr(0, tab));
    const std::string value = line.substr(tab + 1);
    const std::vector<std::string> words = SplitSpaces(key);
    if (words.empty()) throw ParseError(path, line_no, "empty quantifier");
    std::string normalized;
    for (const std::string &w : words) normalized += (normalized.empty() ? "" : " ") + w;
    if (value == "MANY") {
      lex.phrase_map[normalized] = QuantifierLexicon::kMany;
      continue;
    }
    auto n = ParsePositive(value);
    if (!n) throw ParseError(path, line_no, "value must be a positive integer or MANY");
    (words.size() > 1 ? lex.phrase_map : lex.numeral_map)[normalized] = *n;
  }
  return lex;
}

const std::string &SuperClassLexicon::Lookup(const std::string &lemma) const {
  auto it = entries.find(ToLower(lemma));
  return it == entries.end() ? fallback : it->second;
}

SuperClassLexicon DefaultSuperClassLexicon() {
  static const std::pair<const char *, std::vector<const char *>> kTable[] = {
      {"person", {"person", "man", "woman", "boy", "girl", "child", "kid", "people",
                  "player", "guy", "lady", "baby", "skier", "surfer", "skateboarder",
                  "rider", "chef", "adult"}},
      {"vehicle", {"bicycle", "car", "motorcycle", "airplane", "bus", "train", "truck",
                   "boat", "bike", "plane", "jet", "motorbike", "ship", "van", "taxi"}},
      {"outdoor", {"traffic light", "fire hydrant", "stop sign", "parking meter", "bench",
                   "hydrant"}},
      {"animal", {"bird", "cat", "dog", "horse", "sheep", "cow", "elephant", "bear",
                  "zebra", "giraffe", "puppy", "kitten", "pony", "duck", "calf"}},
      {"accessory", {"backpack", "umbrella", "handbag", "tie", "suitcase", "purse", "bag"}},
      {"sports", {"frisbee", "skis", "snowboard", "sports ball", "kite", "baseball bat",
                  "baseball glove", "skateboard", "surfboard", "tennis racket", "ball",
                  "bat", "racket", "glove", "ski"}},
      {"kitchen", {"bottle", "wine glass", "cup", "fork", "knife", "spoon", "bowl", "glass",
                   "mug", "plate"}},
      {"food", {"banana", "apple", "sandwich", "orange", "broccoli", "carrot", "hot dog",
                "pizza", "donut", "cake", "egg", "doughnut", "bread"}},
      {"furniture", {"chair", "couch", "potted plant", "bed", "dining table", "toilet",
                     "table", "sofa", "plant", "desk"}},
      {"electronic", {"tv", "laptop", "mouse", "remote", "keyboard", "cell phone", "phone",
                      "television", "computer", "monitor"}},
      {"appliance", {"microwave", "oven", "toaster", "sink", "refrigerator", "fridge"}},
      {"indoor", {"book", "clock", "vase", "scissors", "teddy bear", "hair drier",
                  "toothbrush"}},
  };
  SuperClassLexicon lex;
  for (const auto &[super_class, words] : kTable) {
    for (const char *w : words) lex.entries.emplace(w, super_class);
  }
  return lex;
}

SuperClassLexicon LoadSuperClassLexicon(const std::string &path,
                                        const std::string &fallback) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  SuperClassLexicon lex;
  lex.fallback = fallback;
  if (lex.fallback.empty()) throw InputError("super-class fallback must be nonempty");
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab + 1 == line.size()) {
      throw ParseError(path, line_no, "expected lemma<TAB>super_class");
    }
    lex.entries[ToLower(line.substr(0, tab))] = line.substr(tab + 1);
  }
  return lex;
}

DependencyGraph ExpandQuantifiers(const DependencyGraph &graph,
                                  const QuantifierLexicon &lexicon) {
  const int n = graph.size();
  const auto children = ChildLists(graph);
  std::vector<std::string> lower(n + 1);
  for (const Token &t : graph.tokens) lower[t.index] = ToLower(t.surface);

  std::vector<bool> removed(n + 1, false);
  std::vector<int> count(n + 1, 0);
  std::vector<int> phrase_of(n + 1, -1);
  std::vector<Phrase> phrases;

  // Quantifier phrases, longest match first, left to right.
  std::vector<std::pair<std::vector<std::string>, int>> patterns;
  for (const auto &[phrase, value] : lexicon.phrase_map) {
    patterns.emplace_back(SplitSpaces(phrase), value);
  }
  std::stable_sort(patterns.begin(), patterns.end(), [](const auto &a, const auto &b) {
    return a.first.size() > b.first.size();
  });
  for (int i = 1; i <= n;) {
    const std::pair<std::vector<std::string>, int> *match = nullptr;
    for (const auto &p : patterns) {
      const int m = static_cast<int>(p.first.size());
      if (m == 0 || i + m - 1 > n) continue;
      bool ok = true;
      for (int k = 0; k < m && ok; ++k) ok = lower[i + k] == p.first[k];
      if (ok) {
        match = &p;
        break;
      }
    }
    if (match == nullptr) {
      ++i;
      continue;
    }
    const int m = static_cast<int>(match->first.size());
    int target = i + m;
    while (target <= n && (graph.token(target).upos == "DET" ||
                           graph.token(target).upos == "ADJ")) {
      ++target;
    }
    if (target > n || !IsNoun(graph.token(target)) || count[target] != 0) {
      ++i;
      continue;
    }
    phrases.push_back({i, i + m, target});
    for (int k = i; k < i + m; ++k) {
      removed[k] = true;
      phrase_of[k] = static_cast<int>(phrases.size()) - 1;
    }
    count[target] = lexicon.Resolve(match->second);
    i += m;
  }

  // Numeric modifiers.
  for (const Token &t : graph.tokens) {
    if (!IsNoun(t) || removed[t.index]) continue;
    for (int c : children[t.index]) {
      const Token &mod = graph.token(c);
      if (mod.BaseDeprel() != "nummod" || removed[c]) continue;
      std::optional<int> value;
      if (auto it = lexicon.numeral_map.find(lower[c]); it != lexicon.numeral_map.end()) {
        value = it->second;
      } else if (auto it = lexicon.numeral_map.find(mod.NormalizedLemma());
                 it != lexicon.numeral_map.end()) {
        value = it->second;
      } else {
        value = ParsePositive(mod.surface);
      }
      if (!value) continue;
      removed[c] = true;
      if (count[t.index] == 0) count[t.index] = *value;
    }
  }

  // A plural direct object without its own quantifier follows the count of
  // its verb's subject.
  std::vector<int> inherited(n + 1, 0);
  for (const Token &t : graph.tokens) {
    if (!IsNoun(t) || removed[t.index] || count[t.index] != 0) continue;
    if (t.BaseDeprel() != "obj" || !IsPlural(t) || t.head == 0) continue;
    const Token &verb = graph.token(t.head);
    std::vector<int> subjects;
    for (int c : children[verb.index]) {
      if (graph.token(c).BaseDeprel() == "nsubj" && IsNoun(graph.token(c))) {
        subjects.push_back(c);
      }
    }
    if (subjects.empty() && verb.BaseDeprel() == "acl" && verb.head != 0 &&
        IsNoun(graph.token(verb.head))) {
      subjects.push_back(verb.head);
    }
    for (int s : subjects) {
      if (count[s] > 1) {
        inherited[t.index] = count[s];
        break;
      }
    }
  }
  for (int i = 1; i <= n; ++i) {
    if (inherited[i]) count[i] = inherited[i];
  }

  // Attribute dependents travel with their noun: amod adjectives and the
  // adjectives coordinated with them.
  auto attribute_block = [&](int noun) {
    std::vector<int> block = {noun};
    std::vector<int> frontier;
    for (int c : children[noun]) {
      const Token &d = graph.token(c);
      if (!removed[c] && d.upos == "ADJ" && d.BaseDeprel() == "amod") frontier.push_back(c);
    }
    while (!frontier.empty()) {
      int a = frontier.back();
      frontier.pop_back();
      block.push_back(a);
      for (int c : children[a]) {
        const Token &d = graph.token(c);
        if (!removed[c] && d.upos == "ADJ" && d.BaseDeprel() == "conj") frontier.push_back(c);
      }
    }
    std::sort(block.begin(), block.end());
    return block;
  };

  struct Slot {
    int orig;
    int copy;   // 0 for the original token
    int noun;   // replicated noun this slot belongs to (copies only)
  };
  std::vector<Slot> slots;
  std::vector<int> new_index(n + 1, 0);
  std::map<std::pair<int, int>, int> copy_index;
  for (int i = 1; i <= n; ++i) {
    if (removed[i]) continue;
    slots.push_back({i, 0, 0});
    new_index[i] = static_cast<int>(slots.size());
    const int copies = std::min(count[i], lexicon.max_duplication);
    if (!IsNoun(graph.token(i)) || copies < 2) continue;
    const std::vector<int> block = attribute_block(i);
    for (int r = 1; r < copies; ++r) {
      for (int b : block) {
        slots.push_back({b, r, i});
        copy_index[{b, r}] = static_cast<int>(slots.size());
      }
    }
  }

  // Head of a surviving token in original indices, skipping consumed
  // quantifier tokens. A phrase target takes over the attachment of its
  // phrase; other dependents of phrase tokens move onto the target.
  auto resolve = [&](int u, std::string &deprel) {
    int h = graph.token(u).head;
    deprel = graph.token(u).deprel;
    while (h != 0 && removed[h]) {
      if (phrase_of[h] >= 0) {
        const Phrase &p = phrases[phrase_of[h]];
        if (u != p.target) return p.target;
        int top = p.begin;
        for (int k = p.begin; k < p.end; ++k) {
          const int kh = graph.token(k).head;
          if (kh < p.begin || kh >= p.end) {
            top = k;
            break;
          }
        }
        deprel = graph.token(top).deprel;
        h = graph.token(top).head;
      } else {
        h = graph.token(h).head;
      }
    }
    return h;
  };

  DependencyGraph out;
  out.caption_id = graph.caption_id;
  out.image_id = graph.image_id;
  out.tokens.reserve(slots.size());
  for (size_t s = 0; s < slots.size(); ++s) {
    const Slot &slot = slots[s];
    Token t = graph.token(slot.orig);
    t.index = static_cast<int>(s) + 1;
    std::string deprel;
    const int head = resolve(slot.orig, deprel);
    t.deprel = deprel;
    if (slot.copy == 0 || slot.orig == slot.noun) {
      t.head = head == 0 ? 0 : new_index[head];
    } else {
      t.head = copy_index.at({head, slot.copy});
    }
    const int original_copy = CopyOf(t);
    if (slot.copy > 0) {
      t.misc = WithCopyOf(t.misc, new_index[slot.orig]);
    } else if (original_copy > 0) {
      t.misc = WithCopyOf(t.misc, original_copy <= n ? new_index[original_copy] : 0);
    }
    out.tokens.push_back(std::move(t));
  }
  ValidateDependencyGraph(out);
  return out;
}

namespace {

// Read-only view over an expanded dependency graph used by the extraction
// rules.
class ExtractionView {
 public:
  explicit ExtractionView(const DependencyGraph &g) : g_(g), children_(ChildLists(g)) {
    origin_.resize(g.size() + 1);
    for (const Token &t : g.tokens) {
      const int c = CopyOf(t);
      origin_[t.index] = (c > 0 && c <= g.size()) ? c : t.index;
    }
  }

  const Token &token(int i) const { return g_.token(i); }
  int origin(int i) const { return origin_[i]; }

  // Own dependents plus, for a replica, the non-attribute dependents of the
  // token it was copied from.
  std::vector<int> Children(int i) const {
    std::vector<int> out = children_[i];
    if (origin_[i] != i) {
      for (int c : children_[origin_[i]]) {
        const Token &d = token(c);
        if (d.upos == "ADJ" && d.BaseDeprel() == "amod") continue;
        out.push_back(c);
      }
      std::sort(out.begin(), out.end());
    }
    return out;
  }

  std::vector<int> ChildrenWith(int i, std::string_view base) const {
    std::vector<int> out;
    for (int c : Children(i)) {
      if (token(c).BaseDeprel() == base) out.push_back(c);
    }
    return out;
  }

  // The token plus all nouns coordinated with it.
  std::vector<int> WithConjuncts(int noun) const {
    std::vector<int> out = {noun};
    for (size_t k = 0; k < out.size(); ++k) {
      for (int c : ChildrenWith(out[k], "conj")) {
        if (IsNoun(token(c))) out.push_back(c);
      }
    }
    return out;
  }

  // Every token sharing the origin of `i`.
  std::vector<int> ReplicaGroup(int i) const {
    std::vector<int> out;
    for (const Token &t : g_.tokens) {
      if (origin_[t.index] == origin_[i]) out.push_back(t.index);
    }
    return out;
  }

  // Preposition introducing `i` ("on", "next to"), or "" if none. The
  // head of a multiword marker may be tagged ADV or ADJ ("next"); the
  // possessive PART is not a marker.
  std::string CaseMarker(int i) const {
    for (int c : Children(i)) {
      const Token &d = token(c);
      if (d.BaseDeprel() != "case" || d.upos == "PART") continue;
      std::string marker = d.NormalizedLemma();
      for (int f : ChildrenWith(c, "fixed")) marker += " " + token(f).NormalizedLemma();
      return marker;
    }
    return "";
  }

  std::vector<int> Subjects(int verb, int depth = 0) const {
    std::vector<int> out;
    for (int c : ChildrenWith(verb, "nsubj")) {
      if (IsNoun(token(c))) {
        for (int s : WithConjuncts(c)) out.push_back(s);
      }
    }
    const Token &v = token(verb);
    if (out.empty() && v.head != 0 && depth < 8) {
      const Token &head = token(v.head);
      if (v.BaseDeprel() == "acl" && IsNoun(head)) {
        out = ReplicaGroup(head.index);
      } else if (v.BaseDeprel() == "conj" && head.upos == "VERB") {
        out = Subjects(head.index, depth + 1);
      }
    }
    return out;
  }

 private:
  const DependencyGraph &g_;
  std::vector<std::vector<int>> children_;
  std::vector<int> origin_;
};

struct Candidate {
  int subject;
  std::string predicate;
  int object;
};

}  // namespace

SceneGraph ExtractSceneGraph(const DependencyGraph &graph) {
  ExtractionView view(graph);
  SceneGraph sg;
  sg.caption_id = graph.caption_id;
  sg.image_id = graph.image_id;

  std::vector<int> object_id(graph.size() + 1, -1);
  for (const Token &t : graph.tokens) {
    if (!IsNoun(t)) continue;
    object_id[t.index] = static_cast<int>(sg.objects.size());
    sg.objects.push_back({object_id[t.index], t.NormalizedLemma(), ""});
  }

  // Attributes.
  std::set<std::pair<int, std::string>> seen_attributes;
  auto add_attribute = [&](int noun, int adjective) {
    const int id = object_id[noun];
    std::string word = graph.token(adjective).NormalizedLemma();
    if (id >= 0 && seen_attributes.emplace(id, word).second) {
      sg.attributes.push_back({id, std::move(word)});
    }
  };
  auto with_adjective_conjuncts = [&](int adjective) {
    std::vector<int> out = {adjective};
    for (size_t k = 0; k < out.size(); ++k) {
      for (int c : view.ChildrenWith(out[k], "conj")) {
        if (graph.token(c).upos == "ADJ") out.push_back(c);
      }
    }
    return out;
  };
  for (const Token &t : graph.tokens) {
    if (IsNoun(t)) {
      for (int c : view.ChildrenWith(t.index, "amod")) {
        if (graph.token(c).upos != "ADJ") continue;
        for (int a : with_adjective_conjuncts(c)) add_attribute(t.index, a);
      }
    } else if (t.upos == "ADJ" && !view.ChildrenWith(t.index, "cop").empty()) {
      for (int s : view.ChildrenWith(t.index, "nsubj")) {
        if (!IsNoun(graph.token(s))) continue;
        for (int noun : view.WithConjuncts(s)) {
          for (int a : with_adjective_conjuncts(t.index)) add_attribute(noun, a);
        }
      }
    }
  }
  std::stable_sort(sg.attributes.begin(), sg.attributes.end(),
                   [](const SceneAttribute &a, const SceneAttribute &b) {
                     return a.object_id < b.object_id;
                   });

  // Relation candidates.
  std::vector<Candidate> candidates;
  auto propose = [&](const std::vector<int> &subjects, const std::string &predicate,
                     const std::vector<int> &objects) {
    for (int s : subjects) {
      for (int o : objects) {
        if (s != o && object_id[s] >= 0 && object_id[o] >= 0) {
          candidates.push_back({s, predicate, o});
        }
      }
    }
  };
  for (const Token &t : graph.tokens) {
    if (t.upos == "VERB") {
      const std::vector<int> subjects = view.Subjects(t.index);
      if (subjects.empty()) continue;
      const std::string verb = t.NormalizedLemma();
      for (int c : view.Children(t.index)) {
        const Token &d = graph.token(c);
        if (!IsNoun(d)) continue;
        const std::string_view rel = d.BaseDeprel();
        if (rel == "obj" || rel == "iobj") {
          propose(subjects, verb, view.WithConjuncts(c));
        } else if (rel == "obl") {
          const std::string marker = view.CaseMarker(c);
          if (marker.empty()) continue;
          for (int o : view.WithConjuncts(c)) {
            const std::string own = view.CaseMarker(o);
            propose(subjects, verb + " " + (own.empty() ? marker : own), {o});
          }
        }
      }
    } else if (IsNoun(t)) {
      for (int c : view.Children(t.index)) {
        const Token &d = graph.token(c);
        if (!IsNoun(d) || d.BaseDeprel() != "nmod" || d.deprel == "nmod:poss") continue;
        const std::string marker = view.CaseMarker(c);
        if (marker.empty()) continue;
        for (int o : view.WithConjuncts(c)) {
          const std::string own = view.CaseMarker(o);
          propose({t.index}, own.empty() ? marker : own, {o});
        }
      }
      // Copular predicate nominal: "the cat is on the table".
      if (!view.ChildrenWith(t.index, "cop").empty()) {
        const std::string marker = view.CaseMarker(t.index);
        if (marker.empty()) continue;
        for (int s : view.ChildrenWith(t.index, "nsubj")) {
          if (IsNoun(graph.token(s))) propose(view.WithConjuncts(s), marker, {t.index});
        }
      }
    }
  }

  // Replica groups that face each other with equal sizes pair up one to
  // one ("two men riding two horses"); anything else keeps every pairing.
  std::vector<std::tuple<int, std::string, int>> group_order;
  std::map<std::tuple<int, std::string, int>, std::vector<std::pair<int, int>>> groups;
  for (const Candidate &c : candidates) {
    auto key = std::make_tuple(view.origin(c.subject), c.predicate, view.origin(c.object));
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) group_order.push_back(key);
    it->second.emplace_back(c.subject, c.object);
  }
  std::set<std::tuple<int, std::string, int>> seen_relations;
  for (const auto &key : group_order) {
    std::vector<std::pair<int, int>> pairs = groups[key];
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    std::set<int> subjects, objects;
    for (auto [s, o] : pairs) {
      subjects.insert(s);
      objects.insert(o);
    }
    if (subjects.size() > 1 && subjects.size() == objects.size() &&
        pairs.size() == subjects.size() * objects.size()) {
      pairs.clear();
      for (auto s = subjects.begin(), o = objects.begin(); s != subjects.end(); ++s, ++o) {
        pairs.emplace_back(*s, *o);
      }
    }
    const std::string &predicate = std::get<1>(key);
    for (auto [s, o] : pairs) {
      if (s == o) continue;
      if (seen_relations.emplace(object_id[s], predicate, object_id[o]).second) {
        sg.relations.push_back({object_id[s], predicate, object_id[o]});
      }
    }
  }
  return sg;
}

SceneGraph AssignSuperClasses(SceneGraph graph, const SuperClassLexicon &lexicon) {
  for (SceneObject &o : graph.objects) o.super_class = lexicon.Lookup(o.word);
  return graph;
}

SceneGraph ParseSceneGraph(const DependencyGraph &graph,
                           const QuantifierLexicon &quantifiers,
                           const SuperClassLexicon &super_classes) {
  return AssignSuperClasses(ExtractSceneGraph(ExpandQuantifiers(graph, quantifiers)),
                            super_classes);
}

}  // namespace victr
