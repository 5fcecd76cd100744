// Sparse binary indicator features and path-item dictionaries.
//
// Feature strings are namespaced by template name, so templates can never
// collide. With an open dictionary unseen strings are added; with a frozen
// one they are dropped (binary features) or mapped to reserved unknown
// entries (path items).
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "pathsrl/conll.hpp"
#include "pathsrl/dep_tree.hpp"
#include "pathsrl/dict.hpp"

namespace pathsrl {

// Reserved path-vocabulary entries, fixed at indices 0..2.
inline const char* kUnkWord = "<unk-word>";
inline const char* kUnkPos = "<unk-pos>";
inline const char* kUnkRel = "<unk-rel>";

inline Dict make_path_dict() {
  Dict d;
  d.add(kUnkWord);
  d.add(kUnkPos);
  d.add(kUnkRel);
  return d;
}

inline std::string path_item_key(const PathItem& item) {
  switch (item.kind) {
    case PathItemKind::PosTag:
      return "pos:" + item.value;
    case PathItemKind::WordForm:
      return "word:" + item.value;
    case PathItemKind::Relation:
      return "rel:" + item.value + arrow(item.direction);
  }
  return {};
}

inline int unk_index(PathItemKind kind) {
  switch (kind) {
    case PathItemKind::WordForm:
      return 0;
    case PathItemKind::PosTag:
      return 1;
    case PathItemKind::Relation:
      return 2;
  }
  return 0;
}

// One input index per path item.
inline std::vector<int> encode_path_items(const PathSequence& path, Dict& dict) {
  std::vector<int> out;
  out.reserve(path.items.size());
  for (const PathItem& item : path.items) {
    int id = dict.add(path_item_key(item));
    if (id < 0) id = unk_index(item.kind);
    out.push_back(id);
  }
  return out;
}

// Sorted set of binary feature indices (the set B).
using BinaryFeatureSet = std::vector<int>;

namespace detail {

inline void emit_neighbor_features(const Sentence& sentence, const DepTree& tree,
                                   int token, const std::string& prefix,
                                   std::vector<std::string>& keys) {
  const int parent = tree.parent[static_cast<std::size_t>(token)];
  for (int sib : tree.children[static_cast<std::size_t>(parent)]) {
    if (sib == token) continue;
    keys.push_back(prefix + ".sib.form=" + sentence.token(sib).form);
    keys.push_back(prefix + ".sib.pos=" + sentence.token(sib).ppos);
  }
  for (int child : tree.children[static_cast<std::size_t>(token)]) {
    keys.push_back(prefix + ".child.form=" + sentence.token(child).form);
    keys.push_back(prefix + ".child.pos=" + sentence.token(child).ppos);
  }
}

}  // namespace detail

inline std::vector<std::string> binary_feature_keys(const Sentence& sentence,
                                                    const DepTree& tree, int predicate,
                                                    int candidate) {
  std::vector<std::string> keys;
  const Token& pred = sentence.token(predicate);
  const Token& cand = sentence.token(candidate);
  keys.push_back("pred.form=" + pred.form);
  keys.push_back("pred.pos=" + pred.ppos);
  keys.push_back("cand.form=" + cand.form);
  keys.push_back("cand.pos=" + cand.ppos);
  keys.push_back("pred.deprel=" + pred.pdeprel);
  keys.push_back("cand.deprel=" + cand.pdeprel);

  std::string path;
  try {
    path = unlexicalized_path(tree, predicate, candidate);
  } catch (const NoPathError&) {
    path = "<none>";
  }
  keys.push_back("path=" + path);

  detail::emit_neighbor_features(sentence, tree, predicate, "pred", keys);
  detail::emit_neighbor_features(sentence, tree, candidate, "cand", keys);

  const char* relpos = candidate < predicate ? "left" : candidate == predicate ? "self" : "right";
  keys.push_back(std::string("relpos=") + relpos);

  std::string between;
  for (int t = std::min(predicate, candidate) + 1; t < std::max(predicate, candidate); ++t) {
    if (!between.empty()) between += '+';
    between += sentence.token(t).ppos;
  }
  keys.push_back("between.pos=" + between);
  return keys;
}

inline BinaryFeatureSet extract_binary_features(const Sentence& sentence,
                                                const DepTree& tree, int predicate,
                                                int candidate, Dict& dict) {
  BinaryFeatureSet set;
  for (const std::string& key : binary_feature_keys(sentence, tree, predicate, candidate)) {
    const int id = dict.add(key);
    if (id >= 0) set.push_back(id);
  }
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

}  // namespace pathsrl
