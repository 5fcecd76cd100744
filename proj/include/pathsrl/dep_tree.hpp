// Dependency-tree navigation and lexicalized path extraction.
//
// Trees are built from the predicted columns (PHEAD/PDEPREL). Node 0 is an
// artificial root; several tokens may attach to it, which makes the
// structure a forest. Paths never cross the artificial root.
#pragma once

#include <string>
#include <vector>

#include "pathsrl/conll.hpp"
#include "pathsrl/errors.hpp"

namespace pathsrl {

enum class Direction { Up, Down };

inline const char* kUpArrow = "↑";    // ↑ toward the root
inline const char* kDownArrow = "↓";  // ↓ away from the root

inline const char* arrow(Direction d) { return d == Direction::Up ? kUpArrow : kDownArrow; }

struct DepTree {
  // Indexed by token id; slot 0 is the artificial root.
  std::vector<int> parent;                 // parent[0] = -1
  std::vector<std::string> relation;       // relation[i] = pdeprel of token i
  std::vector<std::vector<int>> children;  // children[0] = roots, id-sorted

  int size() const { return static_cast<int>(parent.size()) - 1; }
};

inline DepTree build_tree(const Sentence& sentence) {
  const int n = sentence.size();
  DepTree tree;
  tree.parent.assign(static_cast<std::size_t>(n) + 1, -1);
  tree.relation.assign(static_cast<std::size_t>(n) + 1, std::string());
  tree.children.assign(static_cast<std::size_t>(n) + 1, {});
  for (const Token& tok : sentence.tokens) {
    tree.parent[static_cast<std::size_t>(tok.id)] = tok.phead;
    tree.relation[static_cast<std::size_t>(tok.id)] = tok.pdeprel;
    tree.children[static_cast<std::size_t>(tok.phead)].push_back(tok.id);
  }
  return tree;
}

struct TreePathEdge {
  std::string relation;
  Direction direction;

  bool operator==(const TreePathEdge&) const = default;
};

struct TreePath {
  std::vector<int> nodes;           // token ids, from-first
  std::vector<TreePathEdge> edges;  // edges[i] joins nodes[i] and nodes[i+1]
};

// Unique simple path between two tokens via their lowest common ancestor.
// Edges are tagged Up when traversed child->parent, Down otherwise.
inline TreePath tree_path(const DepTree& tree, int from, int to) {
  std::vector<int> from_chain;  // from .. component root, then 0
  std::vector<int> chain_pos(tree.parent.size(), -1);
  int node = from;
  while (node != 0) {
    chain_pos[static_cast<std::size_t>(node)] = static_cast<int>(from_chain.size());
    from_chain.push_back(node);
    node = tree.parent[static_cast<std::size_t>(node)];
  }
  chain_pos[0] = static_cast<int>(from_chain.size());
  from_chain.push_back(0);

  std::vector<int> to_chain;  // to .. lca (exclusive)
  node = to;
  while (chain_pos[static_cast<std::size_t>(node)] < 0) {
    to_chain.push_back(node);
    node = tree.parent[static_cast<std::size_t>(node)];
  }
  const int lca = node;
  if (lca == 0)
    throw NoPathError("tokens " + std::to_string(from) + " and " + std::to_string(to) +
                      " are in different components");

  TreePath path;
  for (int i = 0; i <= chain_pos[static_cast<std::size_t>(lca)]; ++i)
    path.nodes.push_back(from_chain[static_cast<std::size_t>(i)]);
  for (auto it = to_chain.rbegin(); it != to_chain.rend(); ++it) path.nodes.push_back(*it);
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
    const int a = path.nodes[i];
    const int b = path.nodes[i + 1];
    if (tree.parent[static_cast<std::size_t>(a)] == b)
      path.edges.push_back({tree.relation[static_cast<std::size_t>(a)], Direction::Up});
    else
      path.edges.push_back({tree.relation[static_cast<std::size_t>(b)], Direction::Down});
  }
  return path;
}

enum class PathItemKind { PosTag, WordForm, Relation };

struct PathItem {
  PathItemKind kind;
  std::string value;
  Direction direction = Direction::Up;  // meaningful for Relation items only

  bool operator==(const PathItem& other) const {
    if (kind != other.kind || value != other.value) return false;
    return kind != PathItemKind::Relation || direction == other.direction;
  }
};

struct PathSequence {
  std::vector<PathItem> items;  // predicate-first
  int node_count = 0;
};

// Item sequence for the path from a predicate to a candidate argument head:
// each node contributes its predicted POS tag then its predicted lemma, with
// one direction-tagged relation item between consecutive nodes. The final
// item is the argument head's word item.
inline PathSequence extract_path_sequence(const DepTree& tree, const Sentence& sentence,
                                          int predicate, int argument) {
  const TreePath path = tree_path(tree, predicate, argument);
  PathSequence seq;
  seq.node_count = static_cast<int>(path.nodes.size());
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    const Token& tok = sentence.token(path.nodes[i]);
    seq.items.push_back({PathItemKind::PosTag, tok.ppos});
    seq.items.push_back({PathItemKind::WordForm, tok.plemma});
    if (i < path.edges.size())
      seq.items.push_back(
          {PathItemKind::Relation, path.edges[i].relation, path.edges[i].direction});
  }
  return seq;
}

// Relation-only rendering ("NMOD↑OBJ↑SBJ↓"); empty for the self path.
inline std::string unlexicalized_path(const DepTree& tree, int from, int to) {
  const TreePath path = tree_path(tree, from, to);
  std::string out;
  for (const TreePathEdge& e : path.edges) {
    out += e.relation;
    out += arrow(e.direction);
  }
  return out;
}

}  // namespace pathsrl
