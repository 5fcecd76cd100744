#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pathsrl/dep_tree.hpp"

using namespace pathsrl;

namespace {

Sentence chain_sentence(int n) {
  // token i attaches to i-1; token 1 is the root.
  Sentence s;
  for (int i = 1; i <= n; ++i) {
    Token t;
    t.id = i;
    t.form = t.lemma = t.plemma = "w" + std::to_string(i);
    t.pos = t.ppos = "N";
    t.feat = t.pfeat = "_";
    t.head = t.phead = i - 1;
    t.deprel = t.pdeprel = i == 1 ? "ROOT" : "NMOD";
    s.tokens.push_back(t);
  }
  return s;
}

}  // namespace

TEST_CASE("control sentence tree structure") {
  const Sentence s = fixtures::control_sentence();
  const DepTree tree = build_tree(s);
  CHECK(tree.children[0] == std::vector<int>{2});           // had is the root
  CHECK(tree.children[2] == std::vector<int>{1, 3});        // he, trouble under had
  CHECK(tree.children[3] == std::vector<int>{4});           // raising under trouble
  CHECK(tree.children[4] == std::vector<int>{5});           // funds under raising
  CHECK(tree.parent[4] == 3);
  CHECK(tree.relation[4] == "NMOD");
}

TEST_CASE("single token sentence") {
  const Sentence s = chain_sentence(1);
  const DepTree tree = build_tree(s);
  CHECK(tree.children[0] == std::vector<int>{1});
  CHECK(tree.children[1].empty());
}

TEST_CASE("chain children are consistent") {
  const Sentence s = chain_sentence(3);
  const DepTree tree = build_tree(s);
  CHECK(tree.children[1] == std::vector<int>{2});
  CHECK(tree.children[2] == std::vector<int>{3});
}

TEST_CASE("path from raising to he") {
  const Sentence s = fixtures::control_sentence();
  const DepTree tree = build_tree(s);
  const TreePath path = tree_path(tree, 4, 1);
  CHECK(path.nodes == std::vector<int>{4, 3, 2, 1});
  REQUIRE(path.edges.size() == 3);
  CHECK(path.edges[0] == TreePathEdge{"NMOD", Direction::Up});
  CHECK(path.edges[1] == TreePathEdge{"OBJ", Direction::Up});
  CHECK(path.edges[2] == TreePathEdge{"SBJ", Direction::Down});
}

TEST_CASE("identity path has a single node") {
  const Sentence s = fixtures::control_sentence();
  const DepTree tree = build_tree(s);
  const TreePath path = tree_path(tree, 3, 3);
  CHECK(path.nodes == std::vector<int>{3});
  CHECK(path.edges.empty());
}

TEST_CASE("separate components raise NoPath") {
  std::string text =
      "1\ta\ta\ta\tN\tN\t_\t_\t0\t0\tROOT\tROOT\t_\t_\n"
      "2\tb\tb\tb\tN\tN\t_\t_\t0\t0\tROOT\tROOT\t_\t_\n\n";
  std::istringstream in(text);
  const Sentence s = read_corpus(in).front();
  const DepTree tree = build_tree(s);
  CHECK_THROWS_AS(tree_path(tree, 1, 2), NoPathError);
}

TEST_CASE("fig-1 path sequence is reproduced item for item") {
  const Sentence s = fixtures::control_sentence();
  const DepTree tree = build_tree(s);
  const PathSequence seq = extract_path_sequence(tree, s, 4, 1);
  const std::vector<PathItem> expected = {
      {PathItemKind::PosTag, "V"},
      {PathItemKind::WordForm, "raising"},
      {PathItemKind::Relation, "NMOD", Direction::Up},
      {PathItemKind::PosTag, "N"},
      {PathItemKind::WordForm, "trouble"},
      {PathItemKind::Relation, "OBJ", Direction::Up},
      {PathItemKind::PosTag, "V"},
      {PathItemKind::WordForm, "had"},
      {PathItemKind::Relation, "SBJ", Direction::Down},
      {PathItemKind::PosTag, "N"},
      {PathItemKind::WordForm, "he"},
  };
  CHECK(seq.items == expected);
  CHECK(seq.node_count == 4);
}

TEST_CASE("self path contributes pos and word only") {
  const Sentence s = fixtures::control_sentence();
  const DepTree tree = build_tree(s);
  const PathSequence seq = extract_path_sequence(tree, s, 4, 4);
  REQUIRE(seq.items.size() == 2);
  CHECK(seq.items[0] == PathItem{PathItemKind::PosTag, "V"});
  CHECK(seq.items[1] == PathItem{PathItemKind::WordForm, "raising"});
}

TEST_CASE("random trees agree with the brute-force walker") {
  Rng rng(1234);
  int checked = 0;
  for (int iter = 0; iter < 300; ++iter) {
    const int n = static_cast<int>(rng.uniform_int(2, 30));
    const Sentence s = oracles::random_tree_sentence(n, rng);
    const DepTree tree = build_tree(s);
    for (int rep = 0; rep < 4; ++rep) {
      const int from = static_cast<int>(rng.uniform_int(1, n));
      const int to = static_cast<int>(rng.uniform_int(1, n));
      const std::vector<int> expected_nodes = oracles::brute_force_path(s, from, to);
      if (expected_nodes.empty()) {
        CHECK_THROWS_AS(tree_path(tree, from, to), NoPathError);
        continue;
      }
      const TreePath path = tree_path(tree, from, to);
      REQUIRE(path.nodes == expected_nodes);
      const PathSequence seq = extract_path_sequence(tree, s, from, to);
      REQUIRE(seq.items == oracles::brute_force_sequence(s, expected_nodes));
      // Stated arithmetic: 2 items per node plus one relation per edge.
      CHECK(static_cast<int>(seq.items.size()) == 3 * seq.node_count - 1);
      ++checked;
    }
  }
  CHECK(checked > 600);
}

TEST_CASE("reversed endpoints reverse nodes and flip directions") {
  Rng rng(99);
  for (int iter = 0; iter < 100; ++iter) {
    const int n = static_cast<int>(rng.uniform_int(2, 20));
    const Sentence s = oracles::random_tree_sentence(n, rng, 0.0);  // single root
    const DepTree tree = build_tree(s);
    const int from = static_cast<int>(rng.uniform_int(1, n));
    const int to = static_cast<int>(rng.uniform_int(1, n));
    const TreePath fwd = tree_path(tree, from, to);
    const TreePath rev = tree_path(tree, to, from);
    std::vector<int> nodes = fwd.nodes;
    std::reverse(nodes.begin(), nodes.end());
    REQUIRE(rev.nodes == nodes);
    REQUIRE(rev.edges.size() == fwd.edges.size());
    for (std::size_t i = 0; i < fwd.edges.size(); ++i) {
      const TreePathEdge& a = fwd.edges[i];
      const TreePathEdge& b = rev.edges[rev.edges.size() - 1 - i];
      CHECK(a.relation == b.relation);
      CHECK(a.direction != b.direction);
    }
  }
}

TEST_CASE("unlexicalized path rendering") {
  const Sentence s = fixtures::control_sentence();
  const DepTree tree = build_tree(s);
  CHECK(unlexicalized_path(tree, 4, 1) == "NMOD↑OBJ↑SBJ↓");
  CHECK(unlexicalized_path(tree, 4, 4).empty());
}
