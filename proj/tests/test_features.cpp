#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pathsrl/features.hpp"

using namespace pathsrl;

TEST_CASE("fig-1 binary features for (raising, he)") {
  const Sentence s = fixtures::control_sentence();
  const DepTree tree = build_tree(s);
  Dict dict;
  const BinaryFeatureSet set = extract_binary_features(s, tree, 4, 1, dict);
  auto has = [&](const std::string& key) {
    const int id = dict.lookup(key);
    return id >= 0 && std::binary_search(set.begin(), set.end(), id);
  };
  CHECK(has("pred.form=raising"));
  CHECK(has("pred.pos=V"));
  CHECK(has("cand.form=he"));
  CHECK(has("cand.pos=N"));
  CHECK(has("pred.deprel=NMOD"));
  CHECK(has("cand.deprel=SBJ"));
  CHECK(has("relpos=left"));
  CHECK(has("path=NMOD↑OBJ↑SBJ↓"));
  CHECK(has("between.pos=V+N"));  // had, trouble in surface order
  // children of raising: funds
  CHECK(has("pred.child.form=funds"));
  CHECK(has("cand.sib.form=trouble"));
}

TEST_CASE("self candidate gets relpos=self and empty between feature") {
  const Sentence s = fixtures::control_sentence();
  const DepTree tree = build_tree(s);
  Dict dict;
  const BinaryFeatureSet set = extract_binary_features(s, tree, 4, 4, dict);
  auto has = [&](const std::string& key) {
    const int id = dict.lookup(key);
    return id >= 0 && std::binary_search(set.begin(), set.end(), id);
  };
  CHECK(has("relpos=self"));
  CHECK(has("between.pos="));
  CHECK(has("path="));
}

TEST_CASE("extraction is deterministic") {
  const Sentence s = fixtures::control_sentence();
  const DepTree tree = build_tree(s);
  Dict dict;
  const BinaryFeatureSet a = extract_binary_features(s, tree, 4, 1, dict);
  const BinaryFeatureSet b = extract_binary_features(s, tree, 4, 1, dict);
  CHECK(a == b);
}

TEST_CASE("frozen dict drops unseen binary features") {
  const Sentence s = fixtures::control_sentence();
  const DepTree tree = build_tree(s);
  Dict dict;
  extract_binary_features(s, tree, 4, 1, dict);
  dict.freeze();
  const int before = dict.size();
  const BinaryFeatureSet set = extract_binary_features(s, tree, 4, 5, dict);
  CHECK(dict.size() == before);
  for (int f : set) CHECK(f < before);
}

TEST_CASE("feature namespacing cannot collide across templates") {
  const Sentence s = fixtures::control_sentence();
  const DepTree tree = build_tree(s);
  const std::vector<std::string> keys = binary_feature_keys(s, tree, 4, 1);
  for (const std::string& key : keys) CHECK(key.find('=') != std::string::npos);
}

TEST_CASE("dict round-trips index to string to index") {
  Dict dict;
  dict.add("alpha");
  dict.add("beta");
  dict.add("gamma");
  for (int i = 0; i < dict.size(); ++i) CHECK(dict.lookup(dict.name(i)) == i);
}

TEST_CASE("fig-2 sequence encodes to one index per item") {
  const Sentence s = fixtures::control_sentence();
  const DepTree tree = build_tree(s);
  const PathSequence seq = extract_path_sequence(tree, s, 4, 1);
  Dict dict = make_path_dict();
  const std::vector<int> ids = encode_path_items(seq, dict);
  REQUIRE(ids.size() == seq.items.size());
  REQUIRE(ids.size() == 11);  // 2 items per node + 3 relations
  CHECK(ids.front() == dict.lookup("pos:V"));
  CHECK(ids.back() == dict.lookup("word:he"));
}

TEST_CASE("single-node path encodes to two indices") {
  const Sentence s = fixtures::control_sentence();
  const DepTree tree = build_tree(s);
  const PathSequence seq = extract_path_sequence(tree, s, 2, 2);
  Dict dict = make_path_dict();
  CHECK(encode_path_items(seq, dict).size() == 2);
}

TEST_CASE("frozen dict maps novel items to reserved unknowns") {
  Dict dict = make_path_dict();
  dict.add("word:seen");
  dict.freeze();
  PathSequence seq;
  seq.items = {{PathItemKind::WordForm, "blorp"},
               {PathItemKind::PosTag, "Z"},
               {PathItemKind::Relation, "WEIRD", Direction::Up},
               {PathItemKind::WordForm, "seen"}};
  seq.node_count = 2;
  const std::vector<int> ids = encode_path_items(seq, dict);
  CHECK(ids[0] == dict.lookup(kUnkWord));
  CHECK(ids[1] == dict.lookup(kUnkPos));
  CHECK(ids[2] == dict.lookup(kUnkRel));
  CHECK(ids[3] == dict.lookup("word:seen"));
}
