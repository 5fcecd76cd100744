// Predicate identification and sense disambiguation.
//
// Both stages are logistic regression over lexico-syntactic indicator
// features: the predicate word form, its predicted POS tag, and the
// dependency relations to all of its syntactic children. Identification is
// restricted to verbal and nominal tokens; disambiguation keeps one
// classifier per lemma observed with at least two senses and otherwise
// falls back to the most frequent training sense, or `<lemma>.01` for
// unseen lemmas.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pathsrl/conll.hpp"
#include "pathsrl/dep_tree.hpp"
#include "pathsrl/dict.hpp"
#include "pathsrl/network.hpp"
#include "pathsrl/rng.hpp"
#include "pathsrl/serialize.hpp"

namespace pathsrl {

using SparseVec = std::vector<std::pair<int, double>>;

// Multinomial logistic regression over sparse real-valued features,
// trained with per-example SGD on cross-entropy.
struct SparseLogReg {
  Mat w;  // classes x dim
  Vec b;  // classes

  int n_classes() const { return static_cast<int>(b.size()); }
  int dim() const { return static_cast<int>(w.cols()); }

  Vec probs(const SparseVec& x) const {
    Vec z = b;
    for (const auto& [f, v] : x)
      if (f >= 0 && f < dim()) z += v * w.col(f);
    return softmax(z);
  }

  struct Example {
    SparseVec x;
    int gold = 0;
  };

  static SparseLogReg train(const std::vector<Example>& examples, int classes, int dim,
                            int epochs, double alpha, Rng& rng) {
    SparseLogReg m;
    m.w = Mat::Zero(classes, dim);
    m.b = Vec::Zero(classes);
    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (int epoch = 0; epoch < epochs; ++epoch) {
      rng.shuffle(order);
      for (std::size_t idx : order) {
        const Example& ex = examples[idx];
        Vec grad = m.probs(ex.x);
        grad(ex.gold) -= 1.0;
        m.b -= alpha * grad;
        for (const auto& [f, v] : ex.x)
          if (f >= 0 && f < dim) m.w.col(f) -= (alpha * v) * grad;
      }
    }
    return m;
  }

  void save(BinaryWriter& w_) const {
    w_.mat(w);
    w_.vec(b);
  }
  static SparseLogReg load(BinaryReader& r) {
    SparseLogReg m;
    m.w = r.mat();
    m.b = r.vec();
    return m;
  }
};

inline bool is_predicate_candidate(const std::string& ppos) {
  return !ppos.empty() && (ppos[0] == 'V' || ppos[0] == 'N');
}

inline std::vector<std::string> predicate_feature_keys(const Sentence& sentence,
                                                       const DepTree& tree, int token) {
  const Token& tok = sentence.token(token);
  std::vector<std::string> keys;
  keys.push_back("form=" + tok.form);
  keys.push_back("ppos=" + tok.ppos);
  for (int child : tree.children[static_cast<std::size_t>(token)])
    keys.push_back("child.deprel=" + sentence.token(child).pdeprel);
  return keys;
}

struct PredicateModel {
  struct LemmaSenses {
    std::vector<std::string> senses;  // lexicographic order
    std::vector<std::int64_t> counts;
    std::optional<SparseLogReg> classifier;  // present iff senses.size() >= 2

    int most_frequent() const {
      int best = 0;
      for (std::size_t i = 1; i < counts.size(); ++i)
        if (counts[i] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
      return best;
    }
  };

  Dict features;
  SparseLogReg identifier;                          // class 1 = predicate
  std::map<std::string, LemmaSenses> sense_table;   // keyed by plemma

  SparseVec encode(const Sentence& sentence, const DepTree& tree, int token) const {
    SparseVec x;
    for (const std::string& key : predicate_feature_keys(sentence, tree, token)) {
      const int id = features.lookup(key);
      if (id >= 0) x.emplace_back(id, 1.0);
    }
    return x;
  }

  std::vector<int> identify(const Sentence& sentence, const DepTree& tree) const {
    std::vector<int> out;
    for (const Token& tok : sentence.tokens) {
      if (!is_predicate_candidate(tok.ppos)) continue;
      if (identifier.probs(encode(sentence, tree, tok.id))(1) >= 0.5)
        out.push_back(tok.id);
    }
    return out;
  }

  std::string disambiguate(const Sentence& sentence, const DepTree& tree, int token) const {
    const std::string& lemma = sentence.token(token).plemma;
    const auto it = sense_table.find(lemma);
    if (it == sense_table.end()) return lemma + ".01";
    const LemmaSenses& entry = it->second;
    if (entry.classifier) {
      const Vec p = entry.classifier->probs(encode(sentence, tree, token));
      int best = 0;
      for (int c = 1; c < p.size(); ++c)
        if (p(c) > p(best)) best = c;
      return entry.senses[static_cast<std::size_t>(best)];
    }
    return entry.senses[static_cast<std::size_t>(entry.most_frequent())];
  }

  void save(std::ostream& out) const {
    BinaryWriter w(out);
    w.header(FileKind::PredicateClassifier);
    w.dict(features);
    identifier.save(w);
    w.u64(sense_table.size());
    for (const auto& [lemma, entry] : sense_table) {
      w.str(lemma);
      w.u64(entry.senses.size());
      for (const std::string& s : entry.senses) w.str(s);
      for (std::int64_t c : entry.counts) w.u64(static_cast<std::uint64_t>(c));
      w.u8(entry.classifier ? 1 : 0);
      if (entry.classifier) entry.classifier->save(w);
    }
  }

  static PredicateModel load(std::istream& in) {
    BinaryReader r(in);
    r.expect(FileKind::PredicateClassifier);
    PredicateModel m;
    m.features = r.dict();
    m.identifier = SparseLogReg::load(r);
    const std::uint64_t n = r.u64();
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::string lemma = r.str();
      LemmaSenses entry;
      const std::uint64_t k = r.u64();
      for (std::uint64_t j = 0; j < k; ++j) entry.senses.push_back(r.str());
      for (std::uint64_t j = 0; j < k; ++j)
        entry.counts.push_back(static_cast<std::int64_t>(r.u64()));
      if (r.u8()) entry.classifier = SparseLogReg::load(r);
      m.sense_table.emplace(lemma, std::move(entry));
    }
    return m;
  }
};

struct PredicateTrainConfig {
  int epochs = 10;
  double alpha = 0.1;
};

inline PredicateModel train_predicate_model(const Corpus& corpus,
                                            const PredicateTrainConfig& cfg, Rng& rng) {
  PredicateModel model;
  // Sense inventory and feature dictionary.
  std::map<std::string, std::map<std::string, std::int64_t>> sense_counts;
  std::vector<DepTree> trees;
  trees.reserve(corpus.size());
  for (const Sentence& s : corpus) {
    trees.push_back(build_tree(s));
    for (const Token& tok : s.tokens) {
      if (is_predicate_candidate(tok.ppos))
        for (const std::string& key : predicate_feature_keys(s, trees.back(), tok.id))
          model.features.add(key);
      if (tok.fillpred) ++sense_counts[tok.plemma][tok.pred];
    }
  }
  model.features.freeze();

  // Identification examples over all verbal/nominal tokens.
  std::vector<SparseLogReg::Example> id_examples;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Sentence& s = corpus[i];
    for (const Token& tok : s.tokens) {
      if (!is_predicate_candidate(tok.ppos)) continue;
      id_examples.push_back({model.encode(s, trees[i], tok.id), tok.fillpred ? 1 : 0});
    }
  }
  model.identifier =
      SparseLogReg::train(id_examples, 2, model.features.size(), cfg.epochs, cfg.alpha, rng);

  // Per-lemma sense classifiers for ambiguous lemmas.
  for (const auto& [lemma, counts] : sense_counts) {
    PredicateModel::LemmaSenses entry;
    for (const auto& [sense, count] : counts) {
      entry.senses.push_back(sense);
      entry.counts.push_back(count);
    }
    if (entry.senses.size() >= 2) {
      std::vector<SparseLogReg::Example> examples;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Sentence& s = corpus[i];
        for (const Token& tok : s.tokens) {
          if (!tok.fillpred || tok.plemma != lemma) continue;
          const auto sense_it =
              std::find(entry.senses.begin(), entry.senses.end(), tok.pred);
          examples.push_back({model.encode(s, trees[i], tok.id),
                              static_cast<int>(sense_it - entry.senses.begin())});
        }
      }
      entry.classifier = SparseLogReg::train(examples, static_cast<int>(entry.senses.size()),
                                             model.features.size(), cfg.epochs, cfg.alpha, rng);
    }
    model.sense_table.emplace(lemma, std::move(entry));
  }
  return model;
}

}  // namespace pathsrl
