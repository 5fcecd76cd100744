// Labeled precision/recall/F1 in CoNLL-2009 scorer semantics, plus
// diagnostic breakdowns by path frequency, sentence length, and word
// category x role group.
//
// Scored units are predicate senses (one per gold or predicted predicate,
// correct iff the sense strings match at the same token) and
// (predicate, argument, label) triples (correct iff the exact triple
// matches). P = correct/predicted, R = correct/gold, F1 = 2PR/(P+R), with
// zero denominators scoring 0 by convention.
#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "pathsrl/conll.hpp"
#include "pathsrl/dep_tree.hpp"
#include "pathsrl/srl.hpp"

namespace pathsrl {

struct ScoreReport {
  long correct = 0;
  long predicted = 0;
  long gold = 0;

  double precision() const {
    return predicted == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(predicted);
  }
  double recall() const {
    return gold == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(gold);
  }
  double f1() const {
    const double p = precision();
    const double r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }

  void add(const ScoreReport& other) {
    correct += other.correct;
    predicted += other.predicted;
    gold += other.gold;
  }
};

using BucketedReport = std::vector<std::pair<std::string, ScoreReport>>;

namespace detail {

struct SenseUnit {
  std::size_t sentence;
  int token;
  std::string sense;

  auto operator<=>(const SenseUnit&) const = default;
};

struct TripleUnit {
  std::size_t sentence;
  int predicate;
  int argument;
  std::string label;

  auto operator<=>(const TripleUnit&) const = default;
};

struct Units {
  std::vector<SenseUnit> senses;
  std::vector<TripleUnit> triples;
};

inline Units gather_units(const Corpus& corpus) {
  Units units;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Sentence& s = corpus[i];
    const std::vector<int> preds = s.predicate_tokens();
    for (std::size_t p = 0; p < preds.size(); ++p) {
      units.senses.push_back({i, preds[p], s.token(preds[p]).pred});
      for (const Token& tok : s.tokens)
        if (!tok.apreds[p].empty())
          units.triples.push_back({i, preds[p], tok.id, tok.apreds[p]});
    }
  }
  return units;
}

inline void check_alignment(const Corpus& gold, const Corpus& predicted) {
  if (gold.size() != predicted.size())
    throw CorpusError("corpora have different sentence counts (" +
                      std::to_string(gold.size()) + " vs " + std::to_string(predicted.size()) + ")");
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != predicted[i].size())
      throw CorpusError("sentence " + std::to_string(i + 1) + ": token counts differ");
    for (int t = 1; t <= gold[i].size(); ++t)
      if (gold[i].token(t).form != predicted[i].token(t).form)
        throw CorpusError("sentence " + std::to_string(i + 1) + ", token " +
                          std::to_string(t) + ": FORM differs");
  }
}

}  // namespace detail

inline ScoreReport score(const Corpus& gold, const Corpus& predicted) {
  detail::check_alignment(gold, predicted);
  const detail::Units g = detail::gather_units(gold);
  const detail::Units p = detail::gather_units(predicted);
  ScoreReport report;
  report.gold = static_cast<long>(g.senses.size() + g.triples.size());
  report.predicted = static_cast<long>(p.senses.size() + p.triples.size());
  const std::set<detail::SenseUnit> gold_senses(g.senses.begin(), g.senses.end());
  const std::set<detail::TripleUnit> gold_triples(g.triples.begin(), g.triples.end());
  for (const auto& u : p.senses) report.correct += gold_senses.count(u) ? 1 : 0;
  for (const auto& u : p.triples) report.correct += gold_triples.count(u) ? 1 : 0;
  return report;
}

// Training-corpus occurrence counts of unlexicalized predicate-to-argument
// paths, used for the recall-by-path-frequency breakdown.
inline std::unordered_map<std::string, long> count_training_paths(const Corpus& training) {
  std::unordered_map<std::string, long> counts;
  for (const Sentence& s : training) {
    const DepTree tree = build_tree(s);
    const std::vector<int> preds = s.predicate_tokens();
    for (std::size_t p = 0; p < preds.size(); ++p)
      for (const Token& tok : s.tokens) {
        if (tok.apreds[p].empty()) continue;
        try {
          ++counts[unlexicalized_path(tree, preds[p], tok.id)];
        } catch (const NoPathError&) {
        }
      }
  }
  return counts;
}

inline const char* path_frequency_bucket(long freq) {
  if (freq == 0) return "0";
  if (freq <= 10) return "1-10";
  if (freq <= 100) return "<=10^2";
  if (freq <= 1000) return "<=10^3";
  if (freq <= 10000) return "<=10^4";
  return ">10^4";
}

// Recall of gold argument triples bucketed by how often their unlexicalized
// path occurred between training predicate-argument pairs.
inline BucketedReport recall_by_path_frequency(const Corpus& gold, const Corpus& predicted,
                                               const Corpus& training) {
  detail::check_alignment(gold, predicted);
  const auto counts = count_training_paths(training);
  const detail::Units g = detail::gather_units(gold);
  const detail::Units p = detail::gather_units(predicted);
  const std::set<detail::TripleUnit> predicted_triples(p.triples.begin(), p.triples.end());

  static const char* kOrder[] = {"0", "1-10", "<=10^2", "<=10^3", "<=10^4", ">10^4"};
  std::map<std::string, ScoreReport> buckets;
  std::vector<DepTree> trees;
  trees.reserve(gold.size());
  for (const Sentence& s : gold) trees.push_back(build_tree(s));
  for (const detail::TripleUnit& u : g.triples) {
    std::string path;
    try {
      path = unlexicalized_path(trees[u.sentence], u.predicate, u.argument);
    } catch (const NoPathError&) {
      continue;
    }
    const auto it = counts.find(path);
    const long freq = it == counts.end() ? 0 : it->second;
    ScoreReport& bucket = buckets[path_frequency_bucket(freq)];
    ++bucket.gold;
    if (predicted_triples.count(u)) ++bucket.correct;
  }
  BucketedReport out;
  for (const char* name : kOrder)
    if (buckets.count(name)) out.emplace_back(name, buckets[name]);
  return out;
}

inline const char* sentence_length_bucket(int n) {
  if (n <= 10) return "1-10";
  if (n <= 15) return "11-15";
  if (n <= 20) return "16-20";
  if (n <= 25) return "21-25";
  if (n <= 30) return "26-30";
  return "31-";
}

inline BucketedReport f1_by_sentence_length(const Corpus& gold, const Corpus& predicted) {
  detail::check_alignment(gold, predicted);
  static const char* kOrder[] = {"1-10", "11-15", "16-20", "21-25", "26-30", "31-"};
  std::map<std::string, ScoreReport> buckets;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const Corpus g1 = {gold[i]};
    const Corpus p1 = {predicted[i]};
    buckets[sentence_length_bucket(gold[i].size())].add(score(g1, p1));
  }
  BucketedReport out;
  for (const char* name : kOrder) {
    const auto it = buckets.find(name);
    if (it != buckets.end() && (it->second.gold > 0 || it->second.predicted > 0))
      out.emplace_back(name, it->second);
  }
  return out;
}

inline const char* role_group(const std::string& label) {
  if (label == "A0") return "A0";
  if (label == "A1") return "A1";
  if (label == "A2") return "A2";
  if (label.rfind("AM", 0) == 0) return "AM";
  return "other";
}

struct CategoryRoleCell {
  std::string category;  // "verb" or "noun"
  std::string group;     // "A0", "A1", "A2", "AM", "other"
  ScoreReport report;
};

// Precision and recall of argument triples split by the predicate's word
// category and the role-label group.
inline std::vector<CategoryRoleCell> report_by_category_and_role(const Corpus& gold,
                                                                 const Corpus& predicted) {
  detail::check_alignment(gold, predicted);
  const detail::Units g = detail::gather_units(gold);
  const detail::Units p = detail::gather_units(predicted);
  const std::set<detail::TripleUnit> gold_triples(g.triples.begin(), g.triples.end());

  auto cell_key = [&gold](const detail::TripleUnit& u) {
    const Category cat = route_category(gold[u.sentence].token(u.predicate).ppos);
    return std::make_pair(std::string(category_name(cat)), std::string(role_group(u.label)));
  };
  std::map<std::pair<std::string, std::string>, ScoreReport> cells;
  for (const detail::TripleUnit& u : g.triples) ++cells[cell_key(u)].gold;
  for (const detail::TripleUnit& u : p.triples) {
    ScoreReport& cell = cells[cell_key(u)];
    ++cell.predicted;
    if (gold_triples.count(u)) ++cell.correct;
  }
  std::vector<CategoryRoleCell> out;
  for (const char* cat : {"verb", "noun"})
    for (const char* group : {"A0", "A1", "A2", "AM", "other"}) {
      const auto it = cells.find({cat, group});
      if (it != cells.end()) out.push_back({cat, group, it->second});
    }
  return out;
}

}  // namespace pathsrl
