// Global reranking over n-best argument structures per predicate.
//
// Candidate structures combine the n best argument subsets (ranked by the
// product over tokens of p or 1-p from identification) with the n best
// label assignments per subset (ranked by the product of per-argument
// classification probabilities). A binary logistic regression scores each
// structure from the hidden and embedding states of its arguments, written
// into blocks offset by the argument label; the final score is the
// geometric mean of the global probability and all argument-specific
// identification and classification probabilities.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pathsrl/predicate.hpp"
#include "pathsrl/srl.hpp"

namespace pathsrl {

struct CandidateStructure {
  LabeledStructure structure;
  double log_local = 0.0;     // log of subset product + label product
  double global_score = 0.0;  // geometric-mean score, filled by rerank()
  int order = 0;              // enumeration rank
};

namespace detail {

// k smallest flip-cost combinations over costs sorted ascending; state is a
// set of flipped indices represented by (total, last index, members).
struct FlipState {
  double cost;
  std::vector<int> members;

  bool operator>(const FlipState& other) const { return cost > other.cost; }
};

inline std::vector<std::vector<int>> k_best_flipsets(const std::vector<double>& costs, int k) {
  std::vector<std::vector<int>> out;
  out.push_back({});  // the base subset
  if (k <= 1 || costs.empty()) return out;
  std::priority_queue<FlipState, std::vector<FlipState>, std::greater<FlipState>> heap;
  heap.push({costs[0], {0}});
  while (!heap.empty() && static_cast<int>(out.size()) < k) {
    FlipState state = heap.top();
    heap.pop();
    out.push_back(state.members);
    const int last = state.members.back();
    if (last + 1 < static_cast<int>(costs.size())) {
      FlipState extend = state;
      extend.cost += costs[static_cast<std::size_t>(last + 1)];
      extend.members.push_back(last + 1);
      heap.push(std::move(extend));
      FlipState replace = state;
      replace.cost += costs[static_cast<std::size_t>(last + 1)] -
                      costs[static_cast<std::size_t>(last)];
      replace.members.back() = last + 1;
      heap.push(std::move(replace));
    }
  }
  return out;
}

// k best rank vectors over per-position descending score lists.
struct RankState {
  double penalty;
  std::vector<int> ranks;
  int pointer;

  bool operator>(const RankState& other) const { return penalty > other.penalty; }
};

inline std::vector<std::vector<int>> k_best_rank_vectors(
    const std::vector<std::vector<double>>& log_probs, int k) {
  std::vector<std::vector<int>> out;
  const int n = static_cast<int>(log_probs.size());
  out.push_back(std::vector<int>(static_cast<std::size_t>(n), 0));
  if (k <= 1 || n == 0) return out;
  std::priority_queue<RankState, std::vector<RankState>, std::greater<RankState>> heap;
  auto push_children = [&](const RankState& state) {
    for (int i = state.pointer; i < n; ++i) {
      const int r = state.ranks[static_cast<std::size_t>(i)];
      if (r + 1 >= static_cast<int>(log_probs[static_cast<std::size_t>(i)].size())) continue;
      RankState child = state;
      child.ranks[static_cast<std::size_t>(i)] = r + 1;
      child.penalty += log_probs[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)] -
                       log_probs[static_cast<std::size_t>(i)][static_cast<std::size_t>(r + 1)];
      child.pointer = i;
      heap.push(std::move(child));
    }
  };
  push_children({0.0, out.front(), 0});
  while (!heap.empty() && static_cast<int>(out.size()) < k) {
    RankState state = heap.top();
    heap.pop();
    out.push_back(state.ranks);
    push_children(state);
  }
  return out;
}

}  // namespace detail

// All candidate argument tokens of one predicate with their identification
// probabilities and (memoized) classification results.
struct PredicateCandidates {
  std::vector<ArgScore> scored;                  // every reachable token
  std::map<int, ArgClassification> classified;  // keyed by token id
};

inline PredicateCandidates score_candidates(const Sentence& sentence, const DepTree& tree,
                                            int predicate, SrlModel& id_model,
                                            SrlModel& cls_model) {
  PredicateCandidates out;
  out.scored = identify_arguments(sentence, tree, predicate, id_model, 0.0);
  for (const ArgScore& a : out.scored)
    out.classified.emplace(a.token,
                           classify_argument(sentence, tree, predicate, a.token, cls_model));
  return out;
}

inline std::vector<CandidateStructure> nbest_structures(
    const Sentence& sentence, const DepTree& tree, int predicate, Category category,
    const std::string& sense, SrlModel& id_model, SrlModel& cls_model, int n,
    double threshold = 0.5) {
  const PredicateCandidates cands = score_candidates(sentence, tree, predicate, id_model,
                                                     cls_model);

  // Base subset: include iff p >= 0.5; flip costs in ascending order.
  struct TokenInfo {
    int token;
    double p;
    bool base_in;
  };
  std::vector<TokenInfo> tokens;
  double base_log = 0.0;
  for (const ArgScore& a : cands.scored) {
    const bool in = a.prob >= 0.5;
    base_log += std::log(in ? a.prob : 1.0 - a.prob);
    tokens.push_back({a.token, a.prob, in});
  }
  std::vector<std::size_t> flip_order(tokens.size());
  std::iota(flip_order.begin(), flip_order.end(), std::size_t{0});
  std::vector<double> flip_cost(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i)
    flip_cost[i] = std::abs(std::log(tokens[i].p) - std::log(1.0 - tokens[i].p));
  std::stable_sort(flip_order.begin(), flip_order.end(),
                   [&](std::size_t a, std::size_t b) { return flip_cost[a] < flip_cost[b]; });
  std::vector<double> sorted_costs;
  for (std::size_t i : flip_order) sorted_costs.push_back(flip_cost[i]);

  struct Entry {
    double log_score;
    std::vector<int> args;     // token ids
    std::vector<int> labels;   // label indices, aligned with args
    int subset_rank;
    int assign_rank;
  };
  std::vector<Entry> entries;
  const auto flipsets = detail::k_best_flipsets(sorted_costs, n);
  for (std::size_t si = 0; si < flipsets.size(); ++si) {
    std::set<std::size_t> flipped;
    for (int f : flipsets[si]) flipped.insert(flip_order[static_cast<std::size_t>(f)]);
    double subset_log = base_log;
    std::vector<int> args;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      bool in = tokens[i].base_in;
      if (flipped.count(i)) {
        in = !in;
        subset_log += std::log(in ? tokens[i].p : 1.0 - tokens[i].p) -
                      std::log(in ? 1.0 - tokens[i].p : tokens[i].p);
      }
      if (in) args.push_back(tokens[i].token);
    }
    std::vector<std::vector<double>> label_logs;
    for (int tok : args) {
      const auto& ranked = cands.classified.at(tok).ranked;
      std::vector<double> logs;
      for (const auto& [label, p] : ranked) logs.push_back(std::log(p));
      label_logs.push_back(std::move(logs));
    }
    const auto rank_vectors = detail::k_best_rank_vectors(label_logs, n);
    for (std::size_t ai = 0; ai < rank_vectors.size(); ++ai) {
      double label_log = 0.0;
      std::vector<int> labels;
      for (std::size_t j = 0; j < args.size(); ++j) {
        const auto& ranked = cands.classified.at(args[j]).ranked;
        const auto& choice = ranked[static_cast<std::size_t>(rank_vectors[ai][j])];
        labels.push_back(choice.first);
        label_log += std::log(choice.second);
      }
      entries.push_back({subset_log + label_log, args, std::move(labels),
                         static_cast<int>(si), static_cast<int>(ai)});
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.log_score != b.log_score) return a.log_score > b.log_score;
    if (a.subset_rank != b.subset_rank) return a.subset_rank < b.subset_rank;
    return a.assign_rank < b.assign_rank;
  });

  // The local pipeline structure: args at the working threshold, argmax
  // labels. Guaranteed to appear in the final list.
  std::vector<int> local_args;
  for (const TokenInfo& t : tokens)
    if (t.p >= threshold) local_args.push_back(t.token);
  auto is_local = [&](const Entry& e) {
    if (e.args != local_args) return false;
    for (std::size_t j = 0; j < e.args.size(); ++j)
      if (e.labels[j] != cands.classified.at(e.args[j]).ranked.front().first) return false;
    return true;
  };

  if (static_cast<int>(entries.size()) > n) entries.resize(static_cast<std::size_t>(n));
  if (std::none_of(entries.begin(), entries.end(), is_local)) {
    Entry local;
    local.args = local_args;
    local.log_score = 0.0;
    for (const TokenInfo& t : tokens)
      local.log_score += std::log(t.p >= threshold ? t.p : 1.0 - t.p);
    for (int tok : local_args) {
      const auto& top = cands.classified.at(tok).ranked.front();
      local.labels.push_back(top.first);
      local.log_score += std::log(top.second);
    }
    local.subset_rank = -1;
    local.assign_rank = -1;
    if (!entries.empty()) entries.pop_back();
    entries.push_back(std::move(local));
  }

  std::vector<CandidateStructure> out;
  std::map<int, double> p_by_token;
  for (const TokenInfo& t : tokens) p_by_token[t.token] = t.p;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Entry& e = entries[i];
    CandidateStructure cs;
    cs.structure.predicate = predicate;
    cs.structure.category = category;
    cs.structure.sense = sense;
    for (std::size_t j = 0; j < e.args.size(); ++j) {
      const ArgClassification& cls = cands.classified.at(e.args[j]);
      LabeledArg arg;
      arg.token = e.args[j];
      arg.label = e.labels[j];
      arg.p_id = p_by_token.at(e.args[j]);
      for (const auto& [label, p] : cls.ranked)
        if (label == e.labels[j]) arg.p_label = p;
      arg.embed = cls.embed;
      arg.hidden = cls.hidden;
      cs.structure.args.push_back(std::move(arg));
    }
    cs.log_local = e.log_score;
    cs.order = static_cast<int>(i);
    out.push_back(std::move(cs));
  }
  return out;
}

// Width of one label block and the offsets of the verb and noun regions in
// the reranker feature space.
struct RerankFeatureSpace {
  int verb_width = 0;   // |e| + |h| of the verb classification model
  int noun_width = 0;
  int verb_labels = 0;
  int noun_labels = 0;

  int noun_base() const { return verb_labels * verb_width; }
  int total() const { return noun_base() + noun_labels * noun_width; }
};

inline RerankFeatureSpace rerank_feature_space(const SrlModel& cls_verb,
                                               const SrlModel& cls_noun) {
  RerankFeatureSpace space;
  space.verb_width = cls_verb.net.spec.embed_dim + cls_verb.net.head.hidden_dim();
  space.noun_width = cls_noun.net.spec.embed_dim + cls_noun.net.head.hidden_dim();
  space.verb_labels = cls_verb.labels.size();
  space.noun_labels = cls_noun.labels.size();
  return space;
}

// Concatenated [e_n; h] of each argument summed into the block of its
// label; verb- and noun-routed structures live in disjoint regions.
inline SparseVec rerank_features(const CandidateStructure& cs,
                                 const RerankFeatureSpace& space) {
  std::map<int, double> acc;
  for (const LabeledArg& arg : cs.structure.args) {
    const bool verb = cs.structure.category == Category::Verb;
    const int width = verb ? space.verb_width : space.noun_width;
    const int base = (verb ? 0 : space.noun_base()) + arg.label * width;
    for (Eigen::Index i = 0; i < arg.embed.size(); ++i)
      acc[base + static_cast<int>(i)] += arg.embed(i);
    for (Eigen::Index i = 0; i < arg.hidden.size(); ++i)
      acc[base + static_cast<int>(arg.embed.size() + i)] += arg.hidden(i);
  }
  return SparseVec(acc.begin(), acc.end());
}

struct RerankerModel {
  SparseLogReg lr;  // class 1 = best structure
  int total_dim = 0;

  void save(std::ostream& out) const {
    BinaryWriter w(out);
    w.header(FileKind::Reranker);
    w.u64(static_cast<std::uint64_t>(total_dim));
    lr.save(w);
  }
  static RerankerModel load(std::istream& in) {
    BinaryReader r(in);
    r.expect(FileKind::Reranker);
    RerankerModel m;
    m.total_dim = static_cast<int>(r.u64());
    m.lr = SparseLogReg::load(r);
    if (m.lr.dim() != m.total_dim)
      throw ValidationError("reranker dimensions are inconsistent");
    return m;
  }
};

inline double geometric_mean_score(double p_global, const LabeledStructure& s) {
  double log_score = std::log(p_global);
  for (const LabeledArg& arg : s.args)
    log_score += std::log(arg.p_id) + std::log(arg.p_label);
  return std::exp(log_score / (1.0 + 2.0 * static_cast<double>(s.args.size())));
}

// Picks the structure with the best geometric-mean score; ties fall back to
// the local product score and then to enumeration order.
inline const CandidateStructure& rerank(std::vector<CandidateStructure>& structures,
                                        const RerankerModel& model,
                                        const RerankFeatureSpace& space) {
  if (structures.empty()) throw std::invalid_argument("rerank: empty candidate list");
  std::size_t best = 0;
  for (std::size_t i = 0; i < structures.size(); ++i) {
    CandidateStructure& cs = structures[i];
    const double p_global = model.lr.probs(rerank_features(cs, space))(1);
    cs.global_score = geometric_mean_score(p_global, cs.structure);
    if (i == 0) continue;
    const CandidateStructure& cur = structures[best];
    if (cs.global_score > cur.global_score ||
        (cs.global_score == cur.global_score && cs.log_local > cur.log_local))
      best = i;
  }
  return structures[best];
}

}  // namespace pathsrl
