// The four path-LSTM argument networks and their per-stage operations.
//
// Separate networks are trained for nominal and verbal predicates and for
// argument identification and classification. A predicate is routed to the
// verb pair when its predicted POS starts with 'V', to the noun pair when
// it starts with 'N', and to the verb pair otherwise.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "pathsrl/conll.hpp"
#include "pathsrl/dep_tree.hpp"
#include "pathsrl/dict.hpp"
#include "pathsrl/features.hpp"
#include "pathsrl/network.hpp"
#include "pathsrl/serialize.hpp"

namespace pathsrl {

enum class Task : std::uint8_t { Identification = 0, Classification = 1 };
enum class Category : std::uint8_t { Verb = 0, Noun = 1 };

inline Category route_category(const std::string& ppos) {
  if (!ppos.empty() && ppos[0] == 'N') return Category::Noun;
  return Category::Verb;
}

inline const char* task_name(Task t) {
  return t == Task::Identification ? "identification" : "classification";
}
inline const char* category_name(Category c) { return c == Category::Verb ? "verb" : "noun"; }

// Identification label indices are fixed: ARG first, NONE second.
inline constexpr int kArgLabel = 0;
inline constexpr int kNoneLabel = 1;

struct SrlModel {
  Task task = Task::Identification;
  Category category = Category::Verb;
  SrlNetwork net;
  Dict path_items;
  Dict features;
  Dict labels;
  bool ablate_path = false;
  bool ablate_binary = false;

  void save(std::ostream& out) const {
    BinaryWriter w(out);
    w.header(FileKind::SrlNetwork);
    w.u8(static_cast<std::uint8_t>(task));
    w.u8(static_cast<std::uint8_t>(category));
    w.u8(ablate_path ? 1 : 0);
    w.u8(ablate_binary ? 1 : 0);
    w.u64(static_cast<std::uint64_t>(net.spec.input_dim));
    w.u64(static_cast<std::uint64_t>(net.spec.embed_dim));
    w.u8(net.spec.use_forget_gate ? 1 : 0);
    w.u8(net.spec.memory_to_gates ? 1 : 0);
    w.u64(static_cast<std::uint64_t>(net.head.hidden_dim()));
    w.u64(static_cast<std::uint64_t>(net.head.n_classes()));
    w.u64(static_cast<std::uint64_t>(net.head.binary_dim()));
    w.dict(path_items);
    w.dict(features);
    w.dict(labels);
    // Parameter arrays in canonical order (see docs/model_format.md).
    w.mat(net.lstm.wxi);
    w.mat(net.lstm.wxf);
    w.mat(net.lstm.wxm);
    w.mat(net.lstm.wxo);
    w.mat(net.lstm.wmi);
    w.mat(net.lstm.wmf);
    w.mat(net.lstm.wmo);
    w.vec(net.lstm.bi);
    w.vec(net.lstm.bf);
    w.vec(net.lstm.bm);
    w.vec(net.lstm.bo);
    w.mat(net.head.wbh);
    w.mat(net.head.weh);
    w.vec(net.head.bh);
    w.mat(net.head.wes);
    w.mat(net.head.whs);
    w.vec(net.head.bs);
  }

  static SrlModel load(std::istream& in) {
    BinaryReader r(in);
    r.expect(FileKind::SrlNetwork);
    SrlModel m;
    m.task = static_cast<Task>(r.u8());
    m.category = static_cast<Category>(r.u8());
    m.ablate_path = r.u8() != 0;
    m.ablate_binary = r.u8() != 0;
    m.net.spec.input_dim = static_cast<int>(r.u64());
    m.net.spec.embed_dim = static_cast<int>(r.u64());
    m.net.spec.use_forget_gate = r.u8() != 0;
    m.net.spec.memory_to_gates = r.u8() != 0;
    const std::uint64_t hidden = r.u64();
    const std::uint64_t classes = r.u64();
    const std::uint64_t binary = r.u64();
    m.path_items = r.dict();
    m.features = r.dict();
    m.labels = r.dict();
    m.net.lstm.wxi = r.mat();
    m.net.lstm.wxf = r.mat();
    m.net.lstm.wxm = r.mat();
    m.net.lstm.wxo = r.mat();
    m.net.lstm.wmi = r.mat();
    m.net.lstm.wmf = r.mat();
    m.net.lstm.wmo = r.mat();
    m.net.lstm.bi = r.vec();
    m.net.lstm.bf = r.vec();
    m.net.lstm.bm = r.vec();
    m.net.lstm.bo = r.vec();
    m.net.head.wbh = r.mat();
    m.net.head.weh = r.mat();
    m.net.head.bh = r.vec();
    m.net.head.wes = r.mat();
    m.net.head.whs = r.mat();
    m.net.head.bs = r.vec();
    if (m.net.head.hidden_dim() != static_cast<int>(hidden) ||
        m.net.head.n_classes() != static_cast<int>(classes) ||
        m.net.head.binary_dim() != static_cast<int>(binary) ||
        m.net.lstm.wxi.rows() != m.net.spec.input_dim ||
        m.labels.size() != static_cast<int>(classes))
      throw ValidationError("model file dimensions are inconsistent");
    bool finite = true;
    for_each_param(m.net, [&finite](double& v) { finite = finite && std::isfinite(v); });
    if (!finite) throw ValidationError("model file contains non-finite parameters");
    return m;
  }
};

// Encoded inputs for one (predicate, candidate) pair under a model's
// frozen dictionaries.
struct EncodedPair {
  std::vector<int> path;
  std::vector<int> features;
};

inline EncodedPair encode_pair(const Sentence& sentence, const DepTree& tree, int predicate,
                               int candidate, SrlModel& model) {
  EncodedPair enc;
  const PathSequence seq = extract_path_sequence(tree, sentence, predicate, candidate);
  enc.path = encode_path_items(seq, model.path_items);
  enc.features = extract_binary_features(sentence, tree, predicate, candidate, model.features);
  return enc;
}

struct ArgScore {
  int token = 0;
  double prob = 0.0;
};

// Scores every token of the sentence as a candidate argument (including the
// predicate itself) and returns those at or above the threshold. Candidates
// in a different component of a forest are skipped.
inline std::vector<ArgScore> identify_arguments(const Sentence& sentence, const DepTree& tree,
                                                int predicate, SrlModel& model,
                                                double threshold) {
  std::vector<ArgScore> out;
  for (const Token& tok : sentence.tokens) {
    EncodedPair enc;
    try {
      enc = encode_pair(sentence, tree, predicate, tok.id, model);
    } catch (const NoPathError&) {
      continue;
    }
    TrainExample ex{enc.path, enc.features, 0};
    const NetForward fwd =
        net_forward(model.net, ex, nullptr, model.ablate_path, model.ablate_binary);
    const double p = fwd.head_cache.probs(kArgLabel);
    if (p >= threshold) out.push_back({tok.id, p});
  }
  return out;
}

struct ArgClassification {
  std::vector<std::pair<int, double>> ranked;  // (label index, prob), descending
  Vec embed;                                   // e_n, cached for the reranker
  Vec hidden;                                  // h, cached for the reranker
};

// Full label distribution, sorted descending (ties by label index).
inline ArgClassification classify_argument(const Sentence& sentence, const DepTree& tree,
                                           int predicate, int argument, SrlModel& model) {
  const EncodedPair enc = encode_pair(sentence, tree, predicate, argument, model);
  TrainExample ex{enc.path, enc.features, 0};
  const NetForward fwd =
      net_forward(model.net, ex, nullptr, model.ablate_path, model.ablate_binary);
  ArgClassification out;
  out.embed = fwd.embed;
  out.hidden = fwd.head_cache.h;
  for (int c = 0; c < model.labels.size(); ++c)
    out.ranked.emplace_back(c, fwd.head_cache.probs(c));
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

struct LabeledArg {
  int token = 0;
  int label = 0;       // index into the classification model's label dict
  double p_id = 0.0;   // identification probability
  double p_label = 0.0;
  Vec embed;           // classification-network caches
  Vec hidden;
};

struct LabeledStructure {
  int predicate = 0;
  Category category = Category::Verb;
  std::string sense;
  std::vector<LabeledArg> args;  // token-id ascending
};

}  // namespace pathsrl
