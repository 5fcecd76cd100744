// Training driver: builds dictionaries and encoded example sets for the
// four argument networks, runs SGD with best-on-dev retention, then trains
// the predicate classifiers and the reranker.
//
// The training log is key=value lines, one per epoch and network:
//   net=identification.verb epoch=3 loss=0.412 dev_f1=91.30
// Identification dev F1 is the binary F1 of the ARG class at 0.5;
// classification dev F1 is label accuracy. All randomness is derived from
// the run seed, so equal seeds give bit-identical bundles.
#pragma once

#include <future>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pathsrl/config.hpp"
#include "pathsrl/eval.hpp"
#include "pathsrl/pipeline.hpp"

namespace pathsrl {

namespace detail {

struct RawExample {
  PathSequence path;
  std::vector<std::string> feature_keys;
  std::string gold;
};

inline std::vector<RawExample> collect_examples(const Corpus& corpus,
                                                const std::vector<DepTree>& trees, Task task,
                                                Category category) {
  std::vector<RawExample> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Sentence& s = corpus[i];
    const DepTree& tree = trees[i];
    const std::vector<int> preds = s.predicate_tokens();
    for (std::size_t p = 0; p < preds.size(); ++p) {
      const int pred = preds[p];
      if (route_category(s.token(pred).ppos) != category) continue;
      for (const Token& tok : s.tokens) {
        const bool is_arg = !tok.apreds[p].empty();
        if (task == Task::Classification && !is_arg) continue;
        RawExample ex;
        try {
          ex.path = extract_path_sequence(tree, s, pred, tok.id);
        } catch (const NoPathError&) {
          continue;
        }
        ex.feature_keys = binary_feature_keys(s, tree, pred, tok.id);
        ex.gold = task == Task::Classification ? tok.apreds[p]
                                               : (is_arg ? "ARG" : "NONE");
        out.push_back(std::move(ex));
      }
    }
  }
  return out;
}

// Word-form path items seen fewer than twice in training map to the
// reserved unknown entry, bounding the input vocabulary.
inline constexpr long kPathWordCutoff = 2;

inline void build_dicts(SrlModel& model, const std::vector<RawExample>& examples) {
  std::map<std::string, long> word_counts;
  for (const RawExample& ex : examples)
    for (const PathItem& item : ex.path.items)
      if (item.kind == PathItemKind::WordForm) ++word_counts[path_item_key(item)];
  model.path_items = make_path_dict();
  for (const RawExample& ex : examples)
    for (const PathItem& item : ex.path.items) {
      const std::string key = path_item_key(item);
      if (item.kind == PathItemKind::WordForm && word_counts[key] < kPathWordCutoff) continue;
      model.path_items.add(key);
    }
  model.path_items.freeze();

  for (const RawExample& ex : examples)
    for (const std::string& key : ex.feature_keys) model.features.add(key);
  model.features.freeze();

  if (model.task == Task::Identification) {
    model.labels.add("ARG");
    model.labels.add("NONE");
  } else {
    for (const RawExample& ex : examples) model.labels.add(ex.gold);
  }
  model.labels.freeze();
}

inline std::vector<TrainExample> encode_examples(SrlModel& model,
                                                 const std::vector<RawExample>& raw) {
  std::vector<TrainExample> out;
  out.reserve(raw.size());
  for (const RawExample& ex : raw) {
    TrainExample enc;
    enc.path = encode_path_items(ex.path, model.path_items);
    for (const std::string& key : ex.feature_keys) {
      const int id = model.features.lookup(key);
      if (id >= 0) enc.features.push_back(id);
    }
    std::sort(enc.features.begin(), enc.features.end());
    enc.features.erase(std::unique(enc.features.begin(), enc.features.end()),
                       enc.features.end());
    const int label = model.labels.lookup(ex.gold);
    if (label < 0) continue;  // dev-only label unseen in training
    enc.gold = label;
    out.push_back(std::move(enc));
  }
  return out;
}

// Binary F1 of the ARG class for identification; accuracy for
// classification. Returned in percent.
inline double dev_metric(const SrlModel& model, const std::vector<TrainExample>& dev) {
  if (dev.empty()) return 0.0;
  if (model.task == Task::Identification) {
    long tp = 0, fp = 0, fn = 0;
    for (const TrainExample& ex : dev) {
      const NetForward fwd =
          net_forward(model.net, ex, nullptr, model.ablate_path, model.ablate_binary);
      const bool predicted = fwd.head_cache.probs(kArgLabel) >= 0.5;
      const bool gold = ex.gold == kArgLabel;
      if (predicted && gold) ++tp;
      if (predicted && !gold) ++fp;
      if (!predicted && gold) ++fn;
    }
    if (tp == 0) return 0.0;
    const double p = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double r = static_cast<double>(tp) / static_cast<double>(tp + fn);
    return 100.0 * 2.0 * p * r / (p + r);
  }
  long correct = 0;
  for (const TrainExample& ex : dev) {
    const NetForward fwd =
        net_forward(model.net, ex, nullptr, model.ablate_path, model.ablate_binary);
    int best = 0;
    for (int c = 1; c < model.labels.size(); ++c)
      if (fwd.head_cache.probs(c) > fwd.head_cache.probs(best)) best = c;
    if (best == ex.gold) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(dev.size());
}

inline std::string format_metric(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << v;
  return out.str();
}

}  // namespace detail

// Trains one argument network; returns its training-log lines.
inline std::string train_net(SrlModel& model, const Corpus& train_corpus,
                             const std::vector<DepTree>& train_trees, const Corpus& dev_corpus,
                             const std::vector<DepTree>& dev_trees, const NetConfig& net_cfg,
                             const RunConfig& run_cfg, std::uint64_t net_seed) {
  const auto raw_train =
      detail::collect_examples(train_corpus, train_trees, model.task, model.category);
  detail::build_dicts(model, raw_train);
  const std::vector<TrainExample> train = detail::encode_examples(model, raw_train);
  const auto raw_dev =
      detail::collect_examples(dev_corpus, dev_trees, model.task, model.category);
  const std::vector<TrainExample> dev = detail::encode_examples(model, raw_dev);

  LstmSpec spec;
  spec.input_dim = model.path_items.size();
  spec.embed_dim = net_cfg.embed_dim;
  spec.use_forget_gate = net_cfg.use_forget_gate;
  spec.memory_to_gates = net_cfg.memory_to_gates;

  Rng rng(net_seed);
  model.net = SrlNetwork::init(spec, model.features.size(),
                               net_cfg.hidden_dim, model.labels.size(), rng);
  model.ablate_path = run_cfg.ablate_path;
  model.ablate_binary = run_cfg.ablate_binary;

  TrainConfig cfg;
  cfg.alpha = net_cfg.alpha;
  cfg.dropout = net_cfg.dropout;
  cfg.epochs = run_cfg.epochs;
  cfg.disable_path_embeddings = run_cfg.ablate_path;
  cfg.disable_binary_features = run_cfg.ablate_binary;

  const std::string name = net_name(net_index(model.task, model.category));
  std::ostringstream log;
  SrlNetwork best_net = model.net;
  double best_metric = -1.0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const double loss = train_epoch(model.net, train, cfg, rng);
    const double metric = dev.empty() ? -loss : detail::dev_metric(model, dev);
    log << "net=" << name << " epoch=" << epoch
        << " loss=" << detail::format_metric(loss)
        << " dev_f1=" << detail::format_metric(dev.empty() ? 0.0 : metric) << "\n";
    if (metric > best_metric) {
      best_metric = metric;
      best_net = model.net;
    }
  }
  model.net = best_net;
  log << "net=" << name << " examples=" << train.size()
      << " path_vocab=" << model.path_items.size()
      << " features=" << model.features.size() << " labels=" << model.labels.size()
      << " best_dev_f1=" << detail::format_metric(best_metric < 0 ? 0.0 : best_metric)
      << "\n";
  return log.str();
}

// Labeled F1 of the full pipeline over a corpus (gold predicate positions).
inline double evaluate_pipeline(Bundle& bundle, const Corpus& corpus, bool use_reranker) {
  Corpus predicted;
  predicted.reserve(corpus.size());
  LabelOptions options;
  options.gold_predicates = true;
  options.use_reranker = use_reranker;
  for (const Sentence& s : corpus) predicted.push_back(label_sentence(s, bundle, options));
  return score(corpus, predicted).f1();
}

struct TrainResult {
  Bundle bundle;
  std::string log;
};

inline TrainResult train_bundle(const Corpus& train_corpus, const Corpus& dev_corpus,
                                const RunConfig& config) {
  std::vector<DepTree> train_trees, dev_trees;
  train_trees.reserve(train_corpus.size());
  for (const Sentence& s : train_corpus) train_trees.push_back(build_tree(s));
  dev_trees.reserve(dev_corpus.size());
  for (const Sentence& s : dev_corpus) dev_trees.push_back(build_tree(s));

  TrainResult result;
  result.bundle.seed = config.seed;
  result.bundle.threshold = config.threshold;
  result.bundle.reranker_n = config.reranker_n;

  const Task tasks[4] = {Task::Identification, Task::Identification, Task::Classification,
                         Task::Classification};
  const Category categories[4] = {Category::Verb, Category::Noun, Category::Verb,
                                  Category::Noun};
  std::array<std::string, 4> logs;
  auto run_one = [&](int i) {
    SrlModel& model = result.bundle.model(tasks[i], categories[i]);
    model.task = tasks[i];
    model.category = categories[i];
    logs[static_cast<std::size_t>(i)] = train_net(
        model, train_corpus, train_trees, dev_corpus, dev_trees,
        config.nets[static_cast<std::size_t>(i)], config,
        derive_seed(config.seed, static_cast<std::uint64_t>(i)));
  };
  if (config.jobs > 1) {
    std::vector<std::future<void>> futures;
    for (int i = 0; i < 4; ++i) futures.push_back(std::async(std::launch::async, run_one, i));
    for (auto& f : futures) f.get();
  } else {
    for (int i = 0; i < 4; ++i) run_one(i);
  }
  std::ostringstream log;
  for (const std::string& part : logs) log << part;

  Rng pred_rng(derive_seed(config.seed, 10));
  PredicateTrainConfig pred_cfg{config.predicate_epochs, config.predicate_alpha};
  result.bundle.predicates = train_predicate_model(train_corpus, pred_cfg, pred_rng);
  log << "predicates lemmas=" << result.bundle.predicates.sense_table.size()
      << " features=" << result.bundle.predicates.features.size() << "\n";

  Rng rerank_rng(derive_seed(config.seed, 11));
  RerankerTrainConfig rerank_cfg{config.reranker_n, config.reranker_epochs,
                                 config.reranker_alpha};
  result.bundle.reranker = train_reranker(train_corpus, result.bundle, rerank_cfg, rerank_rng);
  log << "reranker dim=" << result.bundle.reranker->total_dim << "\n";

  const double dev_local = evaluate_pipeline(result.bundle, dev_corpus, false);
  const double dev_full = evaluate_pipeline(result.bundle, dev_corpus, true);
  log << "pipeline dev_f1_local=" << detail::format_metric(dev_local)
      << " dev_f1=" << detail::format_metric(dev_full) << "\n";
  result.log = log.str();
  return result;
}

}  // namespace pathsrl
