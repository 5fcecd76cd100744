// Full labeling pipeline and trained-bundle I/O.
//
// A bundle directory holds the four argument networks, the predicate
// classifiers, the optional reranker, and a key=value manifest. Labeling
// runs predicate identification (or copies gold predicate positions),
// sense disambiguation, argument identification, argument classification,
// and reranking, then fills the PRED/APRED columns.
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pathsrl/conll.hpp"
#include "pathsrl/predicate.hpp"
#include "pathsrl/reranker.hpp"
#include "pathsrl/srl.hpp"

namespace pathsrl {

struct Bundle {
  SrlModel id_verb, id_noun, cls_verb, cls_noun;
  PredicateModel predicates;
  std::optional<RerankerModel> reranker;
  std::uint64_t seed = 1;
  double threshold = 0.5;
  int reranker_n = 4;

  SrlModel& model(Task task, Category category) {
    if (task == Task::Identification)
      return category == Category::Verb ? id_verb : id_noun;
    return category == Category::Verb ? cls_verb : cls_noun;
  }
};

struct LabelOptions {
  bool gold_predicates = true;  // identification sits behind the flag
  bool use_reranker = true;
};

inline LabeledStructure local_structure(const Sentence& sentence, const DepTree& tree,
                                        int predicate, Category category,
                                        const std::string& sense, SrlModel& id_model,
                                        SrlModel& cls_model, double threshold) {
  LabeledStructure s;
  s.predicate = predicate;
  s.category = category;
  s.sense = sense;
  for (const ArgScore& cand : identify_arguments(sentence, tree, predicate, id_model, threshold)) {
    ArgClassification cls = classify_argument(sentence, tree, predicate, cand.token, cls_model);
    LabeledArg arg;
    arg.token = cand.token;
    arg.label = cls.ranked.front().first;
    arg.p_id = cand.prob;
    arg.p_label = cls.ranked.front().second;
    arg.embed = std::move(cls.embed);
    arg.hidden = std::move(cls.hidden);
    s.args.push_back(std::move(arg));
  }
  return s;
}

inline Sentence label_sentence(const Sentence& input, Bundle& bundle,
                               const LabelOptions& options) {
  const DepTree tree = build_tree(input);
  std::vector<int> predicates = options.gold_predicates
                                    ? input.predicate_tokens()
                                    : bundle.predicates.identify(input, tree);

  std::vector<LabeledStructure> structures;
  for (int pred : predicates) {
    const Category category = route_category(input.token(pred).ppos);
    const std::string sense = bundle.predicates.disambiguate(input, tree, pred);
    SrlModel& id_model = bundle.model(Task::Identification, category);
    SrlModel& cls_model = bundle.model(Task::Classification, category);
    if (options.use_reranker && bundle.reranker) {
      std::vector<CandidateStructure> nbest =
          nbest_structures(input, tree, pred, category, sense, id_model, cls_model,
                           bundle.reranker_n, bundle.threshold);
      const RerankFeatureSpace space = rerank_feature_space(bundle.cls_verb, bundle.cls_noun);
      structures.push_back(rerank(nbest, *bundle.reranker, space).structure);
    } else {
      structures.push_back(local_structure(input, tree, pred, category, sense, id_model,
                                           cls_model, bundle.threshold));
    }
  }

  Sentence out = input;
  for (Token& tok : out.tokens) {
    tok.fillpred = false;
    tok.pred.clear();
    tok.apreds.assign(structures.size(), "");
  }
  for (std::size_t p = 0; p < structures.size(); ++p) {
    const LabeledStructure& s = structures[p];
    Token& pred_tok = out.token(s.predicate);
    pred_tok.fillpred = true;
    pred_tok.pred = s.sense;
    SrlModel& cls_model = bundle.model(Task::Classification, s.category);
    for (const LabeledArg& arg : s.args)
      out.token(arg.token).apreds[p] = cls_model.labels.name(arg.label);
  }
  return out;
}

// Labeled F1 of a candidate structure against the gold arguments of its
// predicate, used to pick the positive training example per predicate.
inline double structure_f1(const CandidateStructure& cs,
                           const std::vector<std::pair<int, std::string>>& gold,
                           const SrlModel& cls_model) {
  std::size_t correct = 0;
  for (const LabeledArg& arg : cs.structure.args) {
    const std::string& label = cls_model.labels.name(arg.label);
    for (const auto& [token, gold_label] : gold)
      if (token == arg.token && gold_label == label) {
        ++correct;
        break;
      }
  }
  const std::size_t predicted = cs.structure.args.size();
  if (predicted == 0 && gold.empty()) return 1.0;
  if (correct == 0) return 0.0;
  const double p = static_cast<double>(correct) / static_cast<double>(predicted);
  const double r = static_cast<double>(correct) / static_cast<double>(gold.size());
  return 2.0 * p * r / (p + r);
}

struct RerankerTrainConfig {
  int n = 4;
  int epochs = 10;
  double alpha = 0.1;
};

inline RerankerModel train_reranker(const Corpus& corpus, Bundle& bundle,
                                    const RerankerTrainConfig& cfg, Rng& rng) {
  const RerankFeatureSpace space = rerank_feature_space(bundle.cls_verb, bundle.cls_noun);
  std::vector<SparseLogReg::Example> examples;
  for (const Sentence& sentence : corpus) {
    const DepTree tree = build_tree(sentence);
    const std::vector<int> predicates = sentence.predicate_tokens();
    for (std::size_t p = 0; p < predicates.size(); ++p) {
      const int pred = predicates[p];
      const Category category = route_category(sentence.token(pred).ppos);
      const std::string sense = bundle.predicates.disambiguate(sentence, tree, pred);
      SrlModel& id_model = bundle.model(Task::Identification, category);
      SrlModel& cls_model = bundle.model(Task::Classification, category);
      std::vector<CandidateStructure> nbest = nbest_structures(
          sentence, tree, pred, category, sense, id_model, cls_model, cfg.n, bundle.threshold);
      if (nbest.size() < 2) continue;
      std::vector<std::pair<int, std::string>> gold;
      for (const Token& tok : sentence.tokens)
        if (!tok.apreds[p].empty()) gold.emplace_back(tok.id, tok.apreds[p]);
      std::size_t best = 0;
      double best_f1 = -1.0;
      for (std::size_t i = 0; i < nbest.size(); ++i) {
        const double f1 = structure_f1(nbest[i], gold, cls_model);
        if (f1 > best_f1 ||
            (f1 == best_f1 && nbest[i].log_local > nbest[best].log_local)) {
          best = i;
          best_f1 = f1;
        }
      }
      for (std::size_t i = 0; i < nbest.size(); ++i)
        examples.push_back({rerank_features(nbest[i], space), i == best ? 1 : 0});
    }
  }
  RerankerModel model;
  model.total_dim = space.total();
  model.lr = SparseLogReg::train(examples, 2, space.total(), cfg.epochs, cfg.alpha, rng);
  return model;
}

// ---- bundle directory I/O ----

namespace detail {

inline std::map<std::string, std::string> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

}  // namespace detail

inline void save_bundle(const std::string& dir, const Bundle& bundle) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create bundle directory " + dir);
  auto save_model = [&](const SrlModel& m, const std::string& name) {
    std::ofstream out = open_for_write(dir + "/" + name);
    m.save(out);
  };
  save_model(bundle.id_verb, "identification_verb.model");
  save_model(bundle.id_noun, "identification_noun.model");
  save_model(bundle.cls_verb, "classification_verb.model");
  save_model(bundle.cls_noun, "classification_noun.model");
  {
    std::ofstream out = open_for_write(dir + "/predicates.model");
    bundle.predicates.save(out);
  }
  if (bundle.reranker) {
    std::ofstream out = open_for_write(dir + "/reranker.model");
    bundle.reranker->save(out);
  }
  std::ofstream manifest = open_for_write(dir + "/manifest.txt");
  manifest << "format=pathsrl-bundle\n";
  manifest << "version=" << kFormatVersion << "\n";
  manifest << "model.identification.verb=identification_verb.model\n";
  manifest << "model.identification.noun=identification_noun.model\n";
  manifest << "model.classification.verb=classification_verb.model\n";
  manifest << "model.classification.noun=classification_noun.model\n";
  manifest << "predicates=predicates.model\n";
  if (bundle.reranker) manifest << "reranker=reranker.model\n";
  manifest << "reranker_n=" << bundle.reranker_n << "\n";
  manifest << "threshold=" << bundle.threshold << "\n";
  manifest << "seed=" << bundle.seed << "\n";
  manifest << "ablate_path=" << (bundle.id_verb.ablate_path ? 1 : 0) << "\n";
  manifest << "ablate_binary=" << (bundle.id_verb.ablate_binary ? 1 : 0) << "\n";
}

inline Bundle load_bundle(const std::string& dir) {
  const auto kv = detail::read_manifest(dir + "/manifest.txt");
  const auto get = [&kv, &dir](const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end())
      throw ValidationError("bundle " + dir + " manifest is missing key " + key);
    return it->second;
  };
  if (get("format") != "pathsrl-bundle")
    throw ValidationError("not a bundle manifest: " + dir);
  if (get("version") != std::to_string(kFormatVersion))
    throw ValidationError("unsupported bundle version " + get("version"));
  Bundle bundle;
  auto load_model = [&dir](const std::string& name) {
    std::ifstream in = open_for_read(dir + "/" + name);
    return SrlModel::load(in);
  };
  bundle.id_verb = load_model(get("model.identification.verb"));
  bundle.id_noun = load_model(get("model.identification.noun"));
  bundle.cls_verb = load_model(get("model.classification.verb"));
  bundle.cls_noun = load_model(get("model.classification.noun"));
  {
    std::ifstream in = open_for_read(dir + "/predicates.model");
    bundle.predicates = PredicateModel::load(in);
  }
  if (kv.count("reranker")) {
    std::ifstream in = open_for_read(dir + "/" + kv.at("reranker"));
    bundle.reranker = RerankerModel::load(in);
  }
  bundle.reranker_n = std::stoi(get("reranker_n"));
  bundle.threshold = std::stod(get("threshold"));
  bundle.seed = std::stoull(get("seed"));
  return bundle;
}

}  // namespace pathsrl
