// Joint path-embedding / binary-feature network.
//
// A hidden rectified layer combines the path embedding e_n with a sparse
// binary feature set B, and a softmax layer scores the classes:
//   h   = max(0, Wbh B + Weh e_n + bh)
//   s_c = softmax_c(Wes_c e_n + Whs_c h + bs_c)
// Training is per-example SGD on the cross-entropy -log s_gold with
// inverted dropout on h and e_n where they enter the output layer.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "pathsrl/lstm.hpp"
#include "pathsrl/rng.hpp"

namespace pathsrl {

struct DenseHead {
  Mat wbh;  // binary_dim x hidden, one row per feature
  Mat weh;  // embed x hidden
  Vec bh;   // hidden
  Mat wes;  // classes x embed
  Mat whs;  // classes x hidden
  Vec bs;   // classes

  int hidden_dim() const { return static_cast<int>(bh.size()); }
  int n_classes() const { return static_cast<int>(bs.size()); }
  int binary_dim() const { return static_cast<int>(wbh.rows()); }

  static DenseHead zeros(int binary_dim, int embed_dim, int hidden_dim, int classes) {
    DenseHead h;
    h.wbh = Mat::Zero(binary_dim, hidden_dim);
    h.weh = Mat::Zero(embed_dim, hidden_dim);
    h.bh = Vec::Zero(hidden_dim);
    h.wes = Mat::Zero(classes, embed_dim);
    h.whs = Mat::Zero(classes, hidden_dim);
    h.bs = Vec::Zero(classes);
    return h;
  }

  static DenseHead init(int binary_dim, int embed_dim, int hidden_dim, int classes,
                        Rng& rng) {
    DenseHead h = zeros(binary_dim, embed_dim, hidden_dim, classes);
    for (Mat* m : {&h.wbh, &h.weh, &h.wes, &h.whs})
      for (Eigen::Index r = 0; r < m->rows(); ++r)
        for (Eigen::Index c = 0; c < m->cols(); ++c) (*m)(r, c) = rng.uniform(-0.1, 0.1);
    for (Vec* v : {&h.bh, &h.bs})
      for (Eigen::Index i = 0; i < v->size(); ++i) (*v)(i) = rng.uniform(-0.1, 0.1);
    return h;
  }
};

// Inverted-dropout masks: entries are 0 or 1/(1-d).
struct DropoutMasks {
  Vec h_scale;
  Vec e_scale;

  static DropoutMasks draw(int hidden_dim, int embed_dim, double rate, Rng& rng) {
    DropoutMasks m;
    const double keep_scale = 1.0 / (1.0 - rate);
    m.h_scale = Vec::Zero(hidden_dim);
    for (int i = 0; i < hidden_dim; ++i)
      m.h_scale(i) = rng.bernoulli(rate) ? 0.0 : keep_scale;
    m.e_scale = Vec::Zero(embed_dim);
    for (int i = 0; i < embed_dim; ++i)
      m.e_scale(i) = rng.bernoulli(rate) ? 0.0 : keep_scale;
    return m;
  }
};

inline Vec softmax(const Vec& logits) {
  const double m = logits.maxCoeff();
  Vec exps = (logits.array() - m).exp();
  return exps / exps.sum();
}

struct HeadCache {
  Vec h_pre;
  Vec h;
  Vec h_out;  // after dropout (training) or h itself
  Vec e_out;  // embedding after dropout where it feeds the output layer
  Vec probs;
};

inline HeadCache head_forward(const DenseHead& head, const Vec& embed,
                              const std::vector<int>& features,
                              const DropoutMasks* masks = nullptr) {
  HeadCache cache;
  cache.h_pre = head.weh.transpose() * embed + head.bh;
  for (int f : features) {
    if (f < 0 || f >= head.binary_dim())
      throw std::out_of_range("head_forward: feature index " + std::to_string(f));
    cache.h_pre += head.wbh.row(f).transpose();
  }
  cache.h = cache.h_pre.cwiseMax(0.0);
  cache.h_out = masks ? Vec(cache.h.cwiseProduct(masks->h_scale)) : cache.h;
  cache.e_out = masks ? Vec(embed.cwiseProduct(masks->e_scale)) : embed;
  const Vec logits = head.wes * cache.e_out + head.whs * cache.h_out + head.bs;
  cache.probs = softmax(logits);
  return cache;
}

struct HeadGrads {
  RowGrads wbh;
  Mat weh;
  Vec bh;
  Mat wes;
  Vec bs;
  Mat whs;
};

// Returns dL/de_n alongside the parameter gradients. grad_logits is
// s - onehot(gold) for cross-entropy.
inline Vec head_backward(const DenseHead& head, const Vec& embed,
                         const std::vector<int>& features, const HeadCache& cache,
                         const Vec& grad_logits, const DropoutMasks* masks,
                         HeadGrads& g) {
  g.wes = grad_logits * cache.e_out.transpose();
  g.whs = grad_logits * cache.h_out.transpose();
  g.bs = grad_logits;

  Vec grad_h = head.whs.transpose() * grad_logits;
  if (masks) grad_h = grad_h.cwiseProduct(masks->h_scale);
  const Vec grad_h_pre =
      grad_h.cwiseProduct(cache.h_pre.unaryExpr([](double v) { return v > 0 ? 1.0 : 0.0; }));
  g.bh = grad_h_pre;
  g.weh = embed * grad_h_pre.transpose();
  for (int f : features) g.wbh.rows.emplace_back(f, grad_h_pre);

  Vec grad_e_out = head.wes.transpose() * grad_logits;
  if (masks) grad_e_out = grad_e_out.cwiseProduct(masks->e_scale);
  return head.weh * grad_h_pre + grad_e_out;
}

struct SrlNetwork {
  LstmSpec spec;
  LstmParams lstm;
  DenseHead head;

  static SrlNetwork init(const LstmSpec& spec, int binary_dim, int hidden_dim,
                         int classes, Rng& rng) {
    SrlNetwork net;
    net.spec = spec;
    net.lstm = LstmParams::init(spec, rng);
    net.head = DenseHead::init(binary_dim, spec.embed_dim, hidden_dim, classes, rng);
    return net;
  }
};

struct TrainConfig {
  double alpha = 0.01;
  double dropout = 0.0;
  int epochs = 1;
  std::uint64_t seed = 1;
  bool disable_path_embeddings = false;
  bool disable_binary_features = false;
};

// Soft enforcement of the documented search ranges.
inline std::vector<std::string> config_warnings(const TrainConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.alpha < 0.00006 || cfg.alpha > 0.3)
    out.push_back("alpha " + std::to_string(cfg.alpha) +
                  " outside the usual range [0.00006, 0.3]");
  if (cfg.dropout < 0.0 || cfg.dropout > 0.5)
    out.push_back("dropout " + std::to_string(cfg.dropout) +
                  " outside the usual range [0.0, 0.5]");
  return out;
}

struct TrainExample {
  std::vector<int> path;      // encoded path items
  std::vector<int> features;  // sorted binary feature indices
  int gold = 0;
};

struct NetForward {
  LstmCache lstm_cache;
  HeadCache head_cache;
  Vec embed;
  bool used_lstm = false;
};

inline NetForward net_forward(const SrlNetwork& net, const TrainExample& ex,
                              const DropoutMasks* masks, bool disable_path,
                              bool disable_binary) {
  static const std::vector<int> kNoFeatures;
  NetForward fwd;
  if (disable_path || ex.path.empty()) {
    fwd.embed = Vec::Zero(net.spec.embed_dim);
  } else {
    fwd.lstm_cache = lstm_forward(net.spec, net.lstm, ex.path);
    fwd.embed = fwd.lstm_cache.embed;
    fwd.used_lstm = true;
  }
  const std::vector<int>& feats = disable_binary ? kNoFeatures : ex.features;
  fwd.head_cache = head_forward(net.head, fwd.embed, feats, masks);
  return fwd;
}

inline double cross_entropy(const Vec& probs, int gold) {
  return -std::log(probs(gold));
}

struct NetGrads {
  LstmGrads lstm;
  HeadGrads head;
  bool has_lstm = false;
};

inline NetGrads net_backward(const SrlNetwork& net, const TrainExample& ex,
                             const NetForward& fwd, int gold, const DropoutMasks* masks,
                             bool disable_binary) {
  static const std::vector<int> kNoFeatures;
  Vec grad_logits = fwd.head_cache.probs;
  grad_logits(gold) -= 1.0;
  NetGrads g;
  const std::vector<int>& feats = disable_binary ? kNoFeatures : ex.features;
  const Vec grad_embed =
      head_backward(net.head, fwd.embed, feats, fwd.head_cache, grad_logits, masks, g.head);
  if (fwd.used_lstm) {
    g.lstm = lstm_backward(net.spec, net.lstm, fwd.lstm_cache, grad_embed);
    g.has_lstm = true;
  }
  return g;
}

inline void apply_sgd(SrlNetwork& net, const NetGrads& g, double alpha) {
  if (g.has_lstm) {
    const LstmGrads& lg = g.lstm;
    for (const auto& [r, v] : lg.wxi.rows) net.lstm.wxi.row(r) -= alpha * v.transpose();
    for (const auto& [r, v] : lg.wxf.rows) net.lstm.wxf.row(r) -= alpha * v.transpose();
    for (const auto& [r, v] : lg.wxm.rows) net.lstm.wxm.row(r) -= alpha * v.transpose();
    for (const auto& [r, v] : lg.wxo.rows) net.lstm.wxo.row(r) -= alpha * v.transpose();
    if (net.spec.memory_to_gates) {
      net.lstm.wmi -= alpha * lg.wmi;
      net.lstm.wmo -= alpha * lg.wmo;
      if (net.spec.use_forget_gate) net.lstm.wmf -= alpha * lg.wmf;
    }
    net.lstm.bi -= alpha * lg.bi;
    if (net.spec.use_forget_gate) net.lstm.bf -= alpha * lg.bf;
    net.lstm.bm -= alpha * lg.bm;
    net.lstm.bo -= alpha * lg.bo;
  }
  const HeadGrads& hg = g.head;
  for (const auto& [r, v] : hg.wbh.rows) net.head.wbh.row(r) -= alpha * v.transpose();
  net.head.weh -= alpha * hg.weh;
  net.head.bh -= alpha * hg.bh;
  net.head.wes -= alpha * hg.wes;
  net.head.whs -= alpha * hg.whs;
  net.head.bs -= alpha * hg.bs;
}

// One pass of per-example SGD in a seeded shuffle order; returns mean loss.
inline double train_epoch(SrlNetwork& net, const std::vector<TrainExample>& examples,
                          const TrainConfig& cfg, Rng& rng) {
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);
  double total = 0.0;
  for (std::size_t idx : order) {
    const TrainExample& ex = examples[idx];
    DropoutMasks masks;
    const bool use_dropout = cfg.dropout > 0.0;
    if (use_dropout)
      masks = DropoutMasks::draw(net.head.hidden_dim(), net.spec.embed_dim, cfg.dropout, rng);
    const NetForward fwd = net_forward(net, ex, use_dropout ? &masks : nullptr,
                                       cfg.disable_path_embeddings,
                                       cfg.disable_binary_features);
    total += cross_entropy(fwd.head_cache.probs, ex.gold);
    const NetGrads g = net_backward(net, ex, fwd, ex.gold, use_dropout ? &masks : nullptr,
                                    cfg.disable_binary_features);
    apply_sgd(net, g, cfg.alpha);
  }
  return examples.empty() ? 0.0 : total / static_cast<double>(examples.size());
}

// Canonical parameter order (also the serialization order): lstm wxi, wxf,
// wxm, wxo, wmi, wmf, wmo, bi, bf, bm, bo, then head wbh, weh, bh, wes, whs,
// bs; matrices row-major. Absent matrices are skipped.
template <typename Fn>
void for_each_param(SrlNetwork& net, Fn&& fn) {
  auto walk_mat = [&fn](Mat& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) fn(m(r, c));
  };
  auto walk_vec = [&fn](Vec& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) fn(v(i));
  };
  walk_mat(net.lstm.wxi);
  walk_mat(net.lstm.wxf);
  walk_mat(net.lstm.wxm);
  walk_mat(net.lstm.wxo);
  walk_mat(net.lstm.wmi);
  walk_mat(net.lstm.wmf);
  walk_mat(net.lstm.wmo);
  walk_vec(net.lstm.bi);
  walk_vec(net.lstm.bf);
  walk_vec(net.lstm.bm);
  walk_vec(net.lstm.bo);
  walk_mat(net.head.wbh);
  walk_mat(net.head.weh);
  walk_vec(net.head.bh);
  walk_mat(net.head.wes);
  walk_mat(net.head.whs);
  walk_vec(net.head.bs);
}

// Analytic gradients flattened in canonical parameter order.
inline std::vector<double> flatten_grads(const SrlNetwork& net, const NetGrads& g) {
  SrlNetwork dense;
  dense.spec = net.spec;
  dense.lstm = LstmParams::zeros(net.spec);
  dense.head = DenseHead::zeros(net.head.binary_dim(), net.spec.embed_dim,
                                net.head.hidden_dim(), net.head.n_classes());
  if (g.has_lstm) {
    dense.lstm.wxi = g.lstm.wxi.dense(net.spec.input_dim, net.spec.embed_dim);
    if (net.spec.use_forget_gate)
      dense.lstm.wxf = g.lstm.wxf.dense(net.spec.input_dim, net.spec.embed_dim);
    dense.lstm.wxm = g.lstm.wxm.dense(net.spec.input_dim, net.spec.embed_dim);
    dense.lstm.wxo = g.lstm.wxo.dense(net.spec.input_dim, net.spec.embed_dim);
    if (net.spec.memory_to_gates) {
      dense.lstm.wmi = g.lstm.wmi;
      dense.lstm.wmo = g.lstm.wmo;
      if (net.spec.use_forget_gate) dense.lstm.wmf = g.lstm.wmf;
    }
    dense.lstm.bi = g.lstm.bi;
    if (net.spec.use_forget_gate) dense.lstm.bf = g.lstm.bf;
    dense.lstm.bm = g.lstm.bm;
    dense.lstm.bo = g.lstm.bo;
  }
  dense.head.wbh = g.head.wbh.dense(net.head.binary_dim(), net.head.hidden_dim());
  dense.head.weh = g.head.weh;
  dense.head.bh = g.head.bh;
  dense.head.wes = g.head.wes;
  dense.head.whs = g.head.whs;
  dense.head.bs = g.head.bs;
  std::vector<double> out;
  for_each_param(dense, [&out](double& v) { out.push_back(v); });
  return out;
}

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t n_params = 0;
};

// Central finite differences against the analytic gradients of the full
// example loss. The denominator floors at 1e-4, so near-zero gradients are
// held to an absolute tolerance instead of a meaningless ratio.
inline GradCheckReport grad_check(SrlNetwork& net, const TrainExample& ex,
                                  const TrainConfig& cfg, double epsilon = 1e-5) {
  const NetForward fwd = net_forward(net, ex, nullptr, cfg.disable_path_embeddings,
                                     cfg.disable_binary_features);
  const NetGrads grads = net_backward(net, ex, fwd, ex.gold, nullptr,
                                      cfg.disable_binary_features);
  const std::vector<double> analytic = flatten_grads(net, grads);

  auto loss_at = [&net, &ex, &cfg]() {
    const NetForward f = net_forward(net, ex, nullptr, cfg.disable_path_embeddings,
                                     cfg.disable_binary_features);
    return cross_entropy(f.head_cache.probs, ex.gold);
  };

  GradCheckReport report;
  report.n_params = analytic.size();
  std::size_t k = 0;
  for_each_param(net, [&](double& param) {
    const double saved = param;
    param = saved + epsilon;
    const double up = loss_at();
    param = saved - epsilon;
    const double down = loss_at();
    param = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double a = analytic[k++];
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-4});
    const double err = std::abs(a - numeric) / denom;
    report.max_relative_error = std::max(report.max_relative_error, err);
  });
  return report;
}

}  // namespace pathsrl
