// LSTM cell over one-hot input sequences.
//
// Recurrence, with sigma the logistic function and m_0 = 0:
//   i_t = sigma([Wmi m_{t-1}] + Wxi x_t + bi)
//   f_t = sigma([Wmf m_{t-1}] + Wxf x_t + bf)      (all-ones without forget gate)
//   m_t = i_t . (Wxm x_t) + f_t . m_{t-1} + bm
//   o_t = sigma([Wmo m_t] + Wxo x_t + bo)
//   e_t = o_t . sigma(m_t)
// Bracketed memory-to-gate terms are dropped when disabled. The memory
// squashing is the logistic function, not tanh. Inputs are one-hot indices,
// so Wx* products reduce to row lookups. Only e_n, the state after the last
// item, is consumed downstream.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pathsrl/rng.hpp"

namespace pathsrl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline Vec logistic(const Vec& x) {
  return x.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

struct LstmSpec {
  int input_dim = 0;
  int embed_dim = 0;
  bool use_forget_gate = true;
  bool memory_to_gates = true;
};

// Gradient rows touched in an input-dim x embed_dim matrix; one entry per
// time step, so row ids may repeat.
struct RowGrads {
  std::vector<std::pair<int, Vec>> rows;

  Mat dense(int n_rows, int n_cols) const {
    Mat m = Mat::Zero(n_rows, n_cols);
    for (const auto& [r, g] : rows) m.row(r) += g.transpose();
    return m;
  }
};

struct LstmParams {
  // Input projections, one row per vocabulary item.
  Mat wxi, wxf, wxm, wxo;
  // Memory-to-gate projections (embed x embed); 0x0 when disabled.
  Mat wmi, wmf, wmo;
  Vec bi, bf, bm, bo;

  static LstmParams zeros(const LstmSpec& spec) {
    LstmParams p;
    const int in = spec.input_dim;
    const int e = spec.embed_dim;
    p.wxi = Mat::Zero(in, e);
    p.wxm = Mat::Zero(in, e);
    p.wxo = Mat::Zero(in, e);
    p.bi = Vec::Zero(e);
    p.bm = Vec::Zero(e);
    p.bo = Vec::Zero(e);
    if (spec.use_forget_gate) {
      p.wxf = Mat::Zero(in, e);
      p.bf = Vec::Zero(e);
    }
    if (spec.memory_to_gates) {
      p.wmi = Mat::Zero(e, e);
      p.wmo = Mat::Zero(e, e);
      if (spec.use_forget_gate) p.wmf = Mat::Zero(e, e);
    }
    return p;
  }

  // Uniform init in [-0.1, 0.1]; draw order is fixed and documented in the
  // model-format notes (wxi,wxf,wxm,wxo,wmi,wmf,wmo,bi,bf,bm,bo, row-major).
  static LstmParams init(const LstmSpec& spec, Rng& rng) {
    LstmParams p = zeros(spec);
    auto fill = [&rng](Mat& m) {
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(-0.1, 0.1);
    };
    auto fill_vec = [&rng](Vec& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.uniform(-0.1, 0.1);
    };
    fill(p.wxi);
    if (spec.use_forget_gate) fill(p.wxf);
    fill(p.wxm);
    fill(p.wxo);
    if (spec.memory_to_gates) {
      fill(p.wmi);
      if (spec.use_forget_gate) fill(p.wmf);
      fill(p.wmo);
    }
    fill_vec(p.bi);
    if (spec.use_forget_gate) fill_vec(p.bf);
    fill_vec(p.bm);
    fill_vec(p.bo);
    return p;
  }
};

struct LstmCache {
  std::vector<int> inputs;
  std::vector<Vec> gate_i;  // i_1..i_n
  std::vector<Vec> gate_f;  // f_1..f_n when the forget gate is on
  std::vector<Vec> memory;  // m_0..m_n
  Vec gate_o;               // o_n; earlier output gates are never consumed
  Vec embed;                // e_n
};

inline LstmCache lstm_forward(const LstmSpec& spec, const LstmParams& params,
                              std::span<const int> sequence) {
  if (sequence.empty()) throw std::invalid_argument("lstm_forward: empty sequence");
  LstmCache cache;
  cache.inputs.assign(sequence.begin(), sequence.end());
  cache.memory.push_back(Vec::Zero(spec.embed_dim));
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    const int x = sequence[t];
    if (x < 0 || x >= spec.input_dim)
      throw std::out_of_range("lstm_forward: input index " + std::to_string(x));
    const Vec& m_prev = cache.memory.back();

    Vec a_i = params.wxi.row(x).transpose() + params.bi;
    if (spec.memory_to_gates) a_i.noalias() += params.wmi * m_prev;
    const Vec i_t = logistic(a_i);

    Vec m_t = params.bm + i_t.cwiseProduct(params.wxm.row(x).transpose());
    if (spec.use_forget_gate) {
      Vec a_f = params.wxf.row(x).transpose() + params.bf;
      if (spec.memory_to_gates) a_f.noalias() += params.wmf * m_prev;
      const Vec f_t = logistic(a_f);
      m_t.noalias() += f_t.cwiseProduct(m_prev);
      cache.gate_f.push_back(f_t);
    } else {
      m_t.noalias() += m_prev;  // f_t = 1
    }
    cache.gate_i.push_back(i_t);
    cache.memory.push_back(m_t);

    if (t + 1 == sequence.size()) {
      Vec a_o = params.wxo.row(x).transpose() + params.bo;
      if (spec.memory_to_gates) a_o.noalias() += params.wmo * m_t;
      cache.gate_o = logistic(a_o);
      cache.embed = cache.gate_o.cwiseProduct(logistic(m_t));
    }
  }
  return cache;
}

struct LstmGrads {
  RowGrads wxi, wxf, wxm, wxo;
  Mat wmi, wmf, wmo;
  Vec bi, bf, bm, bo;
};

// Backpropagation through time for the gradient of a scalar loss with
// respect to every parameter, given dL/de_n. Output gates before the final
// step receive no gradient because their e_t values are unused.
inline LstmGrads lstm_backward(const LstmSpec& spec, const LstmParams& params,
                               const LstmCache& cache, const Vec& grad_embed) {
  if (grad_embed.size() != spec.embed_dim)
    throw std::invalid_argument("lstm_backward: gradient dimension mismatch");
  const int e = spec.embed_dim;
  const std::size_t n = cache.inputs.size();
  LstmGrads g;
  g.bi = Vec::Zero(e);
  g.bm = Vec::Zero(e);
  g.bo = Vec::Zero(e);
  if (spec.use_forget_gate) g.bf = Vec::Zero(e);
  if (spec.memory_to_gates) {
    g.wmi = Mat::Zero(e, e);
    g.wmo = Mat::Zero(e, e);
    if (spec.use_forget_gate) g.wmf = Mat::Zero(e, e);
  }

  const Vec& m_n = cache.memory[n];
  const Vec sig_m = logistic(m_n);
  const Vec grad_o = grad_embed.cwiseProduct(sig_m);
  const Vec grad_a_o = grad_o.cwiseProduct(cache.gate_o)
                           .cwiseProduct(Vec::Ones(e) - cache.gate_o);
  g.bo += grad_a_o;
  g.wxo.rows.emplace_back(cache.inputs[n - 1], grad_a_o);

  Vec grad_m = grad_embed.cwiseProduct(cache.gate_o)
                   .cwiseProduct(sig_m)
                   .cwiseProduct(Vec::Ones(e) - sig_m);
  if (spec.memory_to_gates) {
    g.wmo.noalias() += grad_a_o * m_n.transpose();
    grad_m.noalias() += params.wmo.transpose() * grad_a_o;
  }

  for (std::size_t t = n; t >= 1; --t) {
    const int x = cache.inputs[t - 1];
    const Vec& i_t = cache.gate_i[t - 1];
    const Vec& m_prev = cache.memory[t - 1];
    const Vec candidate = params.wxm.row(x).transpose();

    g.bm += grad_m;
    g.wxm.rows.emplace_back(x, grad_m.cwiseProduct(i_t));

    const Vec grad_a_i = grad_m.cwiseProduct(candidate)
                             .cwiseProduct(i_t)
                             .cwiseProduct(Vec::Ones(e) - i_t);
    g.bi += grad_a_i;
    g.wxi.rows.emplace_back(x, grad_a_i);

    Vec grad_m_prev;
    if (spec.use_forget_gate) {
      const Vec& f_t = cache.gate_f[t - 1];
      const Vec grad_a_f = grad_m.cwiseProduct(m_prev)
                               .cwiseProduct(f_t)
                               .cwiseProduct(Vec::Ones(e) - f_t);
      g.bf += grad_a_f;
      g.wxf.rows.emplace_back(x, grad_a_f);
      grad_m_prev = grad_m.cwiseProduct(f_t);
      if (spec.memory_to_gates) {
        g.wmf.noalias() += grad_a_f * m_prev.transpose();
        grad_m_prev.noalias() += params.wmf.transpose() * grad_a_f;
      }
    } else {
      grad_m_prev = grad_m;
    }
    if (spec.memory_to_gates) {
      g.wmi.noalias() += grad_a_i * m_prev.transpose();
      grad_m_prev.noalias() += params.wmi.transpose() * grad_a_i;
    }
    grad_m = std::move(grad_m_prev);
  }
  return g;
}

}  // namespace pathsrl
