#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "oracles.hpp"
#include "pathsrl/lstm.hpp"
#include "pathsrl/network.hpp"

using namespace pathsrl;

namespace {

TrainExample random_example(int input_dim, int binary_dim, int classes, int steps,
                            Rng& rng) {
  TrainExample ex;
  for (int t = 0; t < steps; ++t)
    ex.path.push_back(static_cast<int>(rng.uniform_int(0, input_dim - 1)));
  for (int f = 0; f < binary_dim; ++f)
    if (rng.bernoulli(0.3)) ex.features.push_back(f);
  ex.gold = static_cast<int>(rng.uniform_int(0, classes - 1));
  return ex;
}

const bool kGateConfigs[4][2] = {{false, false}, {false, true}, {true, false}, {true, true}};

}  // namespace

TEST_CASE("zero parameters, one step, forget gate on") {
  LstmSpec spec{3, 4, true, true};
  LstmParams params = LstmParams::zeros(spec);
  const std::vector<int> seq = {1};
  const LstmCache cache = lstm_forward(spec, params, seq);
  // i = f = o = 0.5, m = 0.5*0 + 0.5*0 + 0 = 0, e = 0.5 * sigma(0) = 0.25
  for (int k = 0; k < 4; ++k) {
    CHECK(cache.gate_i[0](k) == Catch::Approx(0.5));
    CHECK(cache.gate_f[0](k) == Catch::Approx(0.5));
    CHECK(cache.memory[1](k) == Catch::Approx(0.0));
    CHECK(cache.embed(k) == Catch::Approx(0.25));
  }
}

TEST_CASE("zero parameters, forget gate off") {
  LstmSpec spec{3, 4, false, false};
  LstmParams params = LstmParams::zeros(spec);
  const std::vector<int> seq = {2};
  const LstmCache cache = lstm_forward(spec, params, seq);
  for (int k = 0; k < 4; ++k) {
    CHECK(cache.memory[1](k) == Catch::Approx(0.0));
    CHECK(cache.embed(k) == Catch::Approx(0.25));
  }
}

TEST_CASE("forward matches the scalar oracle in all gate configurations") {
  Rng rng(7);
  for (const auto& gates : kGateConfigs) {
    LstmSpec spec{12, 6, gates[0], gates[1]};
    LstmParams params = LstmParams::init(spec, rng);
    const std::vector<int> seq = {3, 1, 7, 0, 11, 5};
    const LstmCache cache = lstm_forward(spec, params, seq);
    const oracles::ScalarLstm scalar = oracles::ScalarLstm::from(spec, params);
    const std::vector<double> expected = scalar.embed(seq);
    for (int k = 0; k < spec.embed_dim; ++k)
      REQUIRE(std::abs(cache.embed(k) - expected[static_cast<std::size_t>(k)]) < 1e-12);
  }
}

TEST_CASE("empty sequence and bad index are rejected") {
  LstmSpec spec{3, 2, true, true};
  LstmParams params = LstmParams::zeros(spec);
  CHECK_THROWS_AS(lstm_forward(spec, params, std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS(lstm_forward(spec, params, std::vector<int>{3}), std::out_of_range);
}

TEST_CASE("head with zero parameters is uniform") {
  DenseHead head = DenseHead::zeros(5, 3, 4, 3);
  const Vec e = Vec::Zero(3);
  const HeadCache cache = head_forward(head, e, {0, 2});
  CHECK(cache.h.isZero());
  for (int c = 0; c < 3; ++c) CHECK(cache.probs(c) == Catch::Approx(1.0 / 3));
}

TEST_CASE("identical logits give a uniform distribution") {
  DenseHead head = DenseHead::zeros(2, 2, 2, 4);
  head.bs = Vec::Constant(4, 2.5);
  const HeadCache cache = head_forward(head, Vec::Zero(2), {});
  for (int c = 0; c < 4; ++c) CHECK(cache.probs(c) == Catch::Approx(0.25));
}

TEST_CASE("head probabilities match the scalar oracle") {
  Rng rng(19);
  DenseHead head = DenseHead::init(8, 5, 7, 4, rng);
  Vec e(5);
  for (int i = 0; i < 5; ++i) e(i) = rng.uniform(-1.0, 1.0);
  const std::vector<int> feats = {1, 4, 6};
  const HeadCache cache = head_forward(head, e, feats);
  const std::vector<double> expected =
      oracles::scalar_head_probs(head, std::vector<double>(e.data(), e.data() + 5), feats);
  double sum = 0.0;
  for (int c = 0; c < 4; ++c) {
    REQUIRE(std::abs(cache.probs(c) - expected[static_cast<std::size_t>(c)]) < 1e-12);
    CHECK(cache.probs(c) > 0.0);
    CHECK(cache.probs(c) < 1.0);
    sum += cache.probs(c);
  }
  CHECK(std::abs(sum - 1.0) <= 1e-9);
}

TEST_CASE("analytic gradients match finite differences in all configurations") {
  Rng rng(23);
  for (const auto& gates : kGateConfigs) {
    LstmSpec spec{9, 4, gates[0], gates[1]};
    for (int rep = 0; rep < 3; ++rep) {
      SrlNetwork net = SrlNetwork::init(spec, 6, 5, 3, rng);
      const TrainExample ex = random_example(9, 6, 3, 5, rng);
      TrainConfig cfg;
      const GradCheckReport report = grad_check(net, ex, cfg);
      INFO("forget=" << gates[0] << " m2g=" << gates[1]);
      CHECK(report.max_relative_error <= 1e-4);
    }
  }
}

TEST_CASE("zero upstream gradient produces zero parameter gradients") {
  Rng rng(29);
  LstmSpec spec{6, 3, true, true};
  LstmParams params = LstmParams::init(spec, rng);
  const std::vector<int> seq = {0, 3, 5};
  const LstmCache cache = lstm_forward(spec, params, seq);
  const LstmGrads g = lstm_backward(spec, params, cache, Vec::Zero(3));
  CHECK(g.bi.isZero());
  CHECK(g.bf.isZero());
  CHECK(g.bm.isZero());
  CHECK(g.bo.isZero());
  CHECK(g.wmi.isZero());
  CHECK(g.wmf.isZero());
  CHECK(g.wmo.isZero());
  for (const auto& [r, v] : g.wxi.rows) CHECK(v.isZero());
  for (const auto& [r, v] : g.wxm.rows) CHECK(v.isZero());
}

TEST_CASE("forget gate parameters are absent when the gate is off") {
  LstmSpec spec{4, 3, false, true};
  LstmParams params = LstmParams::zeros(spec);
  CHECK(params.bf.size() == 0);
  CHECK(params.wxf.size() == 0);
  const LstmCache cache = lstm_forward(spec, params, std::vector<int>{1, 2});
  const LstmGrads g = lstm_backward(spec, params, cache, Vec::Ones(3));
  CHECK(g.bf.size() == 0);
  CHECK(g.wxf.rows.empty());
}

TEST_CASE("forget-off network equals forget-on with f forced to one") {
  Rng rng(31);
  LstmSpec off_spec{7, 5, false, true};
  LstmParams off_params = LstmParams::init(off_spec, rng);
  // Same weights, forget gate present but saturated to 1 via huge bias.
  LstmSpec on_spec = off_spec;
  on_spec.use_forget_gate = true;
  LstmParams on_params = LstmParams::zeros(on_spec);
  on_params.wxi = off_params.wxi;
  on_params.wxm = off_params.wxm;
  on_params.wxo = off_params.wxo;
  on_params.wmi = off_params.wmi;
  on_params.wmo = off_params.wmo;
  on_params.bi = off_params.bi;
  on_params.bm = off_params.bm;
  on_params.bo = off_params.bo;
  on_params.bf = Vec::Constant(5, 1e6);  // sigma -> 1 exactly in double precision
  const std::vector<int> seq = {1, 4, 2, 6, 0};
  const LstmCache off = lstm_forward(off_spec, off_params, seq);
  const LstmCache on = lstm_forward(on_spec, on_params, seq);
  CHECK((off.embed - on.embed).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("memory-to-gates off equals on with zero memory matrices") {
  Rng rng(37);
  LstmSpec off_spec{7, 5, true, false};
  LstmParams off_params = LstmParams::init(off_spec, rng);
  LstmSpec on_spec = off_spec;
  on_spec.memory_to_gates = true;
  LstmParams on_params = LstmParams::zeros(on_spec);
  on_params.wxi = off_params.wxi;
  on_params.wxf = off_params.wxf;
  on_params.wxm = off_params.wxm;
  on_params.wxo = off_params.wxo;
  on_params.bi = off_params.bi;
  on_params.bf = off_params.bf;
  on_params.bm = off_params.bm;
  on_params.bo = off_params.bo;
  const std::vector<int> seq = {6, 3, 3, 0, 5};
  const LstmCache off = lstm_forward(off_spec, off_params, seq);
  const LstmCache on = lstm_forward(on_spec, on_params, seq);
  CHECK((off.embed - on.embed).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("loss decreases on a separable toy set") {
  Rng rng(43);
  LstmSpec spec{6, 4, true, true};
  SrlNetwork net = SrlNetwork::init(spec, 8, 6, 2, rng);
  // 20 examples whose class is determined by one binary feature.
  std::vector<TrainExample> examples;
  for (int i = 0; i < 20; ++i) {
    TrainExample ex;
    ex.path = {static_cast<int>(rng.uniform_int(0, 5)),
               static_cast<int>(rng.uniform_int(0, 5))};
    ex.gold = i % 2;
    ex.features = {ex.gold == 0 ? 1 : 5};
    examples.push_back(ex);
  }
  TrainConfig cfg;
  cfg.alpha = 0.01;
  cfg.dropout = 0.0;
  Rng train_rng(cfg.seed);
  double prev = 1e12;
  for (int epoch = 0; epoch < 10; ++epoch) {
    const double loss = train_epoch(net, examples, cfg, train_rng);
    CHECK(loss < prev);
    prev = loss;
  }
}

TEST_CASE("equal seeds give bit-identical parameters") {
  auto run = [] {
    Rng rng(5);
    LstmSpec spec{10, 4, false, true};
    SrlNetwork net = SrlNetwork::init(spec, 12, 5, 3, rng);
    std::vector<TrainExample> examples;
    Rng data_rng(17);
    for (int i = 0; i < 30; ++i) examples.push_back(random_example(10, 12, 3, 4, data_rng));
    TrainConfig cfg;
    cfg.alpha = 0.05;
    cfg.dropout = 0.3;
    Rng train_rng(99);
    for (int epoch = 0; epoch < 3; ++epoch) train_epoch(net, examples, cfg, train_rng);
    return net;
  };
  SrlNetwork a = run();
  SrlNetwork b = run();
  bool identical = true;
  for_each_param(a, [&, k = std::size_t{0}](double& v) mutable {
    // compare against b in the same traversal order
    (void)v;
    ++k;
  });
  std::vector<double> va, vb;
  for_each_param(a, [&va](double& v) { va.push_back(v); });
  for_each_param(b, [&vb](double& v) { vb.push_back(v); });
  REQUIRE(va.size() == vb.size());
  for (std::size_t i = 0; i < va.size(); ++i)
    if (va[i] != vb[i]) identical = false;
  CHECK(identical);
}

TEST_CASE("binary ablation freezes the feature weights") {
  Rng rng(53);
  LstmSpec spec{8, 3, true, false};
  SrlNetwork net = SrlNetwork::init(spec, 6, 4, 2, rng);
  const Mat wbh_before = net.head.wbh;
  std::vector<TrainExample> examples;
  Rng data_rng(3);
  for (int i = 0; i < 10; ++i) examples.push_back(random_example(8, 6, 2, 3, data_rng));
  TrainConfig cfg;
  cfg.alpha = 0.1;
  cfg.disable_binary_features = true;
  Rng train_rng(1);
  train_epoch(net, examples, cfg, train_rng);
  CHECK(net.head.wbh == wbh_before);
}

TEST_CASE("path ablation ignores the sequence entirely") {
  Rng rng(59);
  LstmSpec spec{8, 3, true, true};
  SrlNetwork net = SrlNetwork::init(spec, 6, 4, 2, rng);
  TrainExample a = random_example(8, 6, 2, 4, rng);
  TrainExample b = a;
  b.path = {0, 0};
  const NetForward fa = net_forward(net, a, nullptr, true, false);
  const NetForward fb = net_forward(net, b, nullptr, true, false);
  CHECK(fa.head_cache.probs == fb.head_cache.probs);
}

TEST_CASE("without dropout, training and inference forwards coincide") {
  Rng rng(61);
  LstmSpec spec{8, 3, false, false};
  SrlNetwork net = SrlNetwork::init(spec, 6, 4, 2, rng);
  const TrainExample ex = random_example(8, 6, 2, 4, rng);
  const NetForward no_masks = net_forward(net, ex, nullptr, false, false);
  // d = 0 masks are all 1/(1-0) = 1.
  Rng mask_rng(77);
  const DropoutMasks masks = DropoutMasks::draw(4, 3, 0.0, mask_rng);
  const NetForward with_masks = net_forward(net, ex, &masks, false, false);
  CHECK((no_masks.head_cache.probs - with_masks.head_cache.probs).cwiseAbs().maxCoeff() == 0.0);
}
