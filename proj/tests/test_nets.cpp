#include "doctest.h"

#include <cmath>

#include "janossy/graph.hpp"
#include "janossy/nets.hpp"
#include "janossy/verify.hpp"

using namespace janossy;

TEST_SUITE_BEGIN("nets");

TEST_CASE("trainable parameter counts match the published table") {
  const CheckResult r = checks::parameter_count_table();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("embedding dimension is floor(100/k), 100 for full models") {
  ModelSpec s;
  s.k = 1;
  CHECK(s.embed_dim() == 100);
  s.k = 3;
  CHECK(s.embed_dim() == 33);
  s.k = 0;
  s.f_arch = FArch::kGru80;
  CHECK(s.embed_dim() == 100);
}

TEST_CASE("embedding lookups are deterministic and bounds-checked") {
  ModelSpec s;
  s.vocab = 10;
  s.k = 2;
  const Params p = init_params(s, 7);
  CHECK(embed(s, p, 4).data == embed(s, p, 4).data);
  CHECK(embed(s, p, 4).size() == 50);
  CHECK_THROWS_AS(embed(s, p, 10), std::out_of_range);
  CHECK_THROWS_AS(embed(s, p, -1), std::out_of_range);
}

TEST_CASE("mlp f at zero input and zero params is zero") {
  ModelSpec s;
  s.vocab = 10;
  s.k = 1;
  Params p = init_params(s, 1);
  for (auto& [name, t] : p.trainable)
    if (name.rfind("f.", 0) == 0) std::fill(t.data.begin(), t.data.end(), 0.0);
  const Tensor out = mlp_f_forward(s, p, Tensor::zeros({100}));
  for (double v : out.data) CHECK(v == 0.0);
}

TEST_CASE("length-1 rnn equals one cell update from the zero state") {
  for (FArch arch : {FArch::kLstm50, FArch::kGru80}) {
    ModelSpec s;
    s.vocab = 10;
    s.k = 0;
    s.f_arch = arch;
    const Params p = init_params(s, 11);
    const Tensor x = embed(s, p, 3);
    const Tensor got = rnn_forward(s, p, {x});

    // independent single-step recomputation from the published recursions;
    // h0 = 0 removes the W_hh terms but not the hidden-side biases
    const std::size_t H = static_cast<std::size_t>(s.f_output_dim());
    const Tensor& W_ih = p.find("f.W_ih");
    const Tensor& b_ih = p.find("f.b_ih");
    const Tensor& b_hh = p.find("f.b_hh");
    const std::size_t G = b_ih.size();
    std::vector<double> xg(G);
    for (std::size_t j = 0; j < G; ++j) {
      double acc = b_ih.data[j];
      for (std::size_t i = 0; i < x.size(); ++i) acc += x.data[i] * W_ih.data[i * G + j];
      xg[j] = acc;
    }
    auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    for (std::size_t j = 0; j < H; ++j) {
      double want = 0.0;
      if (arch == FArch::kLstm50) {
        const double i_g = sig(xg[j] + b_hh.data[j]);
        const double g_g = std::tanh(xg[2 * H + j] + b_hh.data[2 * H + j]);
        const double o_g = sig(xg[3 * H + j] + b_hh.data[3 * H + j]);
        want = o_g * std::tanh(i_g * g_g);  // c0 = 0 removes the forget path
      } else {
        const double r = sig(xg[j] + b_hh.data[j]);
        const double z = sig(xg[H + j] + b_hh.data[H + j]);
        const double n = std::tanh(xg[2 * H + j] + r * b_hh.data[2 * H + j]);  // r gates b_hn
        want = (1.0 - z) * n;
      }
      CHECK(got.data[j] == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("gru single step uses the hidden-side bias inside the reset gate") {
  // h0 = 0 makes U_n h vanish but b_hn must still be gated by r
  ModelSpec s;
  s.vocab = 10;
  s.k = 0;
  s.f_arch = FArch::kGru80;
  Params p = init_params(s, 3);
  const std::size_t H = 80;
  Tensor& b_hh = p.find("f.b_hh");
  for (std::size_t j = 2 * H; j < 3 * H; ++j) b_hh.data[j] = 5.0;  // large n-gate hidden bias
  const Tensor x = embed(s, p, 1);
  const Tensor with_bias = rnn_forward(s, p, {x});
  for (std::size_t j = 2 * H; j < 3 * H; ++j) b_hh.data[j] = 0.0;
  const Tensor without = rnn_forward(s, p, {x});
  double diff = 0.0;
  for (std::size_t j = 0; j < H; ++j)
    diff = std::max(diff, std::fabs(with_bias.data[j] - without.data[j]));
  CHECK(diff > 1e-3);
}

TEST_CASE("rnn rejects empty sequences") {
  ModelSpec s;
  s.vocab = 10;
  s.k = 0;
  s.f_arch = FArch::kLstm50;
  const Params p = init_params(s, 2);
  CHECK_THROWS_AS(rnn_forward(s, p, {}), std::invalid_argument);
}

TEST_CASE("rho shapes are validated") {
  ModelSpec s;
  s.vocab = 10;
  s.k = 1;
  const Params p = init_params(s, 5);
  CHECK_THROWS_AS(rho_forward(s, p, Tensor::zeros({29})), ShapeError);
  CHECK(rho_forward(s, p, Tensor::zeros({30})).size() == 1);
}

TEST_CASE("gradient checks pass for every f/rho combination") {
  const CheckResult r = checks::model_gradient_checks(1e-6, 1e-5);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("rnn output depends on input order") {
  const CheckResult r = checks::rnn_order_sensitivity();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("embedding is frozen through training steps") {
  const CheckResult r = checks::frozen_embedding();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("checkpoint round trip is bit-exact") {
  const CheckResult r = checks::checkpoint_roundtrip();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("batched pooled predictions match the sequence-function route") {
  ModelSpec s;
  s.vocab = 10;
  s.k = 2;
  s.sort_input = false;  // plain ordered-selection pooling for this comparison
  Params p = init_params(s, 21);
  const std::vector<std::vector<int>> xs = {{3, 1, 4, 1}, {5, 9, 2, 6}};

  Graph g;
  NodeId pred = build_pooled_predictions(g, s, p, xs);
  const Tensor batched = g.value(pred);

  const SequenceFunction f = make_f_sequence_fn(s, p);
  for (std::size_t b = 0; b < xs.size(); ++b) {
    std::vector<Tensor> h;
    for (int d : xs[b]) h.push_back(embed(s, p, d));
    const Tensor pooled = janossy_kary(f, h, 2);
    const Tensor want = rho_forward(s, p, pooled);
    CHECK(batched.data[b] == doctest::Approx(want.data[0]).epsilon(1e-12));
  }
}

TEST_CASE("sorted pooling averages f over combinations of the sorted digits") {
  ModelSpec s;
  s.vocab = 10;
  s.k = 2;
  REQUIRE(s.sorted_pooling());
  Params p = init_params(s, 22);
  const std::vector<std::vector<int>> xs = {{7, 2, 9, 4}};

  Graph g;
  const double got = g.value(build_pooled_predictions(g, s, p, xs)).data[0];

  std::vector<int> sorted = xs[0];
  std::sort(sorted.begin(), sorted.end());
  const SequenceFunction f = make_f_sequence_fn(s, p);
  Tensor acc = Tensor::zeros({30});
  std::size_t terms = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      const Tensor out =
          f.eval(2, {embed(s, p, sorted[i]), embed(s, p, sorted[j])});
      for (std::size_t q = 0; q < 30; ++q) acc.data[q] += out.data[q];
      ++terms;
    }
  for (double& v : acc.data) v /= static_cast<double>(terms);
  CHECK(got == doctest::Approx(rho_forward(s, p, acc).data[0]).epsilon(1e-12));
}

TEST_CASE("permuted batch builder matches the plain rnn forward") {
  ModelSpec s;
  s.vocab = 10;
  s.k = 0;
  s.f_arch = FArch::kGru80;
  Params p = init_params(s, 33);
  const std::vector<std::vector<int>> xs = {{1, 2, 3}, {4, 5, 6}};
  const std::vector<Permutation> perms = {{{2, 0, 1}}, {{1, 2, 0}}};

  Graph g;
  const Tensor batched = g.value(build_f_permuted(g, s, p, xs, perms));
  for (std::size_t b = 0; b < xs.size(); ++b) {
    std::vector<Tensor> h;
    for (std::uint32_t idx : perms[b].mapping) h.push_back(embed(s, p, xs[b][idx]));
    const Tensor want = rnn_forward(s, p, h);
    for (std::size_t j = 0; j < want.size(); ++j)
      CHECK(batched.data[b * want.size() + j] == doctest::Approx(want.data[j]).epsilon(1e-12));
  }
}

TEST_CASE("model spec validation rejects inconsistent shapes") {
  ModelSpec s;
  s.k = 0;
  s.f_arch = FArch::kMlp30;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.k = 2;
  s.f_arch = FArch::kLstm50;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_SUITE_END();
