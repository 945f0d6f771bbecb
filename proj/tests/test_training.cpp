#include "doctest.h"

#include <cmath>

#include "janossy/training.hpp"
#include "janossy/verify.hpp"

using namespace janossy;

TEST_SUITE_BEGIN("training");

TEST_CASE("scalar losses") {
  CHECK(loss_value(LossKind::kL1, 3, 3) == 0.0);
  CHECK(loss_value(LossKind::kMse, 5, 3) == 4.0);
  CHECK(loss_value(LossKind::kL1, 5, 3) == 2.0);
}

TEST_CASE("adam first step moves by roughly lr in the gradient direction") {
  ModelSpec spec;
  spec.vocab = 10;
  spec.k = 1;
  Params p = init_params(spec, 1);
  TrainConfig cfg;
  cfg.base_lr = 0.01;
  auto opt = Optimizer::create(cfg);
  Tensor& w = p.find("rho.b");
  const double before = w.data[0];
  p.zero_grads();
  w.grad[0] = 2.5;
  opt->apply(p);
  CHECK(w.data[0] == doctest::Approx(before - 0.01).epsilon(1e-6));
}

TEST_CASE("sgd schedule obeys the diminishing-rate conditions") {
  const CheckResult r = checks::sgd_schedule_conditions();
  INFO(r.detail);
  CHECK(r.pass);
  CHECK(sgd_schedule_rate(0.5, 0.1, 0) == 0.5);
  CHECK(sgd_schedule_rate(0.5, 0.1, 10) == doctest::Approx(0.25));
}

TEST_CASE("pi-sgd per-permutation gradients average to the exact objective gradient") {
  const CheckResult r = checks::pi_sgd_gradient_identity(1e-10);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("one small exact step decreases a one-example loss") {
  ModelSpec spec;
  spec.vocab = 10;
  spec.k = 2;
  Params params = init_params(spec, 5);
  TrainConfig cfg;
  cfg.optimizer = OptimizerKind::kSgdSchedule;
  cfg.base_lr = 1e-3;
  cfg.sgd_decay = 1e-6;
  auto opt = Optimizer::create(cfg);
  Graph scratch;
  Batch batch;
  batch.xs = {{4, 7, 1, 9}};
  batch.ys = {2.0};
  const double before = exact_kary_step(spec, params, batch, LossKind::kMse, *opt, scratch);
  // loss value at the updated parameters
  Graph g;
  NodeId pred = build_pooled_predictions(g, spec, params, batch.xs);
  NodeId loss = g.mean(g.square(g.sub(pred, g.constant(Tensor::matrix(1, 1, {2.0})))));
  CHECK(g.value(loss).item() < before);
}

TEST_CASE("pi-sgd step reduces to ordinary SGD when permutations cannot matter") {
  ModelSpec spec;
  spec.vocab = 10;
  spec.k = 0;
  spec.f_arch = FArch::kGru80;
  auto run = [&](std::uint64_t perm_seed, bool constant_sequences) {
    Params params = init_params(spec, 8);
    TrainConfig cfg;
    auto opt = Optimizer::create(cfg);
    Rng rng(perm_seed);
    Graph scratch;
    Batch batch;
    // constant sequences are fixed points of every permutation, so f(h_s)
    // and its gradient cannot depend on the sampled s
    batch.xs = constant_sequences
                   ? std::vector<std::vector<int>>{{2, 2, 2, 2}, {7, 7, 7, 7}}
                   : std::vector<std::vector<int>>{{1, 2, 3, 4}, {5, 6, 7, 8}};
    batch.ys = {1.0, -1.0};
    pi_sgd_step(spec, params, batch, LossKind::kL1, 0.0, rng, *opt, scratch);
    return params.checksum();
  };
  CHECK(run(111, true) == run(999, true));
  CHECK(run(111, false) != run(999, false));  // distinct digits: the order matters again
}

TEST_CASE("pi-sgd trajectories are reproducible for a fixed seed") {
  ModelSpec spec;
  spec.vocab = 10;
  spec.k = 0;
  spec.f_arch = FArch::kLstm50;
  auto run = [&]() {
    Params params = init_params(spec, 13);
    TrainConfig cfg;
    auto opt = Optimizer::create(cfg);
    Rng rng(314);
    Graph scratch;
    Batch batch;
    batch.xs = {{0, 1, 2}, {3, 4, 5}};
    batch.ys = {4.0, 9.0};
    for (int step = 0; step < 5; ++step)
      pi_sgd_step(spec, params, batch, LossKind::kL1, 0.1, rng, *opt, scratch);
    return params.checksum();
  };
  CHECK(run() == run());
}

TEST_CASE("variance regularizer properties") {
  const CheckResult r = checks::variance_regularizer_properties();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("jensen: the permuted objective upper-bounds the pooled loss") {
  const CheckResult r = checks::jensen_upper_bound(4);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("exhaustive inference averaging equals pooled rho-composed f") {
  const CheckResult r = checks::inference_averaging_equivalence(4, 1e-9);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("permutation-invariant model predictions ignore m and seed") {
  ModelSpec spec;
  spec.vocab = 10;
  spec.k = 0;
  spec.f_arch = FArch::kGru80;
  Params params = init_params(spec, 77);
  for (const char* name : {"f.W_ih", "f.b_ih"}) {
    Tensor& t = params.find(name);
    std::fill(t.data.begin(), t.data.end(), 0.0);
  }
  const std::vector<std::vector<int>> xs = {{3, 1, 4, 1, 5}};
  Rng r1(1), r2(2);
  const double a = predict_sampled(spec, params, xs, 1, r1)[0];
  const double b = predict_sampled(spec, params, xs, 7, r2)[0];
  CHECK(a == doctest::Approx(b).epsilon(1e-15));
}

TEST_CASE("sampled-estimate variance shrinks with more inference samples") {
  const CheckResult r = checks::inference_variance_monotone(60);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("empty batches are rejected") {
  ModelSpec spec;
  spec.vocab = 10;
  spec.k = 1;
  Params params = init_params(spec, 3);
  TrainConfig cfg;
  auto opt = Optimizer::create(cfg);
  Graph scratch;
  Batch empty;
  CHECK_THROWS_AS(exact_kary_step(spec, params, empty, LossKind::kL1, *opt, scratch),
                  std::invalid_argument);
}

TEST_CASE("train config validation") {
  TrainConfig cfg;
  cfg.optimizer = OptimizerKind::kSgdSchedule;
  cfg.base_lr = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.base_lr = 0.1;
  CHECK_NOTHROW(cfg.validate());
  cfg.variance_reg_weight = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_SUITE_END();
