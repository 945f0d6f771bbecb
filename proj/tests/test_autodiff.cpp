#include "doctest.h"

#include <cmath>

#include "janossy/graph.hpp"
#include "janossy/rng.hpp"
#include "janossy/verify.hpp"

using namespace janossy;

TEST_SUITE_BEGIN("autodiff");

TEST_CASE("tanh is odd at the origin") {
  Graph g;
  NodeId out = g.tanh(g.constant(Tensor::row({0.0})));
  CHECK(g.value(out).data == std::vector<double>{0.0});
}

TEST_CASE("matmul against the identity") {
  Graph g;
  NodeId a = g.constant(Tensor::matrix(2, 2, {1, 2, 3, 4}));
  NodeId eye = g.constant(Tensor::matrix(2, 2, {1, 0, 0, 1}));
  CHECK(g.value(g.matmul(a, eye)).data == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("mean reduces to the arithmetic mean") {
  Graph g;
  CHECK(g.value(g.mean(g.constant(Tensor::row({2, 4, 6})))).item() == 4.0);
}

TEST_CASE("backward of sum gives all-ones") {
  Tensor x = Tensor::row({5, -1, 2});
  x.requires_grad = true;
  Graph g;
  g.backward(g.sum(g.leaf(x)));
  CHECK(x.grad == std::vector<double>{1, 1, 1});
}

TEST_CASE("tanh'(0) = 1") {
  Tensor w = Tensor::scalar(0.0);
  w.requires_grad = true;
  Graph g;
  g.backward(g.tanh(g.leaf(w)));
  CHECK(w.grad == std::vector<double>{1.0});
}

TEST_CASE("two-layer MLP gradients match finite differences") {
  Rng rng(42);
  Tensor W1 = Tensor::zeros({4, 6});
  Tensor b1 = Tensor::zeros({6});
  Tensor W2 = Tensor::zeros({6, 1});
  Tensor x = Tensor::zeros({2, 4});
  for (Tensor* t : {&W1, &b1, &W2}) {
    for (double& v : t->data) v = rng.uniform(-1.0, 1.0);
    t->requires_grad = true;
  }
  for (double& v : x.data) v = rng.uniform(-1.0, 1.0);

  std::vector<Tensor*> params = {&W1, &b1, &W2};
  auto build = [&](Graph& g) {
    NodeId h = g.tanh(g.bias_add(g.matmul(g.leaf(x), g.leaf(W1)), g.leaf(b1)));
    return g.mean(g.square(g.matmul(h, g.leaf(W2))));
  };
  CHECK(grad_check(build, params, 1e-6) < 1e-5);
}

TEST_CASE("grad_check on a sum of squares is tight") {
  Tensor x = Tensor::row({1.5, -2.0, 0.25});
  x.requires_grad = true;
  std::vector<Tensor*> params = {&x};
  auto build = [&](Graph& g) { return g.sum(g.square(g.leaf(x))); };
  CHECK(grad_check(build, params, 1e-6) < 1e-8);
}

TEST_CASE("grad_check on a constant function is exactly zero") {
  Tensor x = Tensor::row({1.0, 2.0});
  x.requires_grad = true;
  std::vector<Tensor*> params = {&x};
  auto build = [&](Graph& g) {
    g.leaf(x);
    return g.constant(Tensor::scalar(3.0));
  };
  CHECK(grad_check(build, params, 1e-6) == 0.0);
}

TEST_CASE("backward requires a scalar loss") {
  Tensor x = Tensor::row({1.0, 2.0});
  x.requires_grad = true;
  Graph g;
  NodeId out = g.square(g.leaf(x));
  CHECK_THROWS_AS(g.backward(out), ShapeError);
}

TEST_CASE("shape mismatches name the op and shapes") {
  Graph g;
  NodeId a = g.constant(Tensor::matrix(2, 3, std::vector<double>(6, 1.0)));
  NodeId b = g.constant(Tensor::matrix(2, 3, std::vector<double>(6, 1.0)));
  try {
    g.matmul(a, b);
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("matmul") != std::string::npos);
    CHECK(msg.find("[2,3]") != std::string::npos);
  }
}

TEST_CASE("elementwise ops broadcast scalars only") {
  Graph g;
  NodeId m = g.constant(Tensor::matrix(2, 3, std::vector<double>(6, 2.0)));
  NodeId s = g.constant(Tensor::scalar(3.0));
  CHECK(g.value(g.add(m, s)).data[0] == 5.0);
  CHECK(g.value(g.mul(s, m)).data[5] == 6.0);
  NodeId v = g.constant(Tensor::row({1, 2, 3}));
  CHECK_THROWS_AS(g.add(m, v), ShapeError);  // no row broadcasting through add
  CHECK(g.value(g.bias_add(m, v)).data[2] == 5.0);
}

TEST_CASE("repeated backward accumulates until reset") {
  Tensor x = Tensor::row({2.0});
  x.requires_grad = true;
  Graph g;
  NodeId loss = g.sum(g.square(g.leaf(x)));
  g.backward(loss);
  CHECK(x.grad[0] == doctest::Approx(4.0));
  g.backward(loss);
  CHECK(x.grad[0] == doctest::Approx(8.0));
  x.zero_grad();
  g.backward(loss);
  CHECK(x.grad[0] == doctest::Approx(4.0));
}

TEST_CASE("generic op dispatch covers the spec kinds") {
  Graph g;
  NodeId a = g.constant(Tensor::matrix(2, 2, {1, 2, 3, 4}));
  NodeId b = g.constant(Tensor::matrix(2, 2, {5, 6, 7, 8}));
  std::vector<NodeId> two = {a, b};
  std::vector<NodeId> one = {a};
  CHECK(g.value(g.apply(OpKind::kMatmul, two)).data[0] == 19.0);
  CHECK(g.value(g.apply(OpKind::kAdd, two)).data[0] == 6.0);
  CHECK(g.value(g.apply(OpKind::kSub, two)).data[0] == -4.0);
  CHECK(g.value(g.apply(OpKind::kMul, two)).data[0] == 5.0);
  CHECK(g.value(g.apply(OpKind::kTanh, one)).data[0] == doctest::Approx(std::tanh(1.0)));
  CHECK(g.value(g.apply(OpKind::kSigmoid, one)).data[0] ==
        doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));
  CHECK(g.value(g.apply(OpKind::kSum, one)).item() == 10.0);
  CHECK(g.value(g.apply(OpKind::kMean, one)).item() == 2.5);
  CHECK(g.value(g.apply(OpKind::kSquare, one)).data[3] == 16.0);
  OpAux slice_aux;
  slice_aux.axis = 1;
  slice_aux.begin = 1;
  slice_aux.end = 2;
  CHECK(g.value(g.apply(OpKind::kSlice, one, slice_aux)).data == std::vector<double>{2, 4});
  OpAux cat_aux;
  cat_aux.axis = 0;
  CHECK(g.value(g.apply(OpKind::kConcat, two, cat_aux)).rows() == 4);
}

TEST_CASE("per-op gradients match central differences on random inputs") {
  const CheckResult r = checks::op_gradients(100, 1e-6, 1e-5);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("loss that ignores a parameter leaves its grad exactly zero") {
  const CheckResult r = checks::unused_param_zero_grad();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("forward evaluation is bit-deterministic") {
  const CheckResult r = checks::forward_determinism();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("finite outputs stay finite through deep compositions") {
  Rng rng(7);
  Tensor x = Tensor::zeros({4, 4});
  for (double& v : x.data) v = rng.uniform(-2.0, 2.0);
  Graph g;
  NodeId cur = g.leaf(x);
  for (int i = 0; i < 20; ++i) cur = g.tanh(g.matmul(cur, cur));
  CHECK(g.value(cur).all_finite());
}

TEST_SUITE_END();
