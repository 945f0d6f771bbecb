#include "doctest.h"

#include <cmath>

#include "janossy/nets.hpp"
#include "janossy/pooling.hpp"
#include "janossy/verify.hpp"

using namespace janossy;

namespace {

std::vector<Tensor> scalars(std::initializer_list<double> vs) {
  std::vector<Tensor> out;
  for (double v : vs) out.push_back(Tensor::row({v}));
  return out;
}

SequenceFunction elementwise_sum() {
  SequenceFunction f;
  f.eval = [](std::size_t, const std::vector<Tensor>& seq) {
    Tensor acc = Tensor::zeros(seq.front().shape);
    for (const Tensor& t : seq)
      for (std::size_t i = 0; i < t.data.size(); ++i) acc.data[i] += t.data[i];
    return acc;
  };
  return f;
}

SequenceFunction first_element() {
  SequenceFunction f;
  f.prefix_arity = 1;
  f.eval = [](std::size_t, const std::vector<Tensor>& seq) { return seq.front(); };
  return f;
}

SequenceFunction product_fn() {
  SequenceFunction f;
  f.eval = [](std::size_t, const std::vector<Tensor>& seq) {
    double p = 1.0;
    for (const Tensor& t : seq) p *= t.data[0];
    return Tensor::row({p});
  };
  return f;
}

}  // namespace

TEST_SUITE_BEGIN("pooling");

TEST_CASE("exact pooling passes a permutation-invariant f through") {
  CHECK(janossy_exact(elementwise_sum(), scalars({1, 2, 3})).data[0] == 6.0);
}

TEST_CASE("exact pooling of the first element is the mean") {
  CHECK(janossy_exact(first_element(), scalars({1, 2, 3})).data[0] == doctest::Approx(2.0));
}

TEST_CASE("exact pooling of the product recovers the product") {
  CHECK(janossy_exact(product_fn(), scalars({2, 3, 4})).data[0] == doctest::Approx(24.0));
}

TEST_CASE("unary pooling is the mean of per-element values") {
  CHECK(janossy_kary(first_element(), scalars({10, 20, 30}), 1).data[0] == doctest::Approx(20.0));
}

TEST_CASE("k = |h| pooling equals exact pooling") {
  auto f = first_element();
  const auto h = scalars({4, -1, 7});
  CHECK(janossy_kary(f, h, 3).data[0] == janossy_exact(f, h).data[0]);
}

TEST_CASE("fast k-ary form equals the full-permutation route (random MLP)") {
  const CheckResult r = checks::prop1_equivalence(5, 6, 1e-10);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("the equivalence check catches a broken prefactor") {
  checks::KaryPoolFn broken = [](const SequenceFunction& f, const std::vector<Tensor>& h,
                                 std::size_t k) {
    Tensor t = janossy_kary(f, h, k);
    for (double& v : t.data) v *= static_cast<double>(h.size());  // wrong normalization
    return t;
  };
  const CheckResult r = checks::prop1_equivalence_against(broken, 4, 2, 1e-10);
  CHECK_FALSE(r.pass);
}

TEST_CASE("sampled pooling with an invariant f is exact for any m and seed") {
  auto f = elementwise_sum();
  const auto h = scalars({5, 1, 9, 2});
  for (std::uint64_t seed : {1ULL, 99ULL}) {
    for (std::size_t m : {1, 3, 17}) {
      Rng rng(seed);
      CHECK(janossy_sampled(f, h, m, rng).data[0] == 17.0);
    }
  }
}

TEST_CASE("a single sample is f under that seed's permutation") {
  auto f = first_element();
  const auto h = scalars({1, 2, 3});
  Rng rng(77);
  const Tensor got = janossy_sampled(f, h, 1, rng);
  Rng replay(77);
  const Permutation p = sample_permutation(3, replay);
  CHECK(got.data[0] == h[p.mapping[0]].data[0]);
}

TEST_CASE("sampled pooling is unbiased (small-scale Monte Carlo)") {
  auto f = first_element();
  const auto h = scalars({1, 2, 3});
  Rng rng(4242);
  double sum = 0.0, sumsq = 0.0;
  const std::size_t draws = 20000;
  for (std::size_t i = 0; i < draws; ++i) {
    const double v = janossy_sampled(f, h, 1, rng).data[0];
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sumsq / draws - mean * mean) / draws);
  CHECK(std::fabs(mean - 2.0) < 3.0 * se);
}

TEST_CASE("canonical pooling sorts before applying f") {
  auto f = first_element();
  const auto h = scalars({3, 1, 2});
  CHECK(canonical_pool(f, h, CanonicalKey::kAscending).data[0] == 1.0);
  CHECK(canonical_pool(f, h, CanonicalKey::kDescending).data[0] == 3.0);

  // bit-identical across every input ordering
  const Tensor base = canonical_pool(f, h, CanonicalKey::kAscending);
  for (const auto& p : enumerate_permutations(3)) {
    const Tensor other = canonical_pool(f, apply_permutation(h, p), CanonicalKey::kAscending);
    CHECK(other.data == base.data);
  }
}

TEST_CASE("composed_forward applies rho after pooling") {
  RhoFunction identity = [](const Tensor& t) { return t; };
  const Tensor pooled = Tensor::row({1.5});
  CHECK(composed_forward(pooled, identity).data == pooled.data);
  const CheckResult r = checks::rho_composition();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("permutation invariance across strategies") {
  const CheckResult r = checks::pooling_invariance(5, 8, 1e-9);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("staircase containment: lifted arity leaves pooling unchanged") {
  const CheckResult r = checks::staircase_containment(3, 5, 4, 1e-10);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("DeepSets special case: k=1 equals the per-element mean exactly") {
  const CheckResult r = checks::deepsets_equivalence(5, 5);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("short sequences zero-pad with fixed tail positions") {
  const CheckResult r = checks::kary_zero_padding();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("exact pooling refuses factorial blowups with advice") {
  auto f = elementwise_sum();
  std::vector<Tensor> big;
  for (int i = 0; i < 12; ++i) big.push_back(Tensor::row({double(i)}));
  CHECK_THROWS_AS(janossy_exact(f, big), CapacityError);
}

TEST_CASE("PoolingSpec validation names its constraints") {
  PoolingSpec p;
  p.strategy = PoolingStrategy::kKary;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.k = 2;
  CHECK_NOTHROW(p.validate());
  p.train_samples = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_SUITE_END();
