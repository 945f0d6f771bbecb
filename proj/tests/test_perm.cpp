#include "doctest.h"

#include <set>

#include "janossy/perm.hpp"
#include "janossy/verify.hpp"

using namespace janossy;

TEST_SUITE_BEGIN("perm");

TEST_CASE("counting: 0! = 1, lexicographic 3!, distinct 5!") {
  const auto p0 = enumerate_permutations(0);
  REQUIRE(p0.size() == 1);
  CHECK(p0[0].mapping.empty());

  const auto p3 = enumerate_permutations(3);
  REQUIRE(p3.size() == 6);
  CHECK(p3.front().mapping == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(p3.back().mapping == std::vector<std::uint32_t>{2, 1, 0});

  const auto p5 = enumerate_permutations(5);
  CHECK(p5.size() == 120);
  std::set<std::vector<std::uint32_t>> uniq;
  for (const auto& p : p5) uniq.insert(p.mapping);
  CHECK(uniq.size() == 120);
}

TEST_CASE("k-permutations: counts and special cases") {
  CHECK(enumerate_k_permutations(5, 2).size() == 20);

  const auto kp = enumerate_k_permutations(3, 3);
  const auto full = enumerate_permutations(3);
  REQUIRE(kp.size() == full.size());
  for (std::size_t i = 0; i < kp.size(); ++i)
    CHECK(std::equal(kp[i].indices.begin(), kp[i].indices.end(), full[i].mapping.begin()));

  const auto unary = enumerate_k_permutations(4, 1);
  REQUIRE(unary.size() == 4);
  for (std::uint32_t i = 0; i < 4; ++i)
    CHECK(unary[i].indices == std::vector<std::uint32_t>{i});
}

TEST_CASE("caps and argument errors") {
  CHECK_THROWS_AS(enumerate_permutations(9), CapacityError);
  CHECK_NOTHROW(enumerate_permutations(9, 9));  // explicit override
  CHECK_THROWS_AS(enumerate_k_permutations(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_k_permutations(8, 8, 8, 1000), CapacityError);  // term cap
}

TEST_CASE("combinations are the increasing selections") {
  const auto c = enumerate_k_combinations(4, 2);
  REQUIRE(c.size() == 6);
  CHECK(c[0].indices == std::vector<std::uint32_t>{0, 1});
  CHECK(c[5].indices == std::vector<std::uint32_t>{2, 3});
}

TEST_CASE("sampling: determinism and bijection property") {
  Rng a(2024), b(2024);
  CHECK(sample_permutation(7, a).mapping == sample_permutation(7, b).mapping);

  Rng rng(1);
  CHECK(sample_permutation(1, rng).mapping == std::vector<std::uint32_t>{0});
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.below(10);
    CHECK(sample_permutation(n, rng).is_valid());
  }
}

TEST_CASE("permutation_rank inverts enumeration order") {
  const auto perms = enumerate_permutations(5);
  for (std::size_t i = 0; i < perms.size(); ++i) CHECK(permutation_rank(perms[i]) == i);
}

TEST_CASE("project_k keeps prefixes and pads with zeros") {
  auto elem = [](double v) { return Tensor::row({v, v + 1}); };
  const std::vector<Tensor> abc = {elem(1), elem(2), elem(3)};

  const auto head = project_k(abc, 2);
  REQUIRE(head.size() == 2);
  CHECK(head[0].data == abc[0].data);
  CHECK(head[1].data == abc[1].data);

  const auto padded = project_k({elem(7)}, 3);
  REQUIRE(padded.size() == 3);
  CHECK(padded[0].data == elem(7).data);
  CHECK(padded[1].data == std::vector<double>{0, 0});
  CHECK(padded[2].shape == Shape{2});

  const auto same = project_k({elem(1), elem(2)}, 2);
  CHECK(same.size() == 2);

  CHECK_THROWS_AS(project_k({}, 2), std::invalid_argument);
}

TEST_CASE("library invariants: counts, sampler, prefix dependence") {
  for (const CheckResult& r : {checks::permutation_counts(7), checks::sampler_validity(300),
                               checks::projection_prefix_dependence()}) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.pass);
  }
}

TEST_CASE("factorial helpers") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(8) == 40320);
  CHECK(falling_factorial(10, 2) == 90);
  CHECK(falling_factorial(5, 5) == 120);
  CHECK(binomial(10, 2) == 45);
  CHECK(binomial(6, 0) == 1);
}

TEST_SUITE_END();
