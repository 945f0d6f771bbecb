#include "janossy/perm.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace janossy {

bool Permutation::is_valid() const {
  std::vector<std::uint32_t> sorted(mapping);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != i) return false;
  return true;
}

Permutation Permutation::identity(std::size_t n) {
  Permutation p;
  p.mapping.resize(n);
  std::iota(p.mapping.begin(), p.mapping.end(), 0u);
  return p;
}

std::uint64_t factorial(std::uint64_t n) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) r *= i;
  return r;
}

std::uint64_t falling_factorial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) r *= (n - i);
  return r;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<Permutation> enumerate_permutations(std::size_t n, std::size_t cap) {
  if (n > cap)
    throw CapacityError("enumerate_permutations: n=" + std::to_string(n) +
                        " exceeds cap " + std::to_string(cap) +
                        " (" + std::to_string(n) + "! permutations); raise the cap explicitly "
                        "or use a k-ary / sampled strategy");
  std::vector<Permutation> out;
  out.reserve(factorial(n));
  Permutation p = Permutation::identity(n);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.mapping.begin(), p.mapping.end()));
  return out;
}

std::vector<KIndexSequence> enumerate_k_permutations(std::size_t n, std::size_t k,
                                                     std::size_t cap, std::size_t term_cap) {
  if (k > n)
    throw std::invalid_argument("enumerate_k_permutations: k=" + std::to_string(k) + " > n=" +
                                std::to_string(n) + "; zero-pad the sequence first");
  if (n > cap)
    throw CapacityError("enumerate_k_permutations: n=" + std::to_string(n) + " exceeds cap " +
                        std::to_string(cap));
  std::uint64_t count = 1;  // incremental product, bails before it can overflow
  for (std::uint64_t i = 0; i < k; ++i) {
    count *= (n - i);
    if (count > term_cap)
      throw CapacityError("enumerate_k_permutations: n!/(n-k)! exceeds the term cap " +
                          std::to_string(term_cap) + " for n=" + std::to_string(n) +
                          ", k=" + std::to_string(k));
  }

  std::vector<KIndexSequence> out;
  out.reserve(count);
  KIndexSequence cur;
  cur.n = static_cast<std::uint32_t>(n);
  cur.indices.reserve(k);
  std::vector<bool> used(n, false);
  // Depth-first in index order yields lexicographic output.
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == k) {
      out.push_back(cur);
      return;
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      cur.indices.push_back(i);
      self(self, depth + 1);
      cur.indices.pop_back();
      used[i] = false;
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<KIndexSequence> enumerate_k_combinations(std::size_t n, std::size_t k,
                                                     std::size_t term_cap) {
  if (k > n)
    throw std::invalid_argument("enumerate_k_combinations: k > n");
  const std::uint64_t count = binomial(n, k);
  if (count > term_cap)
    throw CapacityError("enumerate_k_combinations: " + std::to_string(count) +
                        " terms exceed the term cap " + std::to_string(term_cap));
  std::vector<KIndexSequence> out;
  out.reserve(count);
  KIndexSequence cur;
  cur.n = static_cast<std::uint32_t>(n);
  auto rec = [&](auto&& self, std::uint32_t start, std::size_t depth) -> void {
    if (depth == k) {
      out.push_back(cur);
      return;
    }
    for (std::uint32_t i = start; i + (k - depth) <= n; ++i) {
      cur.indices.push_back(i);
      self(self, i + 1, depth + 1);
      cur.indices.pop_back();
    }
  };
  rec(rec, 0, 0);
  return out;
}

Permutation sample_permutation(std::size_t n, Rng& rng) {
  Permutation p = Permutation::identity(n);
  rng.shuffle(p.mapping);
  return p;
}

std::uint64_t permutation_rank(const Permutation& p) {
  const std::size_t n = p.size();
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t smaller = 0;
    for (std::size_t j = i + 1; j < n; ++j)
      if (p.mapping[j] < p.mapping[i]) ++smaller;
    rank += smaller * factorial(n - 1 - i);
  }
  return rank;
}

std::vector<Tensor> project_k(const std::vector<Tensor>& h, std::size_t k) {
  if (k == 0) throw std::invalid_argument("project_k: k must be >= 1");
  if (h.size() >= k) return std::vector<Tensor>(h.begin(), h.begin() + k);
  if (h.empty())
    throw std::invalid_argument(
        "project_k: cannot zero-pad an empty sequence, element shape unknown");
  std::vector<Tensor> out(h);
  out.reserve(k);
  while (out.size() < k) out.push_back(Tensor::zeros(h.front().shape));
  return out;
}

}  // namespace janossy
