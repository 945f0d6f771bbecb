#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "janossy/rng.hpp"
#include "janossy/tensor.hpp"

namespace janossy {

struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bijection on 0..n-1.
struct Permutation {
  std::vector<std::uint32_t> mapping;

  std::size_t size() const { return mapping.size(); }
  bool is_valid() const;  // sorted copy equals 0..n-1
  static Permutation identity(std::size_t n);
};

// Ordered selection of k distinct indices from 0..n-1.
struct KIndexSequence {
  std::vector<std::uint32_t> indices;
  std::uint32_t n = 0;
};

// Full-permutation enumeration above this length is refused unless the
// caller raises the cap; 8! = 40320 is the largest tractable-by-default
// factorial. k-selections are bounded by their term count instead, since
// n!/(n-k)! stays small for small k however long the sequence is.
inline constexpr std::size_t kDefaultEnumerationCap = 8;
inline constexpr std::size_t kDefaultSelectionLengthCap = 64;
inline constexpr std::size_t kDefaultTermCap = 1000000;

std::uint64_t factorial(std::uint64_t n);
std::uint64_t falling_factorial(std::uint64_t n, std::uint64_t k);  // n!/(n-k)!
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// All n! permutations in lexicographic order of mapping.
std::vector<Permutation> enumerate_permutations(std::size_t n,
                                                std::size_t cap = kDefaultEnumerationCap);

// All n!/(n-k)! ordered k-selections, lexicographic. Requires k <= n.
std::vector<KIndexSequence> enumerate_k_permutations(std::size_t n, std::size_t k,
                                                     std::size_t cap = kDefaultSelectionLengthCap,
                                                     std::size_t term_cap = kDefaultTermCap);

// All C(n,k) increasing k-selections, lexicographic. Requires k <= n.
std::vector<KIndexSequence> enumerate_k_combinations(std::size_t n, std::size_t k,
                                                     std::size_t term_cap = kDefaultTermCap);

// Uniform over all n! permutations (Fisher-Yates).
Permutation sample_permutation(std::size_t n, Rng& rng);

// Lexicographic rank of a permutation (Lehmer code); inverse of the
// enumeration order. Used by the uniformity tests.
std::uint64_t permutation_rank(const Permutation& p);

// First k elements of h, zero-padded with the element shape when |h| < k.
std::vector<Tensor> project_k(const std::vector<Tensor>& h, std::size_t k);

template <typename T>
std::vector<T> apply_permutation(const std::vector<T>& h, const Permutation& p) {
  std::vector<T> out;
  out.reserve(h.size());
  for (std::uint32_t i : p.mapping) out.push_back(h[i]);
  return out;
}

}  // namespace janossy
