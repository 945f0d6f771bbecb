#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "janossy/perm.hpp"
#include "janossy/rng.hpp"
#include "janossy/tensor.hpp"

namespace janossy {

enum class PoolingStrategy { kExact, kKary, kSampled, kCanonical };
enum class CanonicalKey { kAscending, kDescending };

PoolingStrategy pooling_strategy_from(const std::string& s);
std::string to_string(PoolingStrategy s);
CanonicalKey canonical_key_from(const std::string& s);
std::string to_string(CanonicalKey k);

// Which tractability strategy a model uses, and its knobs.
struct PoolingSpec {
  PoolingStrategy strategy = PoolingStrategy::kExact;
  std::optional<std::size_t> k;         // required for kary
  std::size_t train_samples = 1;        // sampled strategy
  std::size_t infer_samples = 1;        // test-time permutation averaging
  CanonicalKey canonical_key = CanonicalKey::kAscending;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument naming the violated constraint
};

// A permutation-sensitive sequence function: (length, sequence) -> tensor.
// Parameters, if any, are captured inside eval. prefix_arity, when set,
// declares that eval ignores elements beyond that position.
struct SequenceFunction {
  std::function<Tensor(std::size_t n, const std::vector<Tensor>& seq)> eval;
  std::optional<std::size_t> prefix_arity;

  Tensor operator()(std::size_t n, const std::vector<Tensor>& seq) const { return eval(n, seq); }
};

// Mean of f over all |h|! input orderings, summed in lexicographic
// permutation order so results are reproducible bit-for-bit.
Tensor janossy_exact(const SequenceFunction& f, const std::vector<Tensor>& h,
                     std::size_t cap = kDefaultEnumerationCap);

// Fast form of k-ary pooling: mean of f over the |h|!/(|h|-k)! ordered
// k-selections, equal to janossy_exact of the k-projected f. Sequences
// shorter than k are zero-padded after their own elements (the padding
// positions are never permuted), and the mean then runs over |h|! orderings
// of the real elements.
Tensor janossy_kary(const SequenceFunction& f, const std::vector<Tensor>& h, std::size_t k,
                    std::size_t cap = kDefaultEnumerationCap,
                    std::size_t term_cap = kDefaultTermCap);

// Monte-Carlo estimate: mean of f over m permutations drawn independently
// and uniformly. Unbiased for f itself; not for nonlinear compositions.
Tensor janossy_sampled(const SequenceFunction& f, const std::vector<Tensor>& h, std::size_t m,
                       Rng& rng);

// f applied to the sorted sequence. Elements are compared by their first
// scalar coordinate, remaining coordinates break ties, stable beyond that.
Tensor canonical_pool(const SequenceFunction& f, const std::vector<Tensor>& h, CanonicalKey key);

std::vector<std::size_t> canonical_sort_order(const std::vector<Tensor>& h, CanonicalKey key);

using RhoFunction = std::function<Tensor(const Tensor&)>;

// rho applied after pooling (the exact / k-ary / canonical composition).
// Under pi-SGD training rho instead moves inside each sampled term; that
// composition lives in the training step, not here.
Tensor composed_forward(const Tensor& pooled, const RhoFunction& rho);

}  // namespace janossy
