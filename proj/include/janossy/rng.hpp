#pragma once

#include <cstdint>
#include <vector>

namespace janossy {

// Deterministic, portable PRNG (xoshiro256**, seeded via splitmix64).
// Every stochastic component takes one of these explicitly; there is no
// global random state anywhere in the library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Unbiased integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller (caches the spare deviate).
  double gaussian();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

// Counter-based seed fan-out: derive(master, stream) gives independent
// streams for dataset generation, parameter init, permutation sampling, ...
// so any one can be varied while the others stay fixed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Well-known stream tags used by the experiment harness.
namespace seed_stream {
inline constexpr std::uint64_t kDataset = 1;
inline constexpr std::uint64_t kInit = 2;
inline constexpr std::uint64_t kPermutations = 3;
inline constexpr std::uint64_t kEval = 4;
inline constexpr std::uint64_t kReplicateBase = 1000;
}  // namespace seed_stream

}  // namespace janossy
