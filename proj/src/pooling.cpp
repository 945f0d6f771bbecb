#include "janossy/pooling.hpp"

#include <algorithm>
#include <stdexcept>

namespace janossy {

PoolingStrategy pooling_strategy_from(const std::string& s) {
  if (s == "exact") return PoolingStrategy::kExact;
  if (s == "kary") return PoolingStrategy::kKary;
  if (s == "sampled") return PoolingStrategy::kSampled;
  if (s == "canonical") return PoolingStrategy::kCanonical;
  throw std::invalid_argument("unknown pooling strategy '" + s + "'");
}

std::string to_string(PoolingStrategy s) {
  switch (s) {
    case PoolingStrategy::kExact: return "exact";
    case PoolingStrategy::kKary: return "kary";
    case PoolingStrategy::kSampled: return "sampled";
    case PoolingStrategy::kCanonical: return "canonical";
  }
  return "?";
}

CanonicalKey canonical_key_from(const std::string& s) {
  if (s == "ascending") return CanonicalKey::kAscending;
  if (s == "descending") return CanonicalKey::kDescending;
  throw std::invalid_argument("unknown canonical key '" + s + "'");
}

std::string to_string(CanonicalKey k) {
  return k == CanonicalKey::kAscending ? "ascending" : "descending";
}

void PoolingSpec::validate() const {
  if (strategy == PoolingStrategy::kKary && !k.has_value())
    throw std::invalid_argument("PoolingSpec: strategy 'kary' requires k");
  if (k.has_value() && *k == 0)
    throw std::invalid_argument("PoolingSpec: k must be positive");
  if (train_samples < 1)
    throw std::invalid_argument("PoolingSpec: train_samples must be >= 1");
  if (infer_samples < 1)
    throw std::invalid_argument("PoolingSpec: infer_samples must be >= 1");
}

namespace {

void accumulate(Tensor& acc, const Tensor& t) {
  if (acc.data.empty()) {
    acc = t;
    return;
  }
  if (!same_shape(acc, t))
    throw std::invalid_argument("pooling: f returned inconsistent shapes across permutations");
  for (std::size_t i = 0; i < acc.data.size(); ++i) acc.data[i] += t.data[i];
}

}  // namespace

Tensor janossy_exact(const SequenceFunction& f, const std::vector<Tensor>& h, std::size_t cap) {
  const auto perms = enumerate_permutations(h.size(), cap);
  Tensor acc;
  for (const Permutation& p : perms) accumulate(acc, f(h.size(), apply_permutation(h, p)));
  const double inv = 1.0 / static_cast<double>(perms.size());
  for (double& v : acc.data) v *= inv;
  return acc;
}

Tensor janossy_kary(const SequenceFunction& f, const std::vector<Tensor>& h, std::size_t k,
                    std::size_t cap, std::size_t term_cap) {
  if (k == 0) throw std::invalid_argument("janossy_kary: k must be >= 1");
  const std::size_t n = h.size();

  if (n < k) {
    // Permute the real elements only; the zero padding stays at the tail.
    const auto perms = enumerate_permutations(n, cap);
    Tensor acc;
    for (const Permutation& p : perms)
      accumulate(acc, f(n, project_k(apply_permutation(h, p), k)));
    const double inv = 1.0 / static_cast<double>(perms.size());
    for (double& v : acc.data) v *= inv;
    return acc;
  }

  const auto selections =
      enumerate_k_permutations(n, k, kDefaultSelectionLengthCap, term_cap);
  Tensor acc;
  std::vector<Tensor> picked(k);
  for (const KIndexSequence& sel : selections) {
    for (std::size_t j = 0; j < k; ++j) picked[j] = h[sel.indices[j]];
    accumulate(acc, f(n, picked));
  }
  const double inv = 1.0 / static_cast<double>(selections.size());
  for (double& v : acc.data) v *= inv;
  return acc;
}

Tensor janossy_sampled(const SequenceFunction& f, const std::vector<Tensor>& h, std::size_t m,
                       Rng& rng) {
  if (m == 0) throw std::invalid_argument("janossy_sampled: m must be >= 1");
  Tensor acc;
  for (std::size_t i = 0; i < m; ++i) {
    const Permutation p = sample_permutation(h.size(), rng);
    accumulate(acc, f(h.size(), apply_permutation(h, p)));
  }
  const double inv = 1.0 / static_cast<double>(m);
  for (double& v : acc.data) v *= inv;
  return acc;
}

std::vector<std::size_t> canonical_sort_order(const std::vector<Tensor>& h, CanonicalKey key) {
  std::vector<std::size_t> order(h.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto less = [&](std::size_t a, std::size_t b) {
    const auto& da = h[a].data;
    const auto& db = h[b].data;
    const std::size_t m = std::min(da.size(), db.size());
    for (std::size_t i = 0; i < m; ++i) {
      if (da[i] < db[i]) return true;
      if (da[i] > db[i]) return false;
    }
    return da.size() < db.size();
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return key == CanonicalKey::kAscending ? less(a, b) : less(b, a);
  });
  return order;
}

Tensor canonical_pool(const SequenceFunction& f, const std::vector<Tensor>& h, CanonicalKey key) {
  const auto order = canonical_sort_order(h, key);
  std::vector<Tensor> sorted;
  sorted.reserve(h.size());
  for (std::size_t i : order) sorted.push_back(h[i]);
  return f(h.size(), sorted);
}

Tensor composed_forward(const Tensor& pooled, const RhoFunction& rho) { return rho(pooled); }

}  // namespace janossy
