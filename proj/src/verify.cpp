#include "janossy/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "janossy/experiment.hpp"
#include "janossy/graph.hpp"
#include "janossy/nets.hpp"
#include "janossy/perm.hpp"
#include "janossy/stats.hpp"
#include "janossy/tasks.hpp"
#include "janossy/training.hpp"

namespace janossy {

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

namespace checks {

namespace {

CheckResult make_result(const std::string& name, bool pass, const std::string& detail) {
  CheckResult r;
  r.name = name;
  r.pass = pass;
  r.detail = detail;
  return r;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// Owns the spec/params a SequenceFunction closes over.
struct FModel {
  ModelSpec spec;
  Params params;
};

std::shared_ptr<FModel> random_kary_model(std::size_t k, std::uint64_t seed,
                                          RhoArch rho = RhoArch::kLinear) {
  auto m = std::make_shared<FModel>();
  m->spec.vocab = 10;
  m->spec.k = static_cast<int>(k);
  m->spec.f_arch = FArch::kMlp30;
  m->spec.rho_arch = rho;
  m->params = init_params(m->spec, seed);
  return m;
}

std::shared_ptr<FModel> random_rnn_model(FArch arch, std::uint64_t seed,
                                         RhoArch rho = RhoArch::kLinear) {
  auto m = std::make_shared<FModel>();
  m->spec.vocab = 10;
  m->spec.k = 0;
  m->spec.f_arch = arch;
  m->spec.rho_arch = rho;
  m->params = init_params(m->spec, seed);
  return m;
}

SequenceFunction f_of(const std::shared_ptr<FModel>& m) {
  SequenceFunction inner = make_f_sequence_fn(m->spec, m->params);
  SequenceFunction f;
  f.prefix_arity = inner.prefix_arity;
  f.eval = [m, inner](std::size_t n, const std::vector<Tensor>& seq) {
    return inner.eval(n, seq);
  };
  return f;
}

SequenceFunction fprime_of(const std::shared_ptr<FModel>& m) {
  SequenceFunction inner = make_fprime_sequence_fn(m->spec, m->params);
  SequenceFunction f;
  f.prefix_arity = inner.prefix_arity;
  f.eval = [m, inner](std::size_t n, const std::vector<Tensor>& seq) {
    return inner.eval(n, seq);
  };
  return f;
}

std::vector<Tensor> random_sequence(std::size_t n, std::size_t dim, Rng& rng) {
  std::vector<Tensor> h;
  h.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Tensor t = Tensor::zeros({dim});
    for (double& v : t.data) v = rng.uniform(-2.0, 2.0);
    h.push_back(std::move(t));
  }
  return h;
}

double rel_err_vec(const Tensor& got, const Tensor& want) {
  double scale = 1e-12;
  for (double v : want.data) scale = std::max(scale, std::fabs(v));
  double worst = 0.0;
  for (std::size_t i = 0; i < want.data.size(); ++i)
    worst = std::max(worst, std::fabs(got.data[i] - want.data[i]) / scale);
  return worst;
}

// Independent route for Prop-1 style checks: enumerate all |h|! orderings
// and average f over the k-projection of each.
Tensor naive_projected_pool(const SequenceFunction& f, const std::vector<Tensor>& h,
                            std::size_t k) {
  const auto perms = enumerate_permutations(h.size());
  Tensor acc;
  for (const auto& p : perms) {
    Tensor term = f(h.size(), project_k(apply_permutation(h, p), k));
    if (acc.data.empty()) {
      acc = term;
    } else {
      for (std::size_t i = 0; i < acc.data.size(); ++i) acc.data[i] += term.data[i];
    }
  }
  for (double& v : acc.data) v /= static_cast<double>(perms.size());
  return acc;
}

SequenceFunction sum_elements_fn() {
  SequenceFunction f;
  f.eval = [](std::size_t, const std::vector<Tensor>& seq) {
    Tensor acc = Tensor::zeros(seq.front().shape);
    for (const Tensor& t : seq)
      for (std::size_t i = 0; i < t.data.size(); ++i) acc.data[i] += t.data[i];
    return acc;
  };
  return f;
}

}  // namespace

CheckResult permutation_counts(std::size_t max_n) {
  std::ostringstream why;
  bool ok = true;
  for (std::size_t n = 0; n <= max_n && ok; ++n) {
    const auto perms = enumerate_permutations(n, max_n);
    if (perms.size() != factorial(n)) {
      why << "count(" << n << ") = " << perms.size();
      ok = false;
      break;
    }
    for (std::size_t i = 0; i + 1 < perms.size(); ++i)
      if (!(perms[i].mapping < perms[i + 1].mapping)) {
        why << "non-lexicographic at n=" << n;
        ok = false;
        break;
      }
    for (const auto& p : perms)
      if (!p.is_valid()) {
        why << "invalid bijection at n=" << n;
        ok = false;
        break;
      }
    for (std::size_t k = 0; k <= n && ok; ++k) {
      const auto sel = enumerate_k_permutations(n, k, max_n);
      if (sel.size() != falling_factorial(n, k)) {
        why << "k-count(" << n << "," << k << ") = " << sel.size();
        ok = false;
        break;
      }
      for (std::size_t i = 0; i + 1 < sel.size(); ++i)
        if (!(sel[i].indices < sel[i + 1].indices)) {
          why << "k-perms non-lexicographic at n=" << n;
          ok = false;
          break;
        }
      if (k == n) {
        for (std::size_t i = 0; i < sel.size(); ++i)
          if (!std::equal(sel[i].indices.begin(), sel[i].indices.end(),
                          perms[i].mapping.begin())) {
            why << "k=n selections differ from permutations at n=" << n;
            ok = false;
            break;
          }
      }
    }
  }
  if (ok) {
    bool threw = false;
    try {
      enumerate_permutations(max_n + 1, max_n);
    } catch (const CapacityError&) {
      threw = true;
    }
    if (!threw) {
      ok = false;
      why << "cap violation not rejected";
    }
  }
  if (ok) {
    bool threw = false;
    try {
      enumerate_k_permutations(2, 3);
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    if (!threw) {
      ok = false;
      why << "k > n not rejected";
    }
  }
  return make_result("perm.counts", ok,
                     ok ? "n! and n!/(n-k)! counts, lexicographic order, caps enforced"
                        : why.str());
}

CheckResult sampler_validity(std::size_t draws) {
  Rng rng(20240517);
  for (std::size_t i = 0; i < draws; ++i) {
    const std::size_t n = 1 + rng.below(8);
    if (!sample_permutation(n, rng).is_valid())
      return make_result("perm.sampler_validity", false, "invalid bijection sampled");
  }
  Rng a(99), b(99);
  const Permutation pa = sample_permutation(6, a);
  const Permutation pb = sample_permutation(6, b);
  if (pa.mapping != pb.mapping)
    return make_result("perm.sampler_validity", false, "same seed gave different permutations");
  return make_result("perm.sampler_validity", true,
                     std::to_string(draws) + " draws all bijections; seeding reproducible");
}

CheckResult projection_prefix_dependence() {
  Rng rng(7);
  auto h = random_sequence(5, 3, rng);
  auto a = project_k(h, 3);
  auto mutated = h;
  for (std::size_t i = 3; i < 5; ++i)
    for (double& v : mutated[i].data) v += 10.0;
  auto b = project_k(mutated, 3);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].data != b[i].data)
      return make_result("perm.project_k_prefix", false, "suffix change leaked into projection");

  auto padded = project_k(std::vector<Tensor>(h.begin(), h.begin() + 2), 4);
  if (padded.size() != 4 || padded[2].data != std::vector<double>(3, 0.0) ||
      padded[3].shape != h[0].shape)
    return make_result("perm.project_k_prefix", false, "zero padding wrong");
  bool threw = false;
  try {
    project_k({}, 2);
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  return make_result("perm.project_k_prefix", threw,
                     threw ? "prefix-only dependence; padding adopts element shape"
                           : "empty-sequence padding not rejected");
}

CheckResult op_gradients(std::size_t trials, double step, double tol) {
  Rng rng(123);
  double worst = 0.0;
  std::string worst_op = "none";

  auto check = [&](const char* name, std::vector<Tensor>& inputs,
                   const std::function<NodeId(Graph&, std::vector<NodeId>&)>& body) {
    for (Tensor& t : inputs) t.requires_grad = true;
    std::vector<Tensor*> ptrs;
    for (Tensor& t : inputs) ptrs.push_back(&t);
    // weight the output so every position matters
    Tensor weights;
    auto build = [&](Graph& g) {
      std::vector<NodeId> ids;
      for (Tensor& t : inputs) ids.push_back(g.leaf(t));
      NodeId out = body(g, ids);
      if (weights.data.empty()) {
        weights = Tensor::zeros(g.value(out).shape);
        for (double& v : weights.data) v = rng.uniform(-1.0, 1.0);
      }
      return g.sum(g.mul(out, g.constant(weights)));
    };
    const double err = grad_check(build, ptrs, step);
    if (err > worst) {
      worst = err;
      worst_op = name;
    }
  };

  for (std::size_t t = 0; t < trials; ++t) {
    auto rnd = [&](Shape s) {
      Tensor x = Tensor::zeros(std::move(s));
      for (double& v : x.data) v = rng.uniform(-2.0, 2.0);
      return x;
    };
    {
      std::vector<Tensor> in{rnd({3, 4}), rnd({4, 2})};
      check("matmul", in, [](Graph& g, auto& ids) { return g.matmul(ids[0], ids[1]); });
    }
    {
      std::vector<Tensor> in{rnd({3, 4}), rnd({3, 4})};
      check("add", in, [](Graph& g, auto& ids) { return g.add(ids[0], ids[1]); });
      check("sub", in, [](Graph& g, auto& ids) { return g.sub(ids[0], ids[1]); });
      check("mul", in, [](Graph& g, auto& ids) { return g.mul(ids[0], ids[1]); });
    }
    {
      std::vector<Tensor> in{rnd({2, 3}), Tensor::scalar(rng.uniform(-2.0, 2.0))};
      in[1].requires_grad = true;
      check("add_scalar", in, [](Graph& g, auto& ids) { return g.add(ids[0], ids[1]); });
      check("mul_scalar", in, [](Graph& g, auto& ids) { return g.mul(ids[0], ids[1]); });
      check("sub_scalar", in, [](Graph& g, auto& ids) { return g.sub(ids[1], ids[0]); });
    }
    {
      std::vector<Tensor> in{rnd({4, 3})};
      check("tanh", in, [](Graph& g, auto& ids) { return g.tanh(ids[0]); });
      check("sigmoid", in, [](Graph& g, auto& ids) { return g.sigmoid(ids[0]); });
      check("square", in, [](Graph& g, auto& ids) { return g.square(ids[0]); });
      check("scale", in, [](Graph& g, auto& ids) { return g.scale(ids[0], -1.7); });
      check("sum", in, [](Graph& g, auto& ids) { return g.sum(ids[0]); });
      check("mean", in, [](Graph& g, auto& ids) { return g.mean(ids[0]); });
      check("slice_rows", in, [](Graph& g, auto& ids) { return g.slice(ids[0], 0, 1, 3); });
      check("slice_cols", in, [](Graph& g, auto& ids) { return g.slice(ids[0], 1, 0, 2); });
      check("group_mean", in, [](Graph& g, auto& ids) { return g.group_mean(ids[0], 2); });
      check("gather_rows", in, [](Graph& g, auto& ids) {
        return g.gather_rows(ids[0], {3, 0, 0, 2});
      });
    }
    {
      // keep |x| away from the abs kink so the finite difference is clean
      Tensor x = rnd({3, 3});
      for (double& v : x.data) v += (v >= 0 ? 0.5 : -0.5);
      std::vector<Tensor> in{std::move(x)};
      check("abs", in, [](Graph& g, auto& ids) { return g.abs(ids[0]); });
    }
    {
      std::vector<Tensor> in{rnd({3, 4}), rnd({4})};
      check("bias_add", in, [](Graph& g, auto& ids) { return g.bias_add(ids[0], ids[1]); });
    }
    {
      std::vector<Tensor> in{rnd({2, 3}), rnd({2, 2}), rnd({2, 1})};
      check("concat_cols", in, [](Graph& g, auto& ids) {
        std::vector<NodeId> parts{ids[0], ids[1], ids[2]};
        return g.concat(parts, 1);
      });
      check("concat_rows", in, [](Graph& g, auto& ids) {
        std::vector<NodeId> parts{ids[0], ids[0]};
        return g.concat(parts, 0);
      });
    }
  }
  const bool ok = worst < tol;
  return make_result("autodiff.op_gradients", ok,
                     "max rel err " + fmt(worst) + " (worst op: " + worst_op + ", " +
                         std::to_string(trials) + " trials, tol " + fmt(tol) + ")");
}

CheckResult unused_param_zero_grad() {
  Tensor used = Tensor::row({1.0, 2.0});
  Tensor unused = Tensor::row({3.0, 4.0});
  used.requires_grad = unused.requires_grad = true;
  used.zero_grad();
  unused.zero_grad();
  Graph g;
  NodeId loss = g.sum(g.square(g.leaf(used)));
  g.leaf(unused);  // present in the graph, ignored by the loss
  g.backward(loss);
  const bool ok = unused.grad == std::vector<double>{0.0, 0.0} &&
                  used.grad == std::vector<double>{2.0, 4.0};
  return make_result("autodiff.unused_param_zero_grad", ok,
                     ok ? "ignored parameter kept exactly zero gradient" : "gradient leaked");
}

CheckResult forward_determinism() {
  auto run = [](std::uint64_t seed) {
    Rng rng(seed);
    Tensor a = Tensor::zeros({8, 8});
    Tensor b = Tensor::zeros({8, 8});
    for (double& v : a.data) v = rng.uniform(-1.0, 1.0);
    for (double& v : b.data) v = rng.uniform(-1.0, 1.0);
    Graph g;
    NodeId out = g.tanh(g.matmul(g.leaf(a), g.leaf(b)));
    return g.value(g.mean(out)).item();
  };
  const double x = run(5);
  const double y = run(5);
  const bool ok = std::memcmp(&x, &y, sizeof(double)) == 0;
  return make_result("autodiff.forward_determinism", ok,
                     ok ? "identical inputs give bit-identical outputs" : "nondeterminism");
}

CheckResult pooling_invariance(std::size_t max_n, std::size_t param_draws, double tol) {
  Rng rng(31337);
  double worst = 0.0;
  for (std::size_t draw = 0; draw < param_draws; ++draw) {
    for (std::size_t n = 2; n <= max_n; ++n) {
      const std::size_t k = 1 + rng.below(std::min<std::size_t>(n, 3));
      auto model = random_kary_model(k, 1000 + draw * 17 + n);
      auto f = f_of(model);
      auto h = random_sequence(n, model->spec.embed_dim(), rng);

      const Tensor exact_base = janossy_exact(f, h);
      const Tensor kary_base = janossy_kary(f, h, k);
      const Tensor canon_base = canonical_pool(f, h, CanonicalKey::kAscending);

      // exhaustive orderings up to n=4; a fixed sample above that
      const auto all = enumerate_permutations(n);
      std::vector<Permutation> tested;
      if (n <= 4) {
        tested = all;
      } else {
        for (int i = 0; i < 12; ++i) tested.push_back(sample_permutation(n, rng));
      }
      for (const auto& p : tested) {
        auto hp = apply_permutation(h, p);
        worst = std::max(worst, rel_err_vec(janossy_exact(f, hp), exact_base));
        worst = std::max(worst, rel_err_vec(janossy_kary(f, hp, k), kary_base));
        const Tensor canon = canonical_pool(f, hp, CanonicalKey::kAscending);
        if (canon.data != canon_base.data) worst = std::max(worst, 1.0);
      }
    }
  }
  const bool ok = worst < tol;
  return make_result("pooling.invariance", ok,
                     "max rel deviation under input permutation " + fmt(worst) + " (tol " +
                         fmt(tol) + ")");
}

CheckResult prop1_equivalence(std::size_t max_n, std::size_t param_draws, double tol) {
  KaryPoolFn lib = [](const SequenceFunction& f, const std::vector<Tensor>& h, std::size_t k) {
    return janossy_kary(f, h, k);
  };
  CheckResult r = prop1_equivalence_against(lib, max_n, param_draws, tol);
  r.name = "pooling.prop1_equivalence";
  return r;
}

CheckResult prop1_equivalence_against(const KaryPoolFn& kary, std::size_t max_n,
                                      std::size_t param_draws, double tol) {
  Rng rng(424242);
  double worst = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t draw = 0; draw < param_draws; ++draw) {
        auto model = random_kary_model(k, 9000 + 31 * n + 7 * k + draw);
        auto f = f_of(model);
        auto h = random_sequence(n, model->spec.embed_dim(), rng);
        const Tensor fast = kary(f, h, k);
        const Tensor naive = naive_projected_pool(f, h, k);
        worst = std::max(worst, rel_err_vec(fast, naive));
      }
    }
  }
  const bool ok = worst < tol;
  return make_result("pooling.prop1_equivalence_against", ok,
                     "max rel err vs full-permutation route " + fmt(worst) + " (n <= " +
                         std::to_string(max_n) + ", " + std::to_string(param_draws) +
                         " parameterizations per (n,k), tol " + fmt(tol) + ")");
}

CheckResult staircase_containment(std::size_t max_k, std::size_t max_n, std::size_t param_draws,
                                  double tol) {
  Rng rng(515151);
  double worst = 0.0;
  for (std::size_t k = 2; k <= max_k; ++k) {
    for (std::size_t n = k; n <= max_n; ++n) {
      for (std::size_t draw = 0; draw < param_draws; ++draw) {
        auto model = random_kary_model(k - 1, 5000 + 13 * n + 5 * k + draw);
        auto f = f_of(model);
        // lift: declared arity k, still reads only the first k-1 elements
        SequenceFunction lifted;
        lifted.prefix_arity = k;
        lifted.eval = [f, k](std::size_t len, const std::vector<Tensor>& seq) {
          std::vector<Tensor> head(seq.begin(), seq.begin() + (k - 1));
          return f.eval(len, head);
        };
        auto h = random_sequence(n, model->spec.embed_dim(), rng);
        const Tensor low = janossy_kary(f, h, k - 1);
        const Tensor high = janossy_kary(lifted, h, k);
        worst = std::max(worst, rel_err_vec(high, low));
      }
    }
  }
  const bool ok = worst < tol;
  return make_result("pooling.staircase_containment", ok,
                     "max rel gap lifting arity k-1 to k: " + fmt(worst) + " (k <= " +
                         std::to_string(max_k) + ", n <= " + std::to_string(max_n) + ", tol " +
                         fmt(tol) + ")");
}

CheckResult deepsets_equivalence(std::size_t max_n, std::size_t param_draws) {
  Rng rng(616161);
  for (std::size_t n = 1; n <= max_n; ++n) {
    for (std::size_t draw = 0; draw < param_draws; ++draw) {
      auto model = random_kary_model(1, 7700 + n * 11 + draw);
      auto f = f_of(model);
      auto h = random_sequence(n, model->spec.embed_dim(), rng);
      const Tensor pooled = janossy_kary(f, h, 1);
      Tensor manual;
      for (std::size_t i = 0; i < n; ++i) {
        Tensor term = f.eval(n, {h[i]});
        if (manual.data.empty()) {
          manual = term;
        } else {
          for (std::size_t j = 0; j < manual.data.size(); ++j) manual.data[j] += term.data[j];
        }
      }
      const double inv = 1.0 / static_cast<double>(n);
      for (double& v : manual.data) v *= inv;  // same rounding as the pooled route
      if (pooled.data != manual.data)
        return make_result("pooling.deepsets_equivalence", false,
                           "k=1 pooling differs from the per-element mean");
    }
  }
  return make_result("pooling.deepsets_equivalence", true,
                     "k=1 pooling is exactly the mean of per-element f");
}

CheckResult kary_zero_padding() {
  Rng rng(818181);
  auto model = random_kary_model(3, 321);
  auto f = f_of(model);
  auto h = random_sequence(2, model->spec.embed_dim(), rng);
  const Tensor got = janossy_kary(f, h, 3);

  // direct route: 2! orderings of the real elements, zeros stay at the tail
  Tensor zero = Tensor::zeros(h[0].shape);
  Tensor a = f.eval(2, {h[0], h[1], zero});
  Tensor b = f.eval(2, {h[1], h[0], zero});
  for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] = 0.5 * (a.data[i] + b.data[i]);
  const double err = rel_err_vec(got, a);
  const bool ok = err < 1e-12;
  return make_result("pooling.kary_zero_padding", ok,
                     "short-sequence padding err " + fmt(err) +
                         " (padding fixed at the tail, only real elements permute)");
}

CheckResult parameter_count_table() {
  struct Row {
    int k;
    FArch f;
    RhoArch rho;
    std::size_t expected;
  };
  const Row rows[] = {
      {1, FArch::kMlp30, RhoArch::kLinear, 3061},
      {2, FArch::kMlp30, RhoArch::kLinear, 3061},
      {3, FArch::kMlp30, RhoArch::kLinear, 3031},
      {1, FArch::kMlp30, RhoArch::kMlp100, 6231},
      {2, FArch::kMlp30, RhoArch::kMlp100, 6231},
      {3, FArch::kMlp30, RhoArch::kMlp100, 6201},
      {0, FArch::kLstm50, RhoArch::kLinear, 30451},
      {0, FArch::kGru80, RhoArch::kLinear, 43761},
      {0, FArch::kLstm50, RhoArch::kMlp100, 35601},
      {0, FArch::kGru80, RhoArch::kMlp100, 51881},
  };
  std::ostringstream bad;
  for (const Row& row : rows) {
    ModelSpec spec;
    spec.vocab = 100;
    spec.k = row.k;
    spec.f_arch = row.f;
    spec.rho_arch = row.rho;
    const std::size_t formula = trainable_param_count(spec);
    const std::size_t actual = init_params(spec, 1).trainable_size();
    if (formula != row.expected || actual != row.expected)
      bad << " (k=" << row.k << "," << to_string(row.f) << "," << to_string(row.rho) << ") got "
          << formula << "/" << actual << " want " << row.expected;
  }
  const std::string detail = bad.str();
  return make_result("nets.parameter_count_table", detail.empty(),
                     detail.empty() ? "all ten published counts reproduced exactly" : detail);
}

CheckResult model_gradient_checks(double step, double tol) {
  double worst = 0.0;
  std::string worst_combo;

  auto run_combo = [&](const std::string& label, const ModelSpec& spec,
                       const std::vector<std::vector<int>>& xs,
                       const std::vector<double>& ys, bool pooled) {
    Params params = init_params(spec, 97);
    std::vector<Tensor*> ptrs;
    for (auto& [name, t] : params.trainable) ptrs.push_back(&t);
    std::vector<Permutation> perms;
    if (!pooled) {
      Rng rng(5);
      for (std::size_t b = 0; b < xs.size(); ++b)
        perms.push_back(sample_permutation(xs[b].size(), rng));
    }
    ModelSpec local = spec;
    auto build = [&](Graph& g) -> NodeId {
      NodeId pred = pooled
                        ? build_pooled_predictions(g, local, params, xs)
                        : apply_rho(g, local, params, build_f_permuted(g, local, params, xs, perms));
      Tensor t = Tensor::matrix(ys.size(), 1, std::vector<double>(ys));
      return g.mean(g.square(g.sub(pred, g.constant(std::move(t)))));
    };
    // norm-ratio comparison: entry-wise division is meaningless for the
    // handful of entries whose true gradient sits below the finite
    // difference noise floor (~1e-10 at this loss scale)
    const double err = grad_check_norms(build, ptrs, step);
    if (err > worst) {
      worst = err;
      worst_combo = label;
    }
  };

  const std::vector<std::vector<int>> mlp_xs = {{3, 9, 1, 7}, {0, 4, 4, 2}};
  const std::vector<double> mlp_ys = {0.7, -0.4};
  for (RhoArch rho : {RhoArch::kLinear, RhoArch::kMlp100}) {
    ModelSpec spec;
    spec.vocab = 10;
    spec.k = 2;
    spec.f_arch = FArch::kMlp30;
    spec.rho_arch = rho;
    run_combo("mlp30/" + to_string(rho), spec, mlp_xs, mlp_ys, /*pooled=*/true);
  }
  const std::vector<std::vector<int>> rnn_xs = {{3, 9}, {0, 4}};
  const std::vector<double> rnn_ys = {0.9, -0.2};
  for (FArch arch : {FArch::kLstm50, FArch::kGru80}) {
    for (RhoArch rho : {RhoArch::kLinear, RhoArch::kMlp100}) {
      ModelSpec spec;
      spec.vocab = 10;
      spec.k = 0;
      spec.f_arch = arch;
      spec.rho_arch = rho;
      run_combo(to_string(arch) + "/" + to_string(rho), spec, rnn_xs, rnn_ys, /*pooled=*/false);
    }
  }
  const bool ok = worst < tol;
  return make_result("nets.model_gradient_checks", ok,
                     "max rel err " + fmt(worst) + " (worst: " + worst_combo +
                         "; every f/rho combination, central differences, step " + fmt(step) +
                         ")");
}

CheckResult rnn_order_sensitivity() {
  for (FArch arch : {FArch::kLstm50, FArch::kGru80}) {
    auto model = random_rnn_model(arch, 1234);
    Rng rng(88);
    auto h = random_sequence(5, model->spec.embed_dim(), rng);
    auto swapped = h;
    std::swap(swapped[0], swapped[4]);
    const Tensor a = rnn_forward(model->spec, model->params, h);
    const Tensor b = rnn_forward(model->spec, model->params, swapped);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
      diff = std::max(diff, std::fabs(a.data[i] - b.data[i]));
    if (diff < 1e-8)
      return make_result("nets.rnn_order_sensitivity", false,
                         to_string(arch) + " output unchanged under reordering");
  }
  return make_result("nets.rnn_order_sensitivity", true,
                     "recurrent f responds to input order (as a pooled base should)");
}

CheckResult frozen_embedding() {
  ModelSpec spec;
  spec.vocab = 10;
  spec.k = 1;
  Params params = init_params(spec, 44);
  const std::vector<double> before = params.embedding.data;

  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 8;
  cfg.eval_every = 1;
  TaskSpec task = TaskSpec::paper_preset(TaskName::kUniqueCount, 3);
  task.n_train = 32;
  task.n_test = 8;
  SplitDataset data = generate(task);

  PoolingSpec pooling;
  pooling.strategy = PoolingStrategy::kKary;
  pooling.k = 1;
  auto opt = Optimizer::create(cfg);
  Graph scratch;
  Batch batch;
  for (std::size_t i = 0; i < 8; ++i) {
    batch.xs.push_back(data.train.inputs[i]);
    batch.ys.push_back(data.train.targets[i]);
  }
  exact_kary_step(spec, params, batch, cfg.loss, *opt, scratch);

  const bool frozen = params.embedding.data == before;
  const bool no_grad = params.embedding.grad.empty();
  return make_result("nets.frozen_embedding", frozen && no_grad,
                     frozen && no_grad ? "embedding bit-identical and gradient-free after a step"
                                       : "embedding moved or received gradient");
}

CheckResult pi_sgd_gradient_identity(double tol) {
  ModelSpec spec;
  spec.vocab = 10;
  spec.k = 0;
  spec.f_arch = FArch::kGru80;
  spec.rho_arch = RhoArch::kLinear;
  Params params = init_params(spec, 2024);
  const std::vector<int> x = {3, 7, 1};
  const double y = 5.0;
  const auto perms = enumerate_permutations(3);

  // route A: mean over permutations of the per-permutation gradient
  std::vector<std::vector<double>> avg;
  for (const auto& [name, t] : params.trainable) avg.emplace_back(t.size(), 0.0);
  Graph g;
  for (const auto& p : perms) {
    params.zero_grads();
    g.clear();
    NodeId pred = apply_rho(g, spec, params, build_f_permuted(g, spec, params, {x}, {p}));
    NodeId loss = g.mean(g.abs(g.sub(pred, g.constant(Tensor::matrix(1, 1, {y})))));
    g.backward(loss);
    for (std::size_t pi = 0; pi < params.trainable.size(); ++pi)
      for (std::size_t i = 0; i < avg[pi].size(); ++i)
        avg[pi][i] += params.trainable[pi].second.grad[i];
  }
  for (auto& v : avg)
    for (double& x2 : v) x2 /= static_cast<double>(perms.size());

  // route B: one backward pass through J-bar, all permutations in the batch
  params.zero_grads();
  g.clear();
  std::vector<std::vector<int>> tiled(perms.size(), x);
  NodeId pred = apply_rho(g, spec, params, build_f_permuted(g, spec, params, tiled, perms));
  NodeId loss = g.mean(g.abs(
      g.sub(pred, g.constant(Tensor::matrix(perms.size(), 1,
                                            std::vector<double>(perms.size(), y))))));
  g.backward(loss);

  double worst = 0.0;
  for (std::size_t pi = 0; pi < params.trainable.size(); ++pi) {
    const auto& exact = params.trainable[pi].second.grad;
    for (std::size_t i = 0; i < exact.size(); ++i)
      worst = std::max(worst,
                       std::fabs(avg[pi][i] - exact[i]) / std::max(1e-12, std::fabs(exact[i])));
  }
  params.zero_grads();
  const bool ok = worst < tol;
  return make_result("training.pi_sgd_gradient_identity", ok,
                     "mean per-permutation gradient vs exact objective gradient: rel err " +
                         fmt(worst) + " (n=3, tol " + fmt(tol) + ")");
}

CheckResult jensen_upper_bound(std::size_t max_n) {
  Rng rng(99991);
  double worst_violation = 0.0;
  for (std::size_t n = 2; n <= max_n; ++n) {
    for (std::size_t draw = 0; draw < 5; ++draw) {
      auto model = random_kary_model(2, 447 + draw);
      auto f = f_of(model);
      // scalar f: first coordinate of the 30-dim output
      SequenceFunction scalar_f;
      scalar_f.eval = [f](std::size_t len, const std::vector<Tensor>& seq) {
        return Tensor::scalar(f.eval(len, seq).data[0]);
      };
      auto h = random_sequence(n, model->spec.embed_dim(), rng);
      const double y = rng.uniform(-1.0, 1.0);
      const auto perms = enumerate_permutations(n);
      for (LossKind kind : {LossKind::kL1, LossKind::kMse}) {
        double j_bar = 0.0, mean_out = 0.0;
        for (const auto& p : perms) {
          const double out = scalar_f.eval(n, apply_permutation(h, p)).item();
          j_bar += loss_value(kind, out, y);
          mean_out += out;
        }
        j_bar /= static_cast<double>(perms.size());
        mean_out /= static_cast<double>(perms.size());
        const double l_bar = loss_value(kind, mean_out, y);
        worst_violation = std::max(worst_violation, l_bar - j_bar);
      }
    }
  }
  const bool ok = worst_violation <= 1e-12;
  return make_result("training.jensen_upper_bound", ok,
                     "max violation of J >= L: " + fmt(worst_violation) +
                         " (convex losses, identity rho, exhaustive enumeration)");
}

CheckResult rho_composition() {
  Rng rng(2468);
  auto model = random_kary_model(2, 864, RhoArch::kLinear);
  auto f = f_of(model);
  auto h = random_sequence(4, model->spec.embed_dim(), rng);

  // linear rho commutes with the pooling average
  RhoFunction rho = make_rho_fn(model->spec, model->params);
  const Tensor outside = composed_forward(janossy_exact(f, h), rho);
  SequenceFunction inside;
  inside.eval = [f, rho](std::size_t n, const std::vector<Tensor>& seq) {
    return rho(f.eval(n, seq));
  };
  const Tensor averaged = janossy_exact(inside, h);
  const double lin_err = rel_err_vec(averaged, outside);

  // tanh rho does not (the Jensen gap that makes sampled estimates biased)
  RhoFunction tanh_rho = [](const Tensor& t) {
    Tensor out = t;
    for (double& v : out.data) v = std::tanh(v);
    return out;
  };
  auto h3 = random_sequence(3, model->spec.embed_dim(), rng);
  SequenceFunction scaled;
  scaled.eval = [f](std::size_t n, const std::vector<Tensor>& seq) {
    Tensor out = f.eval(n, seq);
    for (double& v : out.data) v *= 4.0;  // spread outputs into tanh's curved region
    return out;
  };
  const Tensor t_outside = composed_forward(janossy_exact(scaled, h3), tanh_rho);
  SequenceFunction t_inside;
  t_inside.eval = [scaled, tanh_rho](std::size_t n, const std::vector<Tensor>& seq) {
    return tanh_rho(scaled.eval(n, seq));
  };
  const Tensor t_avg = janossy_exact(t_inside, h3);
  double gap = 0.0;
  for (std::size_t i = 0; i < t_avg.data.size(); ++i)
    gap = std::max(gap, std::fabs(t_avg.data[i] - t_outside.data[i]));

  const bool ok = lin_err < 1e-12 && gap > 1e-6;
  return make_result("pooling.rho_composition", ok,
                     "linear rho commutes (err " + fmt(lin_err) + "); tanh rho gap " + fmt(gap) +
                         " demonstrates the nonlinear bias");
}

CheckResult sgd_schedule_conditions() {
  const double base = 0.1, decay = 1e-3;
  double sum_small = 0.0, sum_total = 0.0, sumsq_head = 0.0, sumsq_tail = 0.0;
  for (std::uint64_t t = 0; t < 1000000; ++t) {
    const double eta = sgd_schedule_rate(base, decay, t);
    if (eta <= 0.0 || eta >= 1.0)
      return make_result("training.sgd_schedule_conditions", false, "eta outside (0,1)");
    sum_total += eta;
    if (t < 10000) sum_small += eta;
    if (t < 100000)
      sumsq_head += eta * eta;
    else
      sumsq_tail += eta * eta;
  }
  const bool diverging = sum_total > 2.5 * sum_small;  // partial sums keep growing
  const bool converging = sumsq_tail < 0.05 * (sumsq_head + sumsq_tail);
  const bool ok = diverging && converging;
  return make_result("training.sgd_schedule_conditions", ok,
                     "sum(eta) grows without bound (ratio " + fmt(sum_total / sum_small) +
                         "), sum(eta^2) tail fraction " +
                         fmt(sumsq_tail / (sumsq_head + sumsq_tail)));
}

CheckResult checkpoint_roundtrip() {
  namespace fs = std::filesystem;
  ModelSpec spec;
  spec.vocab = 10;
  spec.k = 2;
  spec.rho_arch = RhoArch::kMlp100;
  Params params = init_params(spec, 31415);
  const fs::path path = fs::temp_directory_path() / "janossy_ck_test.json";
  save_checkpoint(path.string(), spec, params, 31415);
  Checkpoint ck = load_checkpoint(path.string());
  fs::remove(path);
  bool same = ck.params.checksum() == params.checksum();
  for (std::size_t i = 0; i < params.trainable.size() && same; ++i)
    same = ck.params.trainable[i].second.data == params.trainable[i].second.data;
  same = same && ck.params.embedding.data == params.embedding.data;
  return make_result("nets.checkpoint_roundtrip", same,
                     same ? "save/load round trip bit-exact" : "round trip altered parameters");
}

CheckResult config_roundtrip() {
  ExperimentConfig c;
  c.task = TaskSpec::paper_preset(TaskName::kRange, 0);
  c.task.n_train = 512;
  c.task.n_test = 128;
  c.model.k = 2;
  c.pooling.strategy = PoolingStrategy::kKary;
  c.pooling.k = 2;
  c.train.epochs = 3;
  c.replicates = 2;
  c.master_seed = 77;
  const auto j = c.to_json();
  const auto back = ExperimentConfig::from_json(j);
  if (back.to_json().dump() != j.dump())
    return make_result("harness.config_roundtrip", false, "JSON round trip changed the config");

  // invalid combinations must be rejected with a named constraint
  bool rejected = false;
  try {
    ExperimentConfig bad = c;
    bad.model.k = 0;
    bad.model.f_arch = FArch::kGru80;
    bad.validate();
  } catch (const ConfigError&) {
    rejected = true;
  }
  bool rejected2 = false;
  try {
    ExperimentConfig bad = c;
    bad.pooling.k = 3;
    bad.validate();
  } catch (const ConfigError&) {
    rejected2 = true;
  }
  const bool ok = rejected && rejected2;
  return make_result("harness.config_roundtrip", ok,
                     ok ? "round trip stable; inconsistent configs rejected"
                        : "invalid config accepted");
}

CheckResult dataset_invariants() {
  Rng rng(13579);
  for (TaskName name : {TaskName::kSum, TaskName::kRange, TaskName::kUniqueSum,
                        TaskName::kUniqueCount, TaskName::kVariance}) {
    TaskSpec spec = TaskSpec::paper_preset(name, 421);
    spec.n_train = 64;
    spec.n_test = 16;
    const SplitDataset a = generate(spec);
    const SplitDataset b = generate(spec);
    if (a.train.inputs != b.train.inputs || a.train.targets != b.train.targets ||
        a.test.inputs != b.test.inputs)
      return make_result("tasks.dataset_invariants", false,
                         "same seed produced different data for " + to_string(name));
    for (const auto& x : a.train.inputs) {
      const double y = target_fn(name, x);
      Permutation p = sample_permutation(x.size(), rng);
      std::vector<int> xp;
      for (auto i : p.mapping) xp.push_back(x[static_cast<std::size_t>(i)]);
      if (target_fn(name, xp) != y)
        return make_result("tasks.dataset_invariants", false,
                           "target not permutation-invariant for " + to_string(name));
    }
  }
  const bool spot = target_fn(TaskName::kSum, {1, 2, 3, 4, 5}) == 15.0 &&
                    target_fn(TaskName::kRange, {10, 3, 7, 3, 9}) == 7.0 &&
                    target_fn(TaskName::kUniqueSum, {2, 2, 5, 7}) == 14.0 &&
                    target_fn(TaskName::kUniqueCount, {2, 2, 5, 7}) == 3.0 &&
                    target_fn(TaskName::kVariance, {1, 3}) == 1.0;
  return make_result("tasks.dataset_invariants", spot,
                     spot ? "seeded regeneration bit-identical; targets permutation-invariant"
                          : "target spot values wrong");
}

CheckResult metric_spot_checks() {
  const std::vector<double> targets = {3.0, -1.0, 12.0};
  Metrics eq = compute_metrics(targets, targets);
  std::vector<double> shifted = targets;
  for (double& v : shifted) v += 0.4;
  Metrics close = compute_metrics(shifted, targets);
  std::vector<double> off = targets;
  for (double& v : off) v += 3.0;
  Metrics three = compute_metrics(off, targets);
  const bool ok = eq.accuracy == 1.0 && eq.rmse == 0.0 && eq.mae == 0.0 &&
                  close.accuracy == 1.0 && std::fabs(close.mae - 0.4) < 1e-12 &&
                  std::fabs(three.rmse - 3.0) < 1e-12 &&
                  compute_metrics({2.5}, {3.0}).accuracy == 1.0 &&   // half rounds away from zero
                  compute_metrics({-2.5}, {-3.0}).accuracy == 1.0 &&
                  compute_metrics({2.49}, {3.0}).accuracy == 0.0;
  return make_result("tasks.metric_spot_checks", ok,
                     ok ? "accuracy rounding, rmse, mae all as specified" : "metric mismatch");
}

CheckResult variance_regularizer_properties() {
  Rng rng(1212);
  auto inv = sum_elements_fn();
  auto h = random_sequence(4, 3, rng);
  const double zero_for_invariant = variance_regularizer(inv, h, rng);
  const double zero_for_singleton = variance_regularizer(inv, random_sequence(1, 3, rng), rng);

  auto model = random_rnn_model(FArch::kGru80, 5150);
  auto f = f_of(model);
  auto h2 = random_sequence(4, model->spec.embed_dim(), rng);
  double min_pen = 1e300;
  for (int i = 0; i < 5; ++i) min_pen = std::min(min_pen, variance_regularizer(f, h2, rng));
  const bool ok = zero_for_invariant == 0.0 && zero_for_singleton == 0.0 && min_pen >= 0.0;
  return make_result("training.variance_regularizer", ok,
                     "0 for invariant f and |h|<=1; nonnegative otherwise (sample min " +
                         fmt(min_pen) + ")");
}

CheckResult inference_averaging_equivalence(std::size_t max_n, double tol) {
  double worst = 0.0;
  for (std::size_t n = 2; n <= max_n; ++n) {
    auto rnn = random_rnn_model(FArch::kGru80, 777 + n, RhoArch::kMlp100);
    auto mlp = random_kary_model(2, 888 + n, RhoArch::kMlp100);
    Rng rng(n);
    std::vector<int> x(n);
    for (auto& v : x) v = static_cast<int>(rng.below(10));

    for (auto& m : {rnn, mlp}) {
      if (!m->spec.full_sequence() && n < static_cast<std::size_t>(m->spec.k)) continue;
      const double via_model = predict_exhaustive(m->spec, m->params, {x})[0];
      std::vector<Tensor> h;
      for (int d : x) h.push_back(embed(m->spec, m->params, d));
      const double via_pooling = janossy_exact(fprime_of(m), h).item();
      worst = std::max(worst,
                       std::fabs(via_model - via_pooling) / std::max(1.0, std::fabs(via_pooling)));
    }
  }
  const bool ok = worst < tol;
  return make_result("training.inference_averaging", ok,
                     "exhaustive permutation-averaged prediction vs pooled rho(f): rel err " +
                         fmt(worst) + " (n <= " + std::to_string(max_n) + ")");
}

CheckResult training_determinism() {
  ExperimentConfig c;
  c.task = TaskSpec::paper_preset(TaskName::kSum, 0);
  c.task.n_train = 256;
  c.task.n_test = 64;
  c.model.k = 1;
  c.pooling.strategy = PoolingStrategy::kKary;
  c.pooling.k = 1;
  c.train.epochs = 2;
  c.train.eval_every = 1;
  c.replicates = 2;
  c.master_seed = 31337;
  c.parallel = 2;

  const RunResult a = run_experiment(c, /*write_outputs=*/false);
  const RunResult b = run_experiment(c, /*write_outputs=*/false);
  bool same = a.reports.size() == b.reports.size();
  for (std::size_t i = 0; same && i < a.reports.size(); ++i)
    same = report_to_json(a.reports[i], c, /*deterministic=*/true).dump() ==
           report_to_json(b.reports[i], c, /*deterministic=*/true).dump();
  return make_result("harness.training_determinism", same,
                     same ? "identical config reran to bit-identical reports (wall time aside)"
                          : "rerun diverged");
}

CheckResult sampler_chi_square(std::size_t n, std::size_t draws, double min_p) {
  Rng rng(271828);
  std::vector<std::uint64_t> counts(factorial(n), 0);
  for (std::size_t i = 0; i < draws; ++i)
    ++counts[permutation_rank(sample_permutation(n, rng))];
  const ChiSquareResult r = chi_square_uniform(counts);
  const bool ok = r.p_value > min_p;
  return make_result("perm.sampler_chi_square", ok,
                     "chi2 = " + fmt(r.statistic) + " over " + std::to_string(counts.size()) +
                         " cells, p = " + fmt(r.p_value) + " (require > " + fmt(min_p) + ")");
}

CheckResult digit_uniformity(std::size_t min_draws, double min_p) {
  TaskSpec spec = TaskSpec::paper_preset(TaskName::kVariance, 5050);
  spec.n_train = (min_draws + spec.seq_len - 1) / spec.seq_len;
  spec.n_test = 1;
  const SplitDataset data = generate(spec);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(spec.vocab), 0);
  for (const auto& x : data.train.inputs)
    for (int d : x) ++counts[static_cast<std::size_t>(d)];
  const ChiSquareResult r = chi_square_uniform(counts);
  const bool ok = r.p_value > min_p;
  return make_result("tasks.digit_uniformity", ok,
                     "chi2 p = " + fmt(r.p_value) + " over " + std::to_string(counts.size()) +
                         " digit cells");
}

CheckResult sampled_unbiasedness(std::size_t pairs, std::size_t draws, double se_mult) {
  double worst_sigmas = 0.0;
  for (std::size_t pair = 0; pair < pairs; ++pair) {
    auto model = random_kary_model(4, 606 + pair);
    auto f = f_of(model);
    // scalar projection of the 30-dim f output keeps the arithmetic simple
    SequenceFunction g;
    g.eval = [f](std::size_t n, const std::vector<Tensor>& seq) {
      const Tensor out = f.eval(n, seq);
      double acc = 0.0;
      for (double v : out.data) acc += v;
      return Tensor::scalar(acc);
    };
    Rng hrng(9090 + pair);
    auto h = random_sequence(4, model->spec.embed_dim(), hrng);
    const double exact = janossy_exact(g, h).item();

    Rng rng(112233 + pair);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
      const double v = janossy_sampled(g, h, 1, rng).item();
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(draws);
    const double var = std::max(0.0, sumsq / static_cast<double>(draws) - mean * mean);
    const double se = std::sqrt(var / static_cast<double>(draws));
    const double sigmas = se > 0 ? std::fabs(mean - exact) / se : 0.0;
    worst_sigmas = std::max(worst_sigmas, sigmas);
  }
  const bool ok = worst_sigmas < se_mult;
  return make_result("pooling.sampled_unbiasedness", ok,
                     "max |mean - exact| = " + fmt(worst_sigmas) + " standard errors over " +
                         std::to_string(pairs) + " (f,h) pairs, " + std::to_string(draws) +
                         " draws each (require < " + fmt(se_mult) + ")");
}

CheckResult inference_variance_monotone(std::size_t seeds) {
  auto model = random_rnn_model(FArch::kGru80, 404, RhoArch::kLinear);
  std::vector<int> x = {7, 2, 9, 4, 0};
  auto spread = [&](std::size_t m) {
    std::vector<double> outs;
    outs.reserve(seeds);
    for (std::size_t s = 0; s < seeds; ++s) {
      Rng rng(1000 + s);
      outs.push_back(predict_sampled(model->spec, model->params, {x}, m, rng)[0]);
    }
    const double sd = sample_std(outs);
    return sd * sd;
  };
  const double v1 = spread(1), v5 = spread(5), v20 = spread(20);
  const bool ok = v5 < v1 && v20 < v5;
  return make_result("training.inference_variance_monotone", ok,
                     "estimator variance by sample count: m=1 " + fmt(v1) + ", m=5 " + fmt(v5) +
                         ", m=20 " + fmt(v20));
}

}  // namespace checks

std::vector<CheckResult> run_verify(VerifyLevel level) {
  using namespace checks;
  const bool full = level == VerifyLevel::kFull;
  std::vector<std::function<CheckResult()>> suite = {
      [=] { return permutation_counts(full ? 7 : 5); },
      [=] { return sampler_validity(full ? 500 : 100); },
      [] { return projection_prefix_dependence(); },
      [=] { return op_gradients(full ? 100 : 20, 1e-6, 1e-5); },
      [] { return unused_param_zero_grad(); },
      [] { return forward_determinism(); },
      [=] { return pooling_invariance(full ? 6 : 4, full ? 50 : 10, 1e-9); },
      [=] { return prop1_equivalence(full ? 6 : 4, full ? 50 : 10, 1e-10); },
      [=] { return staircase_containment(full ? 4 : 3, full ? 6 : 4, full ? 10 : 4, 1e-10); },
      [=] { return deepsets_equivalence(full ? 6 : 4, 5); },
      [] { return kary_zero_padding(); },
      [] { return parameter_count_table(); },
      [=] { return model_gradient_checks(1e-6, 1e-5); },
      [] { return rnn_order_sensitivity(); },
      [] { return frozen_embedding(); },
      [] { return pi_sgd_gradient_identity(1e-10); },
      [=] { return jensen_upper_bound(full ? 4 : 3); },
      [] { return rho_composition(); },
      [] { return sgd_schedule_conditions(); },
      [] { return checkpoint_roundtrip(); },
      [] { return config_roundtrip(); },
      [] { return dataset_invariants(); },
      [] { return metric_spot_checks(); },
      [] { return variance_regularizer_properties(); },
      [=] { return inference_averaging_equivalence(full ? 5 : 3, 1e-9); },
      [] { return training_determinism(); },
  };
  if (full) {
    suite.push_back([] { return sampler_chi_square(4, 120000, 0.001); });
    suite.push_back([] { return digit_uniformity(100000, 0.001); });
    suite.push_back([] { return sampled_unbiasedness(10, 100000, 4.0); });
    suite.push_back([] { return inference_variance_monotone(200); });
  }

  std::vector<CheckResult> results;
  results.reserve(suite.size());
  for (auto& fn : suite) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r = fn();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace janossy
