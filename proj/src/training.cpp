#include "janossy/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace janossy {

OptimizerKind optimizer_from(const std::string& s) {
  if (s == "sgd_schedule") return OptimizerKind::kSgdSchedule;
  if (s == "adam_style") return OptimizerKind::kAdamStyle;
  throw std::invalid_argument("unknown optimizer '" + s + "'");
}

LossKind loss_from(const std::string& s) {
  if (s == "l1") return LossKind::kL1;
  if (s == "mse") return LossKind::kMse;
  throw std::invalid_argument("unknown loss '" + s + "'");
}

std::string to_string(OptimizerKind k) {
  return k == OptimizerKind::kSgdSchedule ? "sgd_schedule" : "adam_style";
}

std::string to_string(LossKind k) { return k == LossKind::kL1 ? "l1" : "mse"; }

void TrainConfig::validate() const {
  if (base_lr <= 0.0) throw std::invalid_argument("TrainConfig: base_lr must be > 0");
  if (optimizer == OptimizerKind::kSgdSchedule && (base_lr >= 1.0 || sgd_decay <= 0.0))
    throw std::invalid_argument(
        "TrainConfig: sgd_schedule needs base_lr in (0,1) and decay > 0 for the "
        "diminishing-rate conditions");
  if (batch_size == 0) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
  if (epochs == 0) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
  if (variance_reg_weight < 0.0)
    throw std::invalid_argument("TrainConfig: variance_reg_weight must be >= 0");
  if (eval_every == 0) throw std::invalid_argument("TrainConfig: eval_every must be >= 1");
}

double loss_value(LossKind kind, double pred, double target) {
  const double d = pred - target;
  return kind == LossKind::kL1 ? std::fabs(d) : d * d;
}

double sgd_schedule_rate(double base_lr, double decay, std::uint64_t t) {
  return base_lr / (1.0 + decay * static_cast<double>(t));
}

namespace {

class SgdSchedule final : public Optimizer {
 public:
  SgdSchedule(double base_lr, double decay) : base_lr_(base_lr), decay_(decay) {}
  void apply(Params& params) override {
    const double eta = sgd_schedule_rate(base_lr_, decay_, t_++);
    for (auto& [name, p] : params.trainable) {
      if (p.grad.empty()) continue;
      for (std::size_t i = 0; i < p.data.size(); ++i) p.data[i] -= eta * p.grad[i];
    }
  }
  double current_rate() const override { return sgd_schedule_rate(base_lr_, decay_, t_); }

 private:
  double base_lr_, decay_;
  std::uint64_t t_ = 0;
};

class Adam final : public Optimizer {
 public:
  explicit Adam(double lr) : lr_(lr) {}
  void apply(Params& params) override {
    if (m_.empty()) {
      m_.resize(params.trainable.size());
      v_.resize(params.trainable.size());
      for (std::size_t i = 0; i < params.trainable.size(); ++i) {
        m_[i].assign(params.trainable[i].second.size(), 0.0);
        v_[i].assign(params.trainable[i].second.size(), 0.0);
      }
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    for (std::size_t pi = 0; pi < params.trainable.size(); ++pi) {
      Tensor& p = params.trainable[pi].second;
      if (p.grad.empty()) continue;
      auto& m = m_[pi];
      auto& v = v_[pi];
      for (std::size_t i = 0; i < p.data.size(); ++i) {
        const double g = p.grad[i];
        m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g;
        v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g * g;
        p.data[i] -= lr_ * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + kEps);
      }
    }
  }
  double current_rate() const override { return lr_; }

 private:
  static constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  double lr_;
  std::uint64_t t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

}  // namespace

std::unique_ptr<Optimizer> Optimizer::create(const TrainConfig& cfg) {
  cfg.validate();
  if (cfg.optimizer == OptimizerKind::kAdamStyle) return std::make_unique<Adam>(cfg.base_lr);
  return std::make_unique<SgdSchedule>(cfg.base_lr, cfg.sgd_decay);
}

namespace {

NodeId loss_node(Graph& g, LossKind kind, NodeId pred, const std::vector<double>& ys) {
  Tensor t = Tensor::matrix(ys.size(), 1, std::vector<double>(ys));
  NodeId target = g.constant(std::move(t));
  NodeId diff = g.sub(pred, target);
  return g.mean(kind == LossKind::kL1 ? g.abs(diff) : g.square(diff));
}

std::vector<Permutation> draw_batch_perms(std::size_t batch, std::size_t n, Rng& rng) {
  std::vector<Permutation> perms;
  perms.reserve(batch);
  for (std::size_t b = 0; b < batch; ++b) perms.push_back(sample_permutation(n, rng));
  return perms;
}

void check_batch(const Batch& batch) {
  if (batch.xs.empty()) throw std::invalid_argument("training step: empty batch");
  if (batch.xs.size() != batch.ys.size())
    throw std::invalid_argument("training step: inputs and targets differ in length");
}

}  // namespace

double pi_sgd_step(const ModelSpec& spec, Params& params, const Batch& batch, LossKind loss,
                   double variance_reg_weight, Rng& perm_rng, Optimizer& opt, Graph& g) {
  check_batch(batch);
  g.clear();
  const std::size_t n = batch.xs[0].size();
  const auto perms = draw_batch_perms(batch.xs.size(), n, perm_rng);
  NodeId f_out = build_f_permuted(g, spec, params, batch.xs, perms);
  NodeId pred = apply_rho(g, spec, params, f_out);
  NodeId total = loss_node(g, loss, pred, batch.ys);

  if (variance_reg_weight > 0.0 && n > 1) {
    // second independent ordering per example; resample once on collision
    auto alt = draw_batch_perms(batch.xs.size(), n, perm_rng);
    for (std::size_t b = 0; b < alt.size(); ++b)
      if (alt[b].mapping == perms[b].mapping) alt[b] = sample_permutation(n, perm_rng);
    NodeId f_alt = build_f_permuted(g, spec, params, batch.xs, alt);
    NodeId gap = g.sum(g.square(g.sub(f_out, f_alt)));
    total = g.add(total, g.scale(gap, variance_reg_weight / static_cast<double>(batch.xs.size())));
  }

  const double value = g.scalar_value(total);
  g.backward(total);
  opt.apply(params);
  params.zero_grads();
  return value;
}

double exact_kary_step(const ModelSpec& spec, Params& params, const Batch& batch, LossKind loss,
                       Optimizer& opt, Graph& g) {
  check_batch(batch);
  g.clear();
  NodeId pred = build_pooled_predictions(g, spec, params, batch.xs);
  NodeId total = loss_node(g, loss, pred, batch.ys);
  const double value = g.scalar_value(total);
  g.backward(total);
  opt.apply(params);
  params.zero_grads();
  return value;
}

double canonical_step(const ModelSpec& spec, Params& params, const Batch& batch, LossKind loss,
                      CanonicalKey key, Optimizer& opt, Graph& g) {
  check_batch(batch);
  g.clear();
  NodeId pred = build_canonical_predictions(g, spec, params, batch.xs, key);
  NodeId total = loss_node(g, loss, pred, batch.ys);
  const double value = g.scalar_value(total);
  g.backward(total);
  opt.apply(params);
  params.zero_grads();
  return value;
}

double variance_regularizer(const SequenceFunction& f, const std::vector<Tensor>& h, Rng& rng) {
  if (h.size() <= 1) return 0.0;
  const Permutation s = sample_permutation(h.size(), rng);
  Permutation s2 = sample_permutation(h.size(), rng);
  if (s2.mapping == s.mapping) s2 = sample_permutation(h.size(), rng);
  const Tensor a = f(h.size(), apply_permutation(h, s));
  const Tensor b = f(h.size(), apply_permutation(h, s2));
  if (!same_shape(a, b)) throw std::invalid_argument("variance_regularizer: f shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    acc += d * d;
  }
  return acc;
}

// ---- prediction ----

namespace {

template <typename BuildFn>
std::vector<double> predict_batched(const std::vector<std::vector<int>>& xs, std::size_t max_batch,
                                    BuildFn&& build) {
  std::vector<double> out;
  out.reserve(xs.size());
  Graph g;
  for (std::size_t start = 0; start < xs.size(); start += max_batch) {
    const std::size_t stop = std::min(xs.size(), start + max_batch);
    std::vector<std::vector<int>> chunk(xs.begin() + start, xs.begin() + stop);
    g.clear();
    NodeId pred = build(g, chunk, start);
    const Tensor& t = g.value(pred);
    for (std::size_t i = 0; i < t.rows(); ++i) out.push_back(t.data[i]);
  }
  return out;
}

}  // namespace

std::vector<double> predict_pooled(const ModelSpec& spec, Params& params,
                                   const std::vector<std::vector<int>>& xs,
                                   std::size_t max_batch) {
  return predict_batched(xs, max_batch, [&](Graph& g, const auto& chunk, std::size_t) {
    return build_pooled_predictions(g, spec, params, chunk);
  });
}

std::vector<double> predict_canonical(const ModelSpec& spec, Params& params,
                                      const std::vector<std::vector<int>>& xs, CanonicalKey key,
                                      std::size_t max_batch) {
  return predict_batched(xs, max_batch, [&](Graph& g, const auto& chunk, std::size_t) {
    return build_canonical_predictions(g, spec, params, chunk, key);
  });
}

std::vector<double> predict_sampled(const ModelSpec& spec, Params& params,
                                    const std::vector<std::vector<int>>& xs, std::size_t m,
                                    Rng& rng, std::size_t max_batch) {
  if (m == 0) throw std::invalid_argument("predict_sampled: m must be >= 1");
  std::vector<double> acc(xs.size(), 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    auto one = predict_batched(xs, max_batch, [&](Graph& g, const auto& chunk, std::size_t) {
      const auto perms = draw_batch_perms(chunk.size(), chunk[0].size(), rng);
      return apply_rho(g, spec, params, build_f_permuted(g, spec, params, chunk, perms));
    });
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += one[i];
  }
  for (double& v : acc) v /= static_cast<double>(m);
  return acc;
}

std::vector<double> predict_exhaustive(const ModelSpec& spec, Params& params,
                                       const std::vector<std::vector<int>>& xs, std::size_t cap) {
  std::vector<double> out;
  out.reserve(xs.size());
  Graph g;
  for (const auto& x : xs) {
    const auto perms = enumerate_permutations(x.size(), cap);
    // all orderings of one example as a batch, then average the outputs
    std::vector<std::vector<int>> tiled(perms.size(), x);
    g.clear();
    NodeId pred = apply_rho(g, spec, params, build_f_permuted(g, spec, params, tiled, perms));
    const Tensor& t = g.value(pred);
    double acc = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) acc += t.data[i];
    out.push_back(acc / static_cast<double>(t.rows()));
  }
  return out;
}

double predict_averaged(const ModelSpec& spec, Params& params, const PoolingSpec& pooling,
                        const std::vector<int>& x, std::size_t m, Rng& rng) {
  return predict_dataset(spec, params, pooling, {x}, m, rng)[0];
}

std::vector<double> predict_dataset(const ModelSpec& spec, Params& params,
                                    const PoolingSpec& pooling,
                                    const std::vector<std::vector<int>>& xs, std::size_t m,
                                    Rng& rng) {
  switch (pooling.strategy) {
    case PoolingStrategy::kExact:
    case PoolingStrategy::kKary:
      return predict_pooled(spec, params, xs);
    case PoolingStrategy::kCanonical:
      return predict_canonical(spec, params, xs, pooling.canonical_key);
    case PoolingStrategy::kSampled:
      return predict_sampled(spec, params, xs, m, rng);
  }
  throw std::logic_error("predict_dataset: unreachable");
}

// ---- full training runs ----

namespace {

struct TargetScaler {
  double mu = 0.0;
  double sigma = 1.0;

  static TargetScaler fit(const std::vector<double>& ys, bool enabled) {
    TargetScaler s;
    if (!enabled || ys.empty()) return s;
    double acc = 0.0;
    for (double y : ys) acc += y;
    s.mu = acc / static_cast<double>(ys.size());
    double var = 0.0;
    for (double y : ys) var += (y - s.mu) * (y - s.mu);
    s.sigma = std::max(std::sqrt(var / static_cast<double>(ys.size())), 1e-12);
    return s;
  }
  double transform(double y) const { return (y - mu) / sigma; }
  double inverse(double y) const { return y * sigma + mu; }
  bool identity() const { return mu == 0.0 && sigma == 1.0; }

  // Rescale the final affine layer of rho so the model emits raw targets.
  void fold_into(const ModelSpec& spec, Params& params) const {
    if (identity()) return;
    Tensor& W = spec.rho_arch == RhoArch::kLinear ? params.find("rho.W") : params.find("rho.V");
    Tensor& b = spec.rho_arch == RhoArch::kLinear ? params.find("rho.b") : params.find("rho.d");
    for (double& v : W.data) v *= sigma;
    for (double& v : b.data) v = v * sigma + mu;
  }
};

}  // namespace

TrainOutcome train_model(const ModelSpec& mspec, const PoolingSpec& pooling,
                         const TrainConfig& cfg, const SplitDataset& data,
                         std::uint64_t dataset_seed, std::uint64_t init_seed,
                         std::uint64_t perm_seed) {
  mspec.validate();
  pooling.validate();
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();

  TrainOutcome out;
  out.params = init_params(mspec, init_seed);
  out.report.dataset_seed = dataset_seed;
  out.report.init_seed = init_seed;
  out.report.perm_seed = perm_seed;

  const TargetScaler scaler = TargetScaler::fit(data.train.targets, cfg.standardize_targets);
  auto opt = Optimizer::create(cfg);
  Rng perm_rng(derive_seed(perm_seed, seed_stream::kPermutations));
  Rng order_rng(derive_seed(perm_seed, seed_stream::kPermutations + 17));

  std::vector<std::size_t> order(data.train.inputs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  Graph scratch;
  Batch batch;
  const std::size_t B = cfg.batch_size;

  auto evaluate = [&](std::size_t epoch) {
    Rng eval_rng(derive_seed(perm_seed, seed_stream::kEval + epoch));
    auto preds = predict_dataset(mspec, out.params, pooling, data.test.inputs,
                                 pooling.infer_samples, eval_rng);
    for (double& p : preds) p = scaler.inverse(p);
    return compute_metrics(preds, data.test.targets);
  };

  double epoch_loss = 0.0;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    order_rng.shuffle(order);
    double loss_acc = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += B) {
      const std::size_t stop = std::min(order.size(), start + B);
      batch.xs.clear();
      batch.ys.clear();
      for (std::size_t i = start; i < stop; ++i) {
        batch.xs.push_back(data.train.inputs[order[i]]);
        batch.ys.push_back(scaler.transform(data.train.targets[order[i]]));
      }
      double value = 0.0;
      switch (pooling.strategy) {
        case PoolingStrategy::kExact:
        case PoolingStrategy::kKary:
          value = exact_kary_step(mspec, out.params, batch, cfg.loss, *opt, scratch);
          break;
        case PoolingStrategy::kSampled:
          value = pi_sgd_step(mspec, out.params, batch, cfg.loss, cfg.variance_reg_weight,
                              perm_rng, *opt, scratch);
          break;
        case PoolingStrategy::kCanonical:
          value = canonical_step(mspec, out.params, batch, cfg.loss, pooling.canonical_key, *opt,
                                 scratch);
          break;
      }
      loss_acc += value * static_cast<double>(stop - start);
      seen += stop - start;
    }
    epoch_loss = loss_acc / static_cast<double>(seen);

    if (epoch % cfg.eval_every == 0 || epoch == cfg.epochs) {
      EpochRow row;
      row.epoch = epoch;
      row.train_loss = epoch_loss;
      row.test = evaluate(epoch);
      row.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
      out.report.rows.push_back(row);
    }
  }

  scaler.fold_into(mspec, out.params);
  out.report.epochs_run = cfg.epochs;
  out.report.final_train_loss = epoch_loss;
  {
    Rng eval_rng(derive_seed(perm_seed, seed_stream::kEval));
    auto preds = predict_dataset(mspec, out.params, pooling, data.test.inputs,
                                 pooling.infer_samples, eval_rng);
    out.report.final_metrics = compute_metrics(preds, data.test.targets);
  }
  out.report.param_checksum = out.params.checksum();
  out.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return out;
}

}  // namespace janossy
