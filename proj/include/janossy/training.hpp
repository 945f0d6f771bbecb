#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "janossy/graph.hpp"
#include "janossy/nets.hpp"
#include "janossy/pooling.hpp"
#include "janossy/rng.hpp"
#include "janossy/tasks.hpp"

namespace janossy {

enum class OptimizerKind { kSgdSchedule, kAdamStyle };
enum class LossKind { kL1, kMse };

OptimizerKind optimizer_from(const std::string& s);
LossKind loss_from(const std::string& s);
std::string to_string(OptimizerKind k);
std::string to_string(LossKind k);

struct TrainConfig {
  OptimizerKind optimizer = OptimizerKind::kAdamStyle;
  double base_lr = 1e-3;
  std::vector<double> lr_grid = {0.01, 0.001, 0.0001, 0.00001};
  std::size_t batch_size = 128;
  std::size_t epochs = 300;
  LossKind loss = LossKind::kL1;
  double variance_reg_weight = 0.0;
  std::uint64_t seed = 0;
  // sgd_schedule: eta_t = base_lr / (1 + decay * t). Any decay > 0 gives
  // sum(eta) = inf and sum(eta^2) < inf; base_lr < 1 keeps eta in (0,1).
  double sgd_decay = 1e-3;
  std::size_t eval_every = 1;  // epochs between test-set evaluations
  // Fit an affine output calibration on the train targets and train against
  // standardized values; folded back into rho when training ends, so the
  // final model predicts in raw units.
  bool standardize_targets = true;

  void validate() const;
};

double loss_value(LossKind kind, double pred, double target);

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  // Applies accumulated gradients and advances the schedule; the caller
  // resets gradients afterwards.
  virtual void apply(Params& params) = 0;
  virtual double current_rate() const = 0;
  static std::unique_ptr<Optimizer> create(const TrainConfig& cfg);
};

double sgd_schedule_rate(double base_lr, double decay, std::uint64_t t);

struct Batch {
  std::vector<std::vector<int>> xs;
  std::vector<double> ys;  // targets on the training scale
};

// One Def-3 update: an independent uniform permutation per example, the
// loss of rho(f(h_s)) averaged over the batch, one optimizer step. Returns
// the batch loss (regularizer included).
double pi_sgd_step(const ModelSpec& spec, Params& params, const Batch& batch, LossKind loss,
                   double variance_reg_weight, Rng& perm_rng, Optimizer& opt, Graph& scratch);

// One exact update of the k-ary objective: the gradient flows through every
// pooling term, accumulating across shared f parameters. Returns batch loss.
double exact_kary_step(const ModelSpec& spec, Params& params, const Batch& batch, LossKind loss,
                       Optimizer& opt, Graph& scratch);

// One update of the canonical-ordering model (f over sorted input).
double canonical_step(const ModelSpec& spec, Params& params, const Batch& batch, LossKind loss,
                      CanonicalKey key, Optimizer& opt, Graph& scratch);

// Squared L2 distance between f outputs under two sampled permutations
// (s' resampled once on collision; 0 when |h| <= 1).
double variance_regularizer(const SequenceFunction& f, const std::vector<Tensor>& h, Rng& rng);

// ---- prediction ----

std::vector<double> predict_pooled(const ModelSpec& spec, Params& params,
                                   const std::vector<std::vector<int>>& xs,
                                   std::size_t max_batch = 512);
std::vector<double> predict_canonical(const ModelSpec& spec, Params& params,
                                      const std::vector<std::vector<int>>& xs, CanonicalKey key,
                                      std::size_t max_batch = 512);
// Mean over m sampled permutations of rho(f(h_s)) per example.
std::vector<double> predict_sampled(const ModelSpec& spec, Params& params,
                                    const std::vector<std::vector<int>>& xs, std::size_t m,
                                    Rng& rng, std::size_t max_batch = 512);
// Enumerates all |h|! orderings instead of sampling (small-n oracle).
std::vector<double> predict_exhaustive(const ModelSpec& spec, Params& params,
                                       const std::vector<std::vector<int>>& xs,
                                       std::size_t cap = kDefaultEnumerationCap);

// Remark-1 estimator for sampled models, deterministic pooled forward for
// the exact/kary/canonical strategies.
double predict_averaged(const ModelSpec& spec, Params& params, const PoolingSpec& pooling,
                        const std::vector<int>& x, std::size_t m, Rng& rng);

std::vector<double> predict_dataset(const ModelSpec& spec, Params& params,
                                    const PoolingSpec& pooling,
                                    const std::vector<std::vector<int>>& xs, std::size_t m,
                                    Rng& rng);

// ---- full training runs ----

struct EpochRow {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  Metrics test;
  double wall_seconds = 0.0;
};

struct TrainReport {
  std::size_t replicate = 0;
  std::uint64_t dataset_seed = 0;
  std::uint64_t init_seed = 0;
  std::uint64_t perm_seed = 0;
  std::size_t epochs_run = 0;
  std::vector<EpochRow> rows;
  double final_train_loss = 0.0;
  Metrics final_metrics;
  std::uint64_t param_checksum = 0;
  double wall_seconds = 0.0;
};

struct TrainOutcome {
  Params params;  // output calibration folded in; predicts raw units
  TrainReport report;
};

TrainOutcome train_model(const ModelSpec& mspec, const PoolingSpec& pooling,
                         const TrainConfig& cfg, const SplitDataset& data,
                         std::uint64_t dataset_seed, std::uint64_t init_seed,
                         std::uint64_t perm_seed);

}  // namespace janossy
