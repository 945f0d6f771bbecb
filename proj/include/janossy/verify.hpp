#pragma once

#include <functional>
#include <string>
#include <vector>

#include "janossy/pooling.hpp"
#include "janossy/tensor.hpp"

namespace janossy {

enum class VerifyLevel { kFast, kFull };

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the library's invariant suite. kFast caps sequence lengths at 5 and
// skips the statistical tests; kFull runs everything.
std::vector<CheckResult> run_verify(VerifyLevel level);

bool all_passed(const std::vector<CheckResult>& results);

// The individual checks, parameterized so callers can run them at their own
// scale. Each returns pass/fail plus a human-readable measurement.
namespace checks {

CheckResult permutation_counts(std::size_t max_n);
CheckResult sampler_validity(std::size_t draws);
CheckResult projection_prefix_dependence();
CheckResult op_gradients(std::size_t trials, double step, double tol);
CheckResult unused_param_zero_grad();
CheckResult forward_determinism();
CheckResult pooling_invariance(std::size_t max_n, std::size_t param_draws, double tol);
CheckResult prop1_equivalence(std::size_t max_n, std::size_t param_draws, double tol);

// Same equivalence run against a caller-supplied k-ary pooling; lets tests
// prove the check trips when the prefactor (or anything else) is wrong.
using KaryPoolFn =
    std::function<Tensor(const SequenceFunction&, const std::vector<Tensor>&, std::size_t)>;
CheckResult prop1_equivalence_against(const KaryPoolFn& kary, std::size_t max_n,
                                      std::size_t param_draws, double tol);

CheckResult staircase_containment(std::size_t max_k, std::size_t max_n, std::size_t param_draws,
                                  double tol);
CheckResult deepsets_equivalence(std::size_t max_n, std::size_t param_draws);
CheckResult kary_zero_padding();
CheckResult parameter_count_table();
CheckResult model_gradient_checks(double step, double tol);
CheckResult rnn_order_sensitivity();
CheckResult frozen_embedding();
CheckResult pi_sgd_gradient_identity(double tol);
CheckResult jensen_upper_bound(std::size_t max_n);
CheckResult rho_composition();
CheckResult sgd_schedule_conditions();
CheckResult checkpoint_roundtrip();
CheckResult config_roundtrip();
CheckResult dataset_invariants();
CheckResult metric_spot_checks();
CheckResult variance_regularizer_properties();
CheckResult inference_averaging_equivalence(std::size_t max_n, double tol);
CheckResult training_determinism();
CheckResult sampler_chi_square(std::size_t n, std::size_t draws, double min_p);
CheckResult digit_uniformity(std::size_t min_draws, double min_p);
CheckResult sampled_unbiasedness(std::size_t pairs, std::size_t draws, double se_mult);
CheckResult inference_variance_monotone(std::size_t seeds);

}  // namespace checks

}  // namespace janossy
