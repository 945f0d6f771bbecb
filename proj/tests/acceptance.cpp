// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code 0 only if all pass.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "janossy/experiment.hpp"
#include "janossy/verify.hpp"

using namespace janossy;

namespace {

struct Criterion {
  std::string label;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<Criterion> g_results;

void record(const std::string& label, bool pass, const std::string& detail, double seconds) {
  g_results.push_back({label, pass, detail, seconds});
  std::printf("[%s] %-12s %7.1fs  %s\n", pass ? "PASS" : "FAIL", label.c_str(), seconds,
              detail.c_str());
  std::fflush(stdout);
}

template <typename Fn>
void timed(const std::string& label, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    auto [p, d] = fn();
    pass = p;
    detail = d;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  record(label, pass, detail, secs);
}

std::pair<bool, std::string> from_check(const CheckResult& r) { return {r.pass, r.detail}; }

std::pair<bool, std::string> with_runtime_cap(CheckResult r, double start_elapsed, double cap) {
  if (start_elapsed > cap) {
    r.pass = false;
    r.detail += " [exceeded " + std::to_string(cap) + "s runtime cap]";
  }
  return {r.pass, r.detail};
}

// ---- criterion 8: desk-scale trend cells -------------------------------
//
// The cells reuse the published architectures at reduced dataset / epoch
// budgets so each one fits a single core in well under ten minutes. The
// learning rates come from the standard four-point grid, chosen once on a
// held-out split and pinned here.

struct CellSpec {
  const char* tag;
  TaskName task;
  int k;  // 0 = full sequence
  FArch f_arch;
  RhoArch rho;
  PoolingStrategy strategy;
  std::size_t infer_samples;
  double lr;
  std::size_t epochs;
  std::size_t n_train;
  std::size_t n_test;
  std::size_t batch;
  std::size_t eval_every;
};

ExperimentConfig cell_config(const CellSpec& cell) {
  ExperimentConfig c;
  c.task = TaskSpec::paper_preset(cell.task, 0);
  c.task.n_train = cell.n_train;
  c.task.n_test = cell.n_test;
  c.model.vocab = c.task.vocab;
  c.model.k = cell.k;
  c.model.f_arch = cell.f_arch;
  c.model.rho_arch = cell.rho;
  c.pooling.strategy = cell.strategy;
  if (cell.strategy == PoolingStrategy::kKary) c.pooling.k = static_cast<std::size_t>(cell.k);
  c.pooling.infer_samples = cell.infer_samples;
  c.train.base_lr = cell.lr;
  c.train.epochs = cell.epochs;
  c.train.batch_size = cell.batch;
  c.train.eval_every = cell.eval_every;
  c.replicates = 3;
  c.master_seed = 20260809;
  c.parallel = 0;  // replicates map onto available cores; each run stays single-threaded
  c.output_dir = "acceptance_out/" + std::string(cell.tag);
  return c;
}

struct CellOutcome {
  RunResult result;
  double cpu_seconds = 0.0;  // summed single-threaded replicate time
};

CellOutcome run_cell(const CellSpec& cell) {
  CellOutcome out;
  out.result = run_experiment(cell_config(cell));
  for (const auto& r : out.result.reports) out.cpu_seconds += r.wall_seconds;
  std::printf("    cell %-18s acc %.3f(%.3f)  rmse %.3f(%.3f)  mae %.3f(%.3f)  cpu %.0fs\n",
              cell.tag, out.result.summary.accuracy.mean, out.result.summary.accuracy.stddev,
              out.result.summary.rmse.mean, out.result.summary.rmse.stddev,
              out.result.summary.mae.mean, out.result.summary.mae.stddev, out.cpu_seconds);
  std::fflush(stdout);
  return out;
}

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

int main() {
  std::printf("acceptance suite (one line per criterion)\n");

  timed("criterion 1", [] {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r = checks::prop1_equivalence(6, 50, 1e-10);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return with_runtime_cap(std::move(r), secs, 30.0);
  });

  timed("criterion 2", [] { return from_check(checks::parameter_count_table()); });

  timed("criterion 3", [] {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r = checks::model_gradient_checks(1e-6, 1e-5);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return with_runtime_cap(std::move(r), secs, 60.0);
  });

  timed("criterion 4", [] { return from_check(checks::pi_sgd_gradient_identity(1e-10)); });

  timed("criterion 5", [] { return from_check(checks::sampled_unbiasedness(10, 100000, 4.0)); });

  timed("criterion 6", [] { return from_check(checks::inference_averaging_equivalence(5, 1e-9)); });

  timed("criterion 7", [] { return from_check(checks::staircase_containment(4, 6, 10, 1e-10)); });

  // criterion 8: Table-1 qualitative trends at desk scale
  {
    const CellSpec sum_k1_lin = {"sum_k1_linear", TaskName::kSum, 1, FArch::kMlp30,
                                 RhoArch::kLinear, PoolingStrategy::kKary, 1,
                                 1e-3, 150, 20000, 2000, 128, 25};
    const CellSpec range_k1_lin = {"range_k1_linear", TaskName::kRange, 1, FArch::kMlp30,
                                   RhoArch::kLinear, PoolingStrategy::kKary, 1,
                                   1e-3, 150, 20000, 2000, 128, 25};
    const CellSpec range_k1_mlp = {"range_k1_mlp100", TaskName::kRange, 1, FArch::kMlp30,
                                   RhoArch::kMlp100, PoolingStrategy::kKary, 1,
                                   1e-3, 300, 20000, 2000, 128, 50};
    const CellSpec var_k1_lin = {"variance_k1_linear", TaskName::kVariance, 1, FArch::kMlp30,
                                 RhoArch::kLinear, PoolingStrategy::kKary, 1,
                                 1e-3, 120, 10000, 2000, 128, 20};
    const CellSpec var_k2_lin = {"variance_k2_linear", TaskName::kVariance, 2, FArch::kMlp30,
                                 RhoArch::kLinear, PoolingStrategy::kKary, 1,
                                 1e-3, 100, 10000, 2000, 128, 20};
    const CellSpec var_gru_mlp = {"variance_gru_mlp100", TaskName::kVariance, 0, FArch::kGru80,
                                  RhoArch::kMlp100, PoolingStrategy::kSampled, 20,
                                  1e-3, 80, 10000, 2000, 128, 20};
    const CellSpec range_gru_lin = {"range_gru_linear", TaskName::kRange, 0, FArch::kGru80,
                                    RhoArch::kLinear, PoolingStrategy::kSampled, 20,
                                    1e-3, 80, 10000, 2000, 128, 20};

    double worst_cell_cpu = 0.0;
    auto run_and_track = [&worst_cell_cpu](const CellSpec& cell) {
      CellOutcome out = run_cell(cell);
      worst_cell_cpu = std::max(worst_cell_cpu, out.cpu_seconds);
      return out;
    };

    timed("criterion 8a", [&] {
      const CellOutcome sum = run_and_track(sum_k1_lin);
      const double acc = sum.result.summary.accuracy.mean;
      return std::pair<bool, std::string>{
          acc >= 0.95, "sum k=1 linear accuracy " + fmt2(acc) + " (need >= 0.95)"};
    });

    CellOutcome range_lin, range_mlp;
    timed("criterion 8b", [&] {
      range_lin = run_and_track(range_k1_lin);
      range_mlp = run_and_track(range_k1_mlp);
      const double lin_acc = range_lin.result.summary.accuracy.mean;
      const double mlp_acc = range_mlp.result.summary.accuracy.mean;
      const bool pass = lin_acc <= 0.15 && mlp_acc >= 0.85;
      return std::pair<bool, std::string>{
          pass, "range k=1: linear acc " + fmt2(lin_acc) + " (need <= 0.15), mlp acc " +
                    fmt2(mlp_acc) + " (need >= 0.85)"};
    });

    CellOutcome var_k1, var_k2;
    timed("criterion 8c", [&] {
      var_k1 = run_and_track(var_k1_lin);
      var_k2 = run_and_track(var_k2_lin);
      const double r1 = var_k1.result.summary.rmse.mean;
      const double r2 = var_k2.result.summary.rmse.mean;
      return std::pair<bool, std::string>{
          r1 > 10.0 * r2,
          "variance rmse: k=1 linear " + fmt2(r1) + " vs k=2 linear " + fmt2(r2) +
              " (need k1 > 10x k2)"};
    });

    CellOutcome var_gru;
    timed("criterion 8d", [&] {
      var_gru = run_and_track(var_gru_mlp);
      const double gru = var_gru.result.summary.rmse.mean;
      const double k1 = var_k1.result.summary.rmse.mean;
      return std::pair<bool, std::string>{
          gru < k1 / 10.0, "variance rmse: gru pi-sgd (20 samples) " + fmt2(gru) +
                               " vs k=1 linear " + fmt2(k1) + " / 10 (need <)"};
    });

    timed("criterion 8e", [&] {
      const CellOutcome cell = run_and_track(range_gru_lin);
      // evaluate the trained replicates at 1 and at 20 inference samples
      const ExperimentConfig cfg = cell_config(range_gru_lin);
      TaskSpec task = cfg.task;
      task.seed = derive_seed(cfg.master_seed, seed_stream::kDataset);
      const SplitDataset data = generate(task);
      double acc1 = 0.0, acc20 = 0.0;
      for (std::size_t rep = 0; rep < cell.result.reports.size(); ++rep) {
        Params params = cell.result.final_params[rep];
        for (std::size_t m : {std::size_t{1}, std::size_t{20}}) {
          Rng rng(derive_seed(cell.result.reports[rep].perm_seed, seed_stream::kEval));
          const auto preds =
              predict_sampled(cfg.model, params, data.test.inputs, m, rng);
          const double acc = compute_metrics(preds, data.test.targets).accuracy;
          (m == 1 ? acc1 : acc20) += acc / static_cast<double>(cell.result.reports.size());
        }
      }
      return std::pair<bool, std::string>{
          acc20 >= acc1, "range gru accuracy: 20-sample " + fmt2(acc20) + " vs 1-sample " +
                             fmt2(acc1) + " (need 20-sample >= 1-sample)"};
    });

    record("criterion 8*", worst_cell_cpu < 600.0,
           "largest cell single-core budget " + fmt2(worst_cell_cpu) + "s (cap 600s)", 0.0);
  }

  timed("criterion 9", [] { return from_check(checks::training_determinism()); });

  timed("criterion 10", [] { return from_check(checks::sampler_chi_square(4, 120000, 0.001)); });

  std::size_t failed = 0;
  for (const auto& c : g_results)
    if (!c.pass) ++failed;
  std::printf("%zu/%zu criteria passed\n", g_results.size() - failed, g_results.size());
  return failed == 0 ? 0 : 1;
}
