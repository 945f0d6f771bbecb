// Command-line front end: dataset generation, training runs, evaluation,
// the verification suite, and result tables.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "janossy/experiment.hpp"
#include "janossy/verify.hpp"

namespace fs = std::filesystem;
using janossy::ExperimentConfig;
using json = nlohmann::ordered_json;

namespace {

struct CliFlags {
  std::string config_path;
  std::string task = "sum";
  int k = 1;
  std::string f_arch = "mlp30";
  std::string rho_arch = "linear";
  std::string strategy = "kary";
  std::size_t train_samples = 1;
  std::size_t infer_samples = 1;
  std::string canonical_key = "ascending";
  bool no_sort_input = false;
  std::string optimizer = "adam_style";
  double lr = 1e-3;
  std::size_t batch_size = 128;
  std::size_t epochs = 300;
  std::string loss = "l1";
  double variance_reg = 0.0;
  std::size_t eval_every = 10;
  bool raw_targets = false;
  std::size_t n_train = 20000;
  std::size_t n_test = 2000;
  std::size_t replicates = 1;
  std::uint64_t seed = 0;
  std::size_t parallel = 0;
  std::string output_dir = "runs/experiment";
};

ExperimentConfig config_from_flags(const CliFlags& f) {
  ExperimentConfig c;
  c.task = janossy::TaskSpec::paper_preset(janossy::task_from(f.task), 0);
  c.task.n_train = f.n_train;
  c.task.n_test = f.n_test;
  c.model.vocab = c.task.vocab;
  c.model.k = f.k;
  c.model.f_arch = janossy::f_arch_from(f.f_arch);
  c.model.rho_arch = janossy::rho_arch_from(f.rho_arch);
  c.model.sort_input = !f.no_sort_input;
  c.pooling.strategy = janossy::pooling_strategy_from(f.strategy);
  if (c.pooling.strategy == janossy::PoolingStrategy::kKary) c.pooling.k = f.k;
  c.pooling.train_samples = f.train_samples;
  c.pooling.infer_samples = f.infer_samples;
  c.pooling.canonical_key = janossy::canonical_key_from(f.canonical_key);
  c.train.optimizer = janossy::optimizer_from(f.optimizer);
  c.train.base_lr = f.lr;
  c.train.batch_size = f.batch_size;
  c.train.epochs = f.epochs;
  c.train.loss = janossy::loss_from(f.loss);
  c.train.variance_reg_weight = f.variance_reg;
  c.train.eval_every = f.eval_every;
  c.train.standardize_targets = !f.raw_targets;
  c.replicates = f.replicates;
  c.master_seed = f.seed;
  c.parallel = f.parallel;
  c.output_dir = f.output_dir;
  return c;
}

void add_experiment_flags(CLI::App* cmd, CliFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file; overrides all flags");
  cmd->add_option("--task", f.task, "sum|range|unique_sum|unique_count|variance");
  cmd->add_option("--k", f.k, "arity (0 = full sequence)");
  cmd->add_option("--f-arch", f.f_arch, "mlp30|lstm50|gru80");
  cmd->add_option("--rho-arch", f.rho_arch, "linear|mlp100");
  cmd->add_option("--strategy", f.strategy, "exact|kary|sampled|canonical");
  cmd->add_option("--train-samples", f.train_samples, "permutations per example per step");
  cmd->add_option("--infer-samples", f.infer_samples, "permutations averaged at test time");
  cmd->add_option("--canonical-key", f.canonical_key, "ascending|descending");
  cmd->add_flag("--no-sort-input", f.no_sort_input, "disable digit sorting for k >= 2");
  cmd->add_option("--optimizer", f.optimizer, "adam_style|sgd_schedule");
  cmd->add_option("--lr", f.lr, "learning rate");
  cmd->add_option("--batch-size", f.batch_size);
  cmd->add_option("--epochs", f.epochs);
  cmd->add_option("--loss", f.loss, "l1|mse");
  cmd->add_option("--variance-reg", f.variance_reg, "output-variance penalty weight");
  cmd->add_option("--eval-every", f.eval_every, "epochs between test evaluations");
  cmd->add_flag("--raw-targets", f.raw_targets, "train on raw targets (no standardization)");
  cmd->add_option("--n-train", f.n_train);
  cmd->add_option("--n-test", f.n_test);
  cmd->add_option("--replicates", f.replicates);
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--parallel", f.parallel, "replicates in flight (0 = hardware)");
  cmd->add_option("--output-dir", f.output_dir);
}

int cmd_gen_data(const std::string& task, std::size_t n_train, std::size_t n_test,
                 std::uint64_t seed, const std::string& out_dir) {
  janossy::TaskSpec spec = janossy::TaskSpec::paper_preset(janossy::task_from(task), seed);
  spec.n_train = n_train;
  spec.n_test = n_test;
  const janossy::SplitDataset data = janossy::generate(spec);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  janossy::save_dataset_csv((dir / (task + "_train.csv")).string(), data.train);
  janossy::save_dataset_csv((dir / (task + "_test.csv")).string(), data.test);
  std::cout << "wrote " << data.train.inputs.size() << " train / " << data.test.inputs.size()
            << " test rows to " << out_dir << "\n";
  return 0;
}

int cmd_train(const CliFlags& flags) {
  ExperimentConfig config = flags.config_path.empty()
                                ? config_from_flags(flags)
                                : ExperimentConfig::load_file(flags.config_path);
  if (!flags.config_path.empty() && config.output_dir.empty())
    config.output_dir = flags.output_dir;
  config.validate();
  const janossy::RunResult result = janossy::run_experiment(config);
  std::printf("replicates: %zu\n", result.reports.size());
  std::printf("final accuracy %.4f (%.4f)  rmse %.4f (%.4f)  mae %.4f (%.4f)\n",
              result.summary.accuracy.mean, result.summary.accuracy.stddev,
              result.summary.rmse.mean, result.summary.rmse.stddev, result.summary.mae.mean,
              result.summary.mae.stddev);
  if (!config.output_dir.empty()) std::printf("outputs in %s\n", config.output_dir.c_str());
  return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& data_csv, const std::string& task,
             std::size_t infer_samples, std::uint64_t seed) {
  janossy::Checkpoint ck = janossy::load_checkpoint(checkpoint);
  janossy::TaskSpec spec = janossy::TaskSpec::paper_preset(janossy::task_from(task), 0);
  const janossy::TaskDataset ds = janossy::load_dataset_csv(data_csv, spec);

  janossy::PoolingSpec pooling;
  if (ck.spec.full_sequence()) {
    pooling.strategy = janossy::PoolingStrategy::kSampled;
  } else {
    pooling.strategy = janossy::PoolingStrategy::kKary;
    pooling.k = static_cast<std::size_t>(ck.spec.k);
  }
  pooling.infer_samples = infer_samples;
  janossy::Rng rng(janossy::derive_seed(seed, janossy::seed_stream::kEval));
  const auto preds =
      janossy::predict_dataset(ck.spec, ck.params, pooling, ds.inputs, infer_samples, rng);
  const janossy::Metrics m = janossy::compute_metrics(preds, ds.targets);
  std::printf("examples %zu  accuracy %.4f  rmse %.4f  mae %.4f  (%zu inference samples)\n",
              ds.inputs.size(), m.accuracy, m.rmse, m.mae, infer_samples);
  return 0;
}

int cmd_verify(const std::string& level) {
  if (level != "fast" && level != "full")
    throw janossy::ConfigError("verify: level must be 'fast' or 'full'");
  const auto results =
      janossy::run_verify(level == "full" ? janossy::VerifyLevel::kFull : janossy::VerifyLevel::kFast);
  bool ok = true;
  for (const auto& r : results) {
    std::printf("[%s] %-38s %6.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    ok = ok && r.pass;
  }
  std::printf("%zu checks, %s\n", results.size(), ok ? "all passed" : "FAILURES above");
  return ok ? 0 : 1;
}

int cmd_report(const std::string& pattern, const std::string& format, const std::string& out) {
  const auto paths = janossy::glob_paths(pattern);
  if (paths.empty()) throw janossy::ConfigError("report: no files match '" + pattern + "'");
  std::vector<json> reports;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("report: cannot open " + p);
    json j = json::parse(in);
    if (j.value("kind", "") == "train_report") reports.push_back(std::move(j));
  }
  if (reports.empty())
    throw janossy::ConfigError("report: no train reports among " + std::to_string(paths.size()) +
                               " matched files");
  const std::string table = format == "csv" ? janossy::report_table_csv(reports)
                                            : janossy::report_table_markdown(reports);
  if (out.empty()) {
    std::cout << table;
  } else {
    std::ofstream os(out);
    os << table;
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Janossy pooling: permutation-invariant models on integer sequences"};
  app.require_subcommand(1);

  // gen-data
  std::string gd_task = "sum", gd_out = "data";
  std::size_t gd_train = 100000, gd_test = 10000;
  std::uint64_t gd_seed = 0;
  CLI::App* gen = app.add_subcommand("gen-data", "generate a task dataset as CSV");
  gen->add_option("--task", gd_task, "sum|range|unique_sum|unique_count|variance")->required();
  gen->add_option("--n-train", gd_train);
  gen->add_option("--n-test", gd_test);
  gen->add_option("--seed", gd_seed);
  gen->add_option("--out-dir", gd_out);

  // train
  CliFlags flags;
  CLI::App* train = app.add_subcommand("train", "run a training experiment");
  add_experiment_flags(train, flags);

  // eval
  std::string ev_ck, ev_data, ev_task = "sum";
  std::size_t ev_samples = 1;
  std::uint64_t ev_seed = 0;
  CLI::App* ev = app.add_subcommand("eval", "evaluate a checkpoint on a dataset CSV");
  ev->add_option("--checkpoint", ev_ck)->required();
  ev->add_option("--data", ev_data)->required();
  ev->add_option("--task", ev_task)->required();
  ev->add_option("--infer-samples", ev_samples);
  ev->add_option("--seed", ev_seed);

  // verify
  std::string vf_level = "fast";
  CLI::App* vf = app.add_subcommand("verify", "run the numeric verification suite");
  vf->add_option("--level", vf_level, "fast|full");

  // report
  std::string rp_glob, rp_format = "md", rp_out;
  CLI::App* rp = app.add_subcommand("report", "tabulate training reports");
  rp->add_option("--glob", rp_glob, "e.g. 'runs/*/replicate_*.json'")->required();
  rp->add_option("--format", rp_format, "md|csv");
  rp->add_option("--out", rp_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_gen_data(gd_task, gd_train, gd_test, gd_seed, gd_out);
    if (train->parsed()) return cmd_train(flags);
    if (ev->parsed()) return cmd_eval(ev_ck, ev_data, ev_task, ev_samples, ev_seed);
    if (vf->parsed()) return cmd_verify(vf_level);
    if (rp->parsed()) return cmd_report(rp_glob, rp_format, rp_out);
  } catch (const janossy::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
