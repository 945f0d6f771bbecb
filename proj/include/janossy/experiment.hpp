#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "janossy/nets.hpp"
#include "janossy/pooling.hpp"
#include "janossy/tasks.hpp"
#include "janossy/training.hpp"

namespace janossy {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr int kConfigSchemaVersion = 1;

// One experiment cell: a task, a model, a tractability strategy, and a
// training recipe, run for `replicates` seeds derived from master_seed.
struct ExperimentConfig {
  TaskSpec task;
  ModelSpec model;
  PoolingSpec pooling;
  TrainConfig train;
  std::size_t replicates = 1;
  std::string output_dir;
  std::uint64_t master_seed = 0;
  std::size_t parallel = 0;  // max replicates in flight; 0 = hardware

  void validate() const;  // throws ConfigError naming the violated constraint

  nlohmann::ordered_json to_json() const;
  static ExperimentConfig from_json(const nlohmann::ordered_json& j);
  static ExperimentConfig load_file(const std::string& path);
};

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample std over replicates; 0 for a single run
};

struct ExperimentSummary {
  MetricSummary accuracy, rmse, mae, train_loss;
  double wall_seconds_total = 0.0;
};

struct RunResult {
  std::vector<TrainReport> reports;   // one per replicate, in order
  std::vector<Params> final_params;   // matching order
  ExperimentSummary summary;
};

// Runs every replicate (in parallel when allowed; results are identical to
// the sequential order) and, when write_outputs is set, writes config echo,
// per-replicate reports + metric CSVs + checkpoints, and a summary into
// config.output_dir.
RunResult run_experiment(const ExperimentConfig& config, bool write_outputs = true);

// Report serialization. Wall-clock fields are the one non-reproducible part
// of a report; deterministic=true omits them so reruns compare bit-equal.
nlohmann::ordered_json report_to_json(const TrainReport& report, const ExperimentConfig& config,
                                      bool deterministic = false);

ExperimentSummary summarize(const std::vector<TrainReport>& reports);

// Table assembly from report JSON files: rows keyed by
// (f, method, inference samples, k, rho), one column per task, mean(std)
// cells showing accuracy (RMSE for the variance task).
std::string report_table_markdown(const std::vector<nlohmann::ordered_json>& reports);
std::string report_table_csv(const std::vector<nlohmann::ordered_json>& reports);

std::vector<std::string> glob_paths(const std::string& pattern);

}  // namespace janossy
