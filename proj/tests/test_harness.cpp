#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "janossy/experiment.hpp"
#include "janossy/verify.hpp"

using namespace janossy;
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

ExperimentConfig tiny_config(fs::path dir) {
  ExperimentConfig c;
  c.task = TaskSpec::paper_preset(TaskName::kSum, 0);
  c.task.n_train = 256;
  c.task.n_test = 64;
  c.model.k = 1;
  c.pooling.strategy = PoolingStrategy::kKary;
  c.pooling.k = 1;
  c.train.epochs = 2;
  c.train.eval_every = 1;
  c.train.batch_size = 64;
  c.replicates = 2;
  c.master_seed = 4096;
  c.parallel = 2;
  c.output_dir = dir.string();
  return c;
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("config json round trip and validation") {
  const CheckResult r = checks::config_roundtrip();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("invalid combinations are rejected with the constraint named") {
  ExperimentConfig c = tiny_config("unused");
  c.model.vocab = 10;  // disagrees with the sum task's 100
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("vocab") != std::string::npos);
  }
}

TEST_CASE("run produces one report per replicate plus a summary") {
  const fs::path dir = fs::temp_directory_path() / "janossy_harness_run";
  fs::remove_all(dir);
  ExperimentConfig c = tiny_config(dir);
  const RunResult result = run_experiment(c);

  REQUIRE(result.reports.size() == 2);
  CHECK(result.reports[0].replicate == 0);
  CHECK(result.reports[1].replicate == 1);
  CHECK(result.reports[0].init_seed != result.reports[1].init_seed);
  CHECK(result.reports[0].dataset_seed == result.reports[1].dataset_seed);
  CHECK(result.summary.accuracy.stddev >= 0.0);

  for (const char* name : {"config.json", "replicate_0.json", "replicate_1.json", "metrics_0.csv",
                           "checkpoint_0.json", "summary.json"})
    CHECK(fs::exists(dir / name));

  // metrics CSV column contract
  std::ifstream csv(dir / "metrics_0.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "epoch,train_loss,test_accuracy,test_rmse,test_mae,wall_seconds");

  // the emitted report re-validates against its own config echo, which
  // records the dataset seed actually derived from the master seed
  std::ifstream in(dir / "replicate_0.json");
  json echo = json::parse(in);
  const ExperimentConfig back = ExperimentConfig::from_json(echo.at("config"));
  ExperimentConfig effective = c;
  effective.task.seed = derive_seed(c.master_seed, seed_stream::kDataset);
  CHECK(back.to_json().dump() == effective.to_json().dump());
  CHECK(back.task.seed == result.reports[0].dataset_seed);

  fs::remove_all(dir);
}

TEST_CASE("a single replicate reports zero spread") {
  ExperimentConfig c = tiny_config("");
  c.output_dir.clear();
  c.replicates = 1;
  const RunResult result = run_experiment(c, /*write_outputs=*/false);
  CHECK(result.summary.accuracy.stddev == 0.0);
  CHECK(result.summary.rmse.stddev == 0.0);
}

TEST_CASE("identical config reruns bit-identically (wall time aside)") {
  const CheckResult r = checks::training_determinism();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("report tables group replicates into one row per configuration") {
  ExperimentConfig c = tiny_config("");
  c.output_dir.clear();
  const RunResult result = run_experiment(c, /*write_outputs=*/false);
  std::vector<json> reports;
  for (const auto& r : result.reports) reports.push_back(report_to_json(r, c));

  const std::string md = report_table_markdown(reports);
  CHECK(md.find("| mlp30 | kary | -- | 1 | linear |") != std::string::npos);
  CHECK(std::count(md.begin(), md.end(), '\n') == 3);  // header, separator, one row

  const std::string csv = report_table_csv(reports);
  CHECK(csv.find("sum_mean") != std::string::npos);

  CHECK_THROWS_AS(report_table_markdown({}), std::invalid_argument);
}

TEST_CASE("glob finds emitted reports") {
  const fs::path dir = fs::temp_directory_path() / "janossy_glob_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const char* name : {"replicate_0.json", "replicate_1.json", "other.txt"})
    std::ofstream(dir / name) << "{}";
  const auto hits = glob_paths((dir / "replicate_*.json").string());
  CHECK(hits.size() == 2);
  fs::remove_all(dir);
}

TEST_SUITE_END();
