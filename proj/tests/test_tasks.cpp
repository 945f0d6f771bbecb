#include "doctest.h"

#include <filesystem>

#include "janossy/tasks.hpp"
#include "janossy/verify.hpp"

using namespace janossy;

TEST_SUITE_BEGIN("tasks");

TEST_CASE("paper presets pin sequence length and vocabulary") {
  CHECK(TaskSpec::paper_preset(TaskName::kSum, 0).seq_len == 5);
  CHECK(TaskSpec::paper_preset(TaskName::kSum, 0).vocab == 100);
  CHECK(TaskSpec::paper_preset(TaskName::kRange, 0).seq_len == 5);
  CHECK(TaskSpec::paper_preset(TaskName::kUniqueSum, 0).vocab == 10);
  CHECK(TaskSpec::paper_preset(TaskName::kUniqueCount, 0).seq_len == 10);
  CHECK(TaskSpec::paper_preset(TaskName::kVariance, 0).vocab == 100);
  CHECK(TaskSpec::paper_preset(TaskName::kVariance, 0).seq_len == 10);
  CHECK(TaskSpec::paper_preset(TaskName::kSum, 0).n_train == 100000);
  CHECK(TaskSpec::paper_preset(TaskName::kSum, 0).n_test == 10000);
}

TEST_CASE("target functions") {
  CHECK(target_fn(TaskName::kSum, {1, 2, 3, 4, 5}) == 15.0);
  CHECK(target_fn(TaskName::kRange, {10, 3, 7, 3, 9}) == 7.0);
  CHECK(target_fn(TaskName::kUniqueSum, {2, 2, 5, 7}) == 14.0);
  CHECK(target_fn(TaskName::kUniqueCount, {2, 2, 5, 7}) == 3.0);
  CHECK(target_fn(TaskName::kVariance, {1, 3}) == 1.0);
  CHECK_THROWS_AS(target_fn(TaskName::kSum, {}), std::invalid_argument);
}

TEST_CASE("generation is seeded and self-consistent") {
  TaskSpec spec = TaskSpec::paper_preset(TaskName::kRange, 99);
  spec.n_train = 200;
  spec.n_test = 50;
  const SplitDataset a = generate(spec);
  const SplitDataset b = generate(spec);
  CHECK(a.train.inputs == b.train.inputs);
  CHECK(a.test.targets == b.test.targets);
  for (std::size_t i = 0; i < a.train.inputs.size(); ++i) {
    CHECK(a.train.inputs[i].size() == 5);
    for (int d : a.train.inputs[i]) {
      CHECK(d >= 0);
      CHECK(d < 100);
    }
    CHECK(a.train.targets[i] == target_fn(TaskName::kRange, a.train.inputs[i]));
  }
}

TEST_CASE("metrics: spot values and the rounding rule") {
  const CheckResult r = checks::metric_spot_checks();
  INFO(r.detail);
  CHECK(r.pass);
  CHECK_THROWS_AS(compute_metrics({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("dataset invariants (determinism, target invariance)") {
  const CheckResult r = checks::dataset_invariants();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("csv round trip preserves digits and targets exactly") {
  TaskSpec spec = TaskSpec::paper_preset(TaskName::kVariance, 5);
  spec.n_train = 64;
  spec.n_test = 8;
  const SplitDataset data = generate(spec);
  const auto path = std::filesystem::temp_directory_path() / "janossy_tasks_roundtrip.csv";
  save_dataset_csv(path.string(), data.train);
  const TaskDataset back = load_dataset_csv(path.string(), spec);
  std::filesystem::remove(path);
  CHECK(back.inputs == data.train.inputs);
  CHECK(back.targets == data.train.targets);
}

TEST_SUITE_END();
