#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace janossy {

enum class TaskName { kSum, kRange, kUniqueSum, kUniqueCount, kVariance };

TaskName task_from(const std::string& s);
std::string to_string(TaskName t);

// Sequence shape of each task: sum/range read 5 digits from {0..99},
// unique_sum/unique_count read 10 digits from {0..9}, variance reads 10
// digits from {0..99}.
struct TaskSpec {
  TaskName name = TaskName::kSum;
  std::size_t seq_len = 5;
  int vocab = 100;
  std::size_t n_train = 100000;
  std::size_t n_test = 10000;
  std::uint64_t seed = 0;

  // The canonical (seq_len, vocab) for a task, with full-size train/test.
  static TaskSpec paper_preset(TaskName name, std::uint64_t seed);
  void validate() const;
};

struct TaskDataset {
  std::vector<std::vector<int>> inputs;
  std::vector<double> targets;
  TaskSpec spec;
};

struct SplitDataset {
  TaskDataset train;
  TaskDataset test;
};

double target_fn(TaskName name, const std::vector<int>& x);

// Digits i.i.d. uniform over [0, vocab) with replacement; train then test
// from one seeded stream.
SplitDataset generate(const TaskSpec& spec);

struct Metrics {
  double accuracy = 0.0;  // round-half-away-from-zero(pred) == target
  double rmse = 0.0;
  double mae = 0.0;
};

Metrics compute_metrics(const std::vector<double>& predictions,
                        const std::vector<double>& targets);

// One row per example: digits space-separated, target as the last column.
void save_dataset_csv(const std::string& path, const TaskDataset& ds);
TaskDataset load_dataset_csv(const std::string& path, const TaskSpec& spec);

}  // namespace janossy
