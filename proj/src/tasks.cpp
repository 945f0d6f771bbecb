#include "janossy/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "janossy/rng.hpp"

namespace janossy {

TaskName task_from(const std::string& s) {
  if (s == "sum") return TaskName::kSum;
  if (s == "range") return TaskName::kRange;
  if (s == "unique_sum") return TaskName::kUniqueSum;
  if (s == "unique_count") return TaskName::kUniqueCount;
  if (s == "variance") return TaskName::kVariance;
  throw std::invalid_argument("unknown task '" + s + "'");
}

std::string to_string(TaskName t) {
  switch (t) {
    case TaskName::kSum: return "sum";
    case TaskName::kRange: return "range";
    case TaskName::kUniqueSum: return "unique_sum";
    case TaskName::kUniqueCount: return "unique_count";
    case TaskName::kVariance: return "variance";
  }
  return "?";
}

TaskSpec TaskSpec::paper_preset(TaskName name, std::uint64_t seed) {
  TaskSpec s;
  s.name = name;
  s.seed = seed;
  switch (name) {
    case TaskName::kSum:
    case TaskName::kRange:
      s.seq_len = 5;
      s.vocab = 100;
      break;
    case TaskName::kUniqueSum:
    case TaskName::kUniqueCount:
      s.seq_len = 10;
      s.vocab = 10;
      break;
    case TaskName::kVariance:
      s.seq_len = 10;
      s.vocab = 100;
      break;
  }
  s.n_train = 100000;
  s.n_test = 10000;
  return s;
}

void TaskSpec::validate() const {
  if (seq_len == 0) throw std::invalid_argument("TaskSpec: seq_len must be >= 1");
  if (vocab < 1) throw std::invalid_argument("TaskSpec: vocab must be >= 1");
  if (n_train == 0) throw std::invalid_argument("TaskSpec: n_train must be >= 1");
}

double target_fn(TaskName name, const std::vector<int>& x) {
  if (x.empty()) throw std::invalid_argument("target_fn: empty sequence");
  switch (name) {
    case TaskName::kSum: {
      long long s = 0;
      for (int v : x) s += v;
      return static_cast<double>(s);
    }
    case TaskName::kRange: {
      auto [lo, hi] = std::minmax_element(x.begin(), x.end());
      return static_cast<double>(*hi - *lo);
    }
    case TaskName::kUniqueSum: {
      std::set<int> uniq(x.begin(), x.end());
      long long s = 0;
      for (int v : uniq) s += v;
      return static_cast<double>(s);
    }
    case TaskName::kUniqueCount: {
      std::set<int> uniq(x.begin(), x.end());
      return static_cast<double>(uniq.size());
    }
    case TaskName::kVariance: {
      // population variance (1/n) sum (x_i - mean)^2, evaluated from exact
      // integer sums so the result is bit-identical under reordering
      long long s = 0, sq = 0;
      for (int v : x) {
        s += v;
        sq += static_cast<long long>(v) * v;
      }
      const double n = static_cast<double>(x.size());
      return (n * static_cast<double>(sq) - static_cast<double>(s) * static_cast<double>(s)) /
             (n * n);
    }
  }
  throw std::logic_error("target_fn: unreachable");
}

SplitDataset generate(const TaskSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  auto draw = [&](std::size_t count) {
    TaskDataset ds;
    ds.spec = spec;
    ds.inputs.reserve(count);
    ds.targets.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<int> x(spec.seq_len);
      for (auto& v : x) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.vocab)));
      ds.targets.push_back(target_fn(spec.name, x));
      ds.inputs.push_back(std::move(x));
    }
    return ds;
  };
  SplitDataset split;
  split.train = draw(spec.n_train);
  split.test = draw(spec.n_test);
  return split;
}

Metrics compute_metrics(const std::vector<double>& predictions,
                        const std::vector<double>& targets) {
  if (predictions.size() != targets.size())
    throw std::invalid_argument("compute_metrics: " + std::to_string(predictions.size()) +
                                " predictions vs " + std::to_string(targets.size()) + " targets");
  if (predictions.empty()) throw std::invalid_argument("compute_metrics: empty inputs");
  Metrics m;
  double sq = 0.0, ab = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double err = predictions[i] - targets[i];
    sq += err * err;
    ab += std::fabs(err);
    if (std::round(predictions[i]) == targets[i]) ++hits;  // round half away from zero
  }
  const double n = static_cast<double>(predictions.size());
  m.accuracy = static_cast<double>(hits) / n;
  m.rmse = std::sqrt(sq / n);
  m.mae = ab / n;
  return m;
}

void save_dataset_csv(const std::string& path, const TaskDataset& ds) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_dataset_csv: cannot open " + path);
  char buf[64];
  for (std::size_t i = 0; i < ds.inputs.size(); ++i) {
    for (std::size_t j = 0; j < ds.inputs[i].size(); ++j) {
      if (j) out << ' ';
      out << ds.inputs[i][j];
    }
    std::snprintf(buf, sizeof(buf), "%.17g", ds.targets[i]);
    out << ',' << buf << '\n';
  }
}

TaskDataset load_dataset_csv(const std::string& path, const TaskSpec& spec) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_dataset_csv: cannot open " + path);
  TaskDataset ds;
  ds.spec = spec;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find_last_of(',');
    if (comma == std::string::npos)
      throw std::runtime_error("load_dataset_csv: malformed row '" + line + "'");
    std::istringstream digits(line.substr(0, comma));
    std::vector<int> x;
    int d;
    while (digits >> d) x.push_back(d);
    if (x.empty()) throw std::runtime_error("load_dataset_csv: row without digits");
    ds.targets.push_back(std::stod(line.substr(comma + 1)));
    ds.inputs.push_back(std::move(x));
  }
  return ds;
}

}  // namespace janossy
