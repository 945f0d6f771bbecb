#include "janossy/experiment.hpp"

#include <glob.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "janossy/stats.hpp"

namespace janossy {

using json = nlohmann::ordered_json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

json task_to_json(const TaskSpec& t) {
  json j;
  j["name"] = to_string(t.name);
  j["seq_len"] = t.seq_len;
  j["vocab"] = t.vocab;
  j["n_train"] = t.n_train;
  j["n_test"] = t.n_test;
  j["seed"] = t.seed;
  return j;
}

TaskSpec task_from_json(const json& j) {
  TaskSpec preset = TaskSpec::paper_preset(task_from(j.at("name").get<std::string>()), 0);
  preset.seq_len = get_or<std::size_t>(j, "seq_len", preset.seq_len);
  preset.vocab = get_or<int>(j, "vocab", preset.vocab);
  preset.n_train = get_or<std::size_t>(j, "n_train", preset.n_train);
  preset.n_test = get_or<std::size_t>(j, "n_test", preset.n_test);
  preset.seed = get_or<std::uint64_t>(j, "seed", 0);
  return preset;
}

json model_to_json(const ModelSpec& m) {
  json j;
  j["vocab"] = m.vocab;
  j["k"] = m.k;
  j["f_arch"] = to_string(m.f_arch);
  j["rho_arch"] = to_string(m.rho_arch);
  j["output_dim"] = m.output_dim;
  j["sort_input"] = m.sort_input;
  return j;
}

ModelSpec model_from_json(const json& j) {
  ModelSpec m;
  m.vocab = get_or<int>(j, "vocab", m.vocab);
  m.k = get_or<int>(j, "k", m.k);
  if (j.contains("f_arch")) m.f_arch = f_arch_from(j.at("f_arch").get<std::string>());
  if (j.contains("rho_arch")) m.rho_arch = rho_arch_from(j.at("rho_arch").get<std::string>());
  m.output_dim = get_or<int>(j, "output_dim", m.output_dim);
  m.sort_input = get_or<bool>(j, "sort_input", m.sort_input);
  return m;
}

json pooling_to_json(const PoolingSpec& p) {
  json j;
  j["strategy"] = to_string(p.strategy);
  if (p.k.has_value()) j["k"] = *p.k;
  j["train_samples"] = p.train_samples;
  j["infer_samples"] = p.infer_samples;
  j["canonical_key"] = to_string(p.canonical_key);
  j["seed"] = p.seed;
  return j;
}

PoolingSpec pooling_from_json(const json& j) {
  PoolingSpec p;
  if (j.contains("strategy")) p.strategy = pooling_strategy_from(j.at("strategy").get<std::string>());
  if (j.contains("k") && !j.at("k").is_null()) p.k = j.at("k").get<std::size_t>();
  p.train_samples = get_or<std::size_t>(j, "train_samples", 1);
  p.infer_samples = get_or<std::size_t>(j, "infer_samples", 1);
  if (j.contains("canonical_key"))
    p.canonical_key = canonical_key_from(j.at("canonical_key").get<std::string>());
  p.seed = get_or<std::uint64_t>(j, "seed", 0);
  return p;
}

json train_to_json(const TrainConfig& t) {
  json j;
  j["optimizer"] = to_string(t.optimizer);
  j["base_lr"] = t.base_lr;
  j["lr_grid"] = t.lr_grid;
  j["batch_size"] = t.batch_size;
  j["epochs"] = t.epochs;
  j["loss"] = to_string(t.loss);
  j["variance_reg_weight"] = t.variance_reg_weight;
  j["seed"] = t.seed;
  j["sgd_decay"] = t.sgd_decay;
  j["eval_every"] = t.eval_every;
  j["standardize_targets"] = t.standardize_targets;
  return j;
}

TrainConfig train_from_json(const json& j) {
  TrainConfig t;
  if (j.contains("optimizer")) t.optimizer = optimizer_from(j.at("optimizer").get<std::string>());
  t.base_lr = get_or<double>(j, "base_lr", t.base_lr);
  t.lr_grid = get_or<std::vector<double>>(j, "lr_grid", t.lr_grid);
  t.batch_size = get_or<std::size_t>(j, "batch_size", t.batch_size);
  t.epochs = get_or<std::size_t>(j, "epochs", t.epochs);
  if (j.contains("loss")) t.loss = loss_from(j.at("loss").get<std::string>());
  t.variance_reg_weight = get_or<double>(j, "variance_reg_weight", 0.0);
  t.seed = get_or<std::uint64_t>(j, "seed", 0);
  t.sgd_decay = get_or<double>(j, "sgd_decay", t.sgd_decay);
  t.eval_every = get_or<std::size_t>(j, "eval_every", t.eval_every);
  t.standardize_targets = get_or<bool>(j, "standardize_targets", t.standardize_targets);
  return t;
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    task.validate();
    model.validate();
    pooling.validate();
    train.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (replicates == 0) throw ConfigError("config: replicates must be >= 1");
  if (model.vocab != task.vocab)
    throw ConfigError("config: model.vocab (" + std::to_string(model.vocab) +
                      ") must equal task.vocab (" + std::to_string(task.vocab) + ")");
  switch (pooling.strategy) {
    case PoolingStrategy::kExact:
    case PoolingStrategy::kKary:
      if (model.full_sequence())
        throw ConfigError("config: exact/kary pooling requires the k-ary feedforward f "
                          "(full-sequence models train with the sampled strategy)");
      if (pooling.k.has_value() && static_cast<int>(*pooling.k) != model.k)
        throw ConfigError("config: pooling.k must match model.k");
      if (task.seq_len < static_cast<std::size_t>(model.k))
        throw ConfigError("config: task.seq_len below model arity k");
      break;
    case PoolingStrategy::kSampled:
      if (!model.full_sequence() && task.seq_len < static_cast<std::size_t>(model.k))
        throw ConfigError("config: task.seq_len below model arity k");
      break;
    case PoolingStrategy::kCanonical:
      break;
  }
}

json ExperimentConfig::to_json() const {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["master_seed"] = master_seed;
  j["replicates"] = replicates;
  j["output_dir"] = output_dir;
  j["parallel"] = parallel;
  j["task"] = task_to_json(task);
  j["model"] = model_to_json(model);
  j["pooling"] = pooling_to_json(pooling);
  j["train"] = train_to_json(train);
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  const int version = get_or<int>(j, "schema_version", kConfigSchemaVersion);
  if (version != kConfigSchemaVersion)
    throw ConfigError("config: unsupported schema_version " + std::to_string(version));
  ExperimentConfig c;
  try {
    if (j.contains("task")) c.task = task_from_json(j.at("task"));
    if (j.contains("model")) c.model = model_from_json(j.at("model"));
    if (j.contains("pooling")) c.pooling = pooling_from_json(j.at("pooling"));
    if (j.contains("train")) c.train = train_from_json(j.at("train"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.replicates = get_or<std::size_t>(j, "replicates", 1);
  c.output_dir = get_or<std::string>(j, "output_dir", "");
  c.master_seed = get_or<std::uint64_t>(j, "master_seed", 0);
  c.parallel = get_or<std::size_t>(j, "parallel", 0);
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("config: parse error in " + path + ": " + e.what());
  }
  return from_json(j);
}

ExperimentSummary summarize(const std::vector<TrainReport>& reports) {
  ExperimentSummary s;
  auto fill = [&reports](MetricSummary& out, auto&& pick) {
    std::vector<double> values;
    values.reserve(reports.size());
    for (const auto& r : reports) values.push_back(pick(r));
    out.mean = mean_of(values);
    out.stddev = sample_std(values);
  };
  fill(s.accuracy, [](const TrainReport& r) { return r.final_metrics.accuracy; });
  fill(s.rmse, [](const TrainReport& r) { return r.final_metrics.rmse; });
  fill(s.mae, [](const TrainReport& r) { return r.final_metrics.mae; });
  fill(s.train_loss, [](const TrainReport& r) { return r.final_train_loss; });
  for (const auto& r : reports) s.wall_seconds_total += r.wall_seconds;
  return s;
}

json report_to_json(const TrainReport& report, const ExperimentConfig& config,
                    bool deterministic) {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["kind"] = "train_report";
  j["replicate"] = report.replicate;
  j["config"] = config.to_json();
  j["seeds"] = {{"dataset", report.dataset_seed},
                {"init", report.init_seed},
                {"permutation", report.perm_seed}};
  j["epochs_run"] = report.epochs_run;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r;
    r["epoch"] = row.epoch;
    r["train_loss"] = row.train_loss;
    r["test_accuracy"] = row.test.accuracy;
    r["test_rmse"] = row.test.rmse;
    r["test_mae"] = row.test.mae;
    if (!deterministic) r["wall_seconds"] = row.wall_seconds;
    rows.push_back(std::move(r));
  }
  j["epochs"] = std::move(rows);
  j["final"] = {{"train_loss", report.final_train_loss},
                {"accuracy", report.final_metrics.accuracy},
                {"rmse", report.final_metrics.rmse},
                {"mae", report.final_metrics.mae}};
  char checksum[32];
  std::snprintf(checksum, sizeof(checksum), "%016llx",
                static_cast<unsigned long long>(report.param_checksum));
  j["param_checksum"] = checksum;
  if (!deterministic) j["wall_seconds"] = report.wall_seconds;
  return j;
}

namespace {

void write_metrics_csv(const std::string& path, const TrainReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "epoch,train_loss,test_accuracy,test_rmse,test_mae,wall_seconds\n";
  char buf[512];
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.3f\n", row.epoch,
                  row.train_loss, row.test.accuracy, row.test.rmse, row.test.mae,
                  row.wall_seconds);
    out << buf;
  }
}

json summary_to_json(const ExperimentSummary& s, std::size_t replicates) {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["kind"] = "experiment_summary";
  j["replicates"] = replicates;
  auto metric = [](const MetricSummary& m) {
    return json{{"mean", m.mean}, {"std", m.stddev}};
  };
  j["final"] = {{"accuracy", metric(s.accuracy)},
                {"rmse", metric(s.rmse)},
                {"mae", metric(s.mae)},
                {"train_loss", metric(s.train_loss)}};
  j["wall_seconds_total"] = s.wall_seconds_total;
  return j;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config_in, bool write_outputs) {
  ExperimentConfig config = config_in;
  config.validate();

  config.task.seed = derive_seed(config.master_seed, seed_stream::kDataset);
  const SplitDataset data = generate(config.task);

  RunResult result;
  result.reports.resize(config.replicates);
  result.final_params.resize(config.replicates);

  auto run_one = [&](std::size_t rep) {
    const std::uint64_t rep_seed =
        derive_seed(config.master_seed, seed_stream::kReplicateBase + rep);
    const std::uint64_t init_seed = derive_seed(rep_seed, seed_stream::kInit);
    const std::uint64_t perm_seed = derive_seed(rep_seed, seed_stream::kPermutations);
    TrainOutcome outcome = train_model(config.model, config.pooling, config.train, data,
                                       config.task.seed, init_seed, perm_seed);
    outcome.report.replicate = rep;
    result.reports[rep] = std::move(outcome.report);
    result.final_params[rep] = std::move(outcome.params);
  };

  std::size_t workers = config.parallel == 0
                            ? std::max<std::size_t>(1, std::thread::hardware_concurrency())
                            : config.parallel;
  workers = std::min(workers, config.replicates);
  if (workers <= 1) {
    for (std::size_t rep = 0; rep < config.replicates; ++rep) run_one(rep);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        while (true) {
          const std::size_t rep = next.fetch_add(1);
          if (rep >= config.replicates) return;
          run_one(rep);
        }
      });
    for (auto& t : pool) t.join();
  }

  result.summary = summarize(result.reports);

  if (write_outputs && !config.output_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    const fs::path dir(config.output_dir);
    {
      std::ofstream out(dir / "config.json");
      out << config.to_json().dump(1) << '\n';
    }
    for (std::size_t rep = 0; rep < config.replicates; ++rep) {
      const std::string tag = std::to_string(rep);
      {
        std::ofstream out(dir / ("replicate_" + tag + ".json"));
        out << report_to_json(result.reports[rep], config).dump(1) << '\n';
      }
      write_metrics_csv((dir / ("metrics_" + tag + ".csv")).string(), result.reports[rep]);
      save_checkpoint((dir / ("checkpoint_" + tag + ".json")).string(), config.model,
                      result.final_params[rep], result.reports[rep].init_seed);
    }
    std::ofstream out(dir / "summary.json");
    out << summary_to_json(result.summary, config.replicates).dump(1) << '\n';
  }
  return result;
}

// ---- report tables ----

namespace {

struct RowKey {
  std::string f, method, infer, k, rho;
  bool operator<(const RowKey& o) const {
    return std::tie(f, method, infer, k, rho) < std::tie(o.f, o.method, o.infer, o.k, o.rho);
  }
  std::string label() const { return f + " | " + method + " | " + infer + " | " + k + " | " + rho; }
};

struct Cell {
  std::vector<double> values;
};

std::string fmt_cell(const Cell& c) {
  if (c.values.empty()) return "--";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f(%.2f)", mean_of(c.values), sample_std(c.values));
  return buf;
}

}  // namespace

static std::map<RowKey, std::map<std::string, Cell>> group_reports(
    const std::vector<json>& reports, std::vector<std::string>& task_order) {
  std::map<RowKey, std::map<std::string, Cell>> table;
  for (const json& r : reports) {
    if (get_or<std::string>(r, "kind", "") != "train_report")
      throw std::runtime_error("report_table: not a train report");
    const json& cfg = r.at("config");
    const json& model = cfg.at("model");
    const json& pooling = cfg.at("pooling");
    const std::string task = cfg.at("task").at("name").get<std::string>();
    const std::string strategy = pooling.at("strategy").get<std::string>();

    RowKey key;
    key.f = model.at("f_arch").get<std::string>();
    key.method = strategy == "sampled" ? "pi-sgd" : strategy;
    key.infer = strategy == "sampled"
                    ? std::to_string(pooling.at("infer_samples").get<std::size_t>())
                    : "--";
    key.k = model.at("k").get<int>() == 0 ? "n" : std::to_string(model.at("k").get<int>());
    key.rho = model.at("rho_arch").get<std::string>();

    const double value = task == "variance" ? r.at("final").at("rmse").get<double>()
                                            : r.at("final").at("accuracy").get<double>();
    table[key][task].values.push_back(value);
    if (std::find(task_order.begin(), task_order.end(), task) == task_order.end())
      task_order.push_back(task);
  }
  return table;
}

std::string report_table_markdown(const std::vector<json>& reports) {
  if (reports.empty()) throw std::invalid_argument("report_table: no reports");
  std::vector<std::string> tasks;
  auto table = group_reports(reports, tasks);
  std::ostringstream os;
  os << "| f | method | infr sample | k | rho |";
  for (const auto& t : tasks) os << ' ' << t << " |";
  os << "\n|---|---|---|---|---|";
  for (std::size_t i = 0; i < tasks.size(); ++i) os << "---|";
  os << '\n';
  for (const auto& [key, cells] : table) {
    os << "| " << key.f << " | " << key.method << " | " << key.infer << " | " << key.k << " | "
       << key.rho << " |";
    for (const auto& t : tasks) {
      auto it = cells.find(t);
      os << ' ' << (it == cells.end() ? "--" : fmt_cell(it->second)) << " |";
    }
    os << '\n';
  }
  return os.str();
}

std::string report_table_csv(const std::vector<json>& reports) {
  if (reports.empty()) throw std::invalid_argument("report_table: no reports");
  std::vector<std::string> tasks;
  auto table = group_reports(reports, tasks);
  std::ostringstream os;
  os << "f,method,infr_sample,k,rho";
  for (const auto& t : tasks) os << ',' << t << "_mean," << t << "_std";
  os << '\n';
  for (const auto& [key, cells] : table) {
    os << key.f << ',' << key.method << ',' << key.infer << ',' << key.k << ',' << key.rho;
    for (const auto& t : tasks) {
      auto it = cells.find(t);
      if (it == cells.end() || it->second.values.empty()) {
        os << ",,";
      } else {
        char buf[64];
        std::snprintf(buf, sizeof(buf), ",%.17g,%.17g", mean_of(it->second.values),
                      sample_std(it->second.values));
        os << buf;
      }
    }
    os << '\n';
  }
  return os.str();
}

std::vector<std::string> glob_paths(const std::string& pattern) {
  glob_t g;
  std::vector<std::string> out;
  const int rc = ::glob(pattern.c_str(), GLOB_TILDE, nullptr, &g);
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  ::globfree(&g);
  if (rc != 0 && rc != GLOB_NOMATCH) throw std::runtime_error("glob failed on " + pattern);
  return out;
}

}  // namespace janossy
