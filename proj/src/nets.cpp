#include "janossy/nets.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "janossy/rng.hpp"
#include "json.hpp"

namespace janossy {

using json = nlohmann::ordered_json;

FArch f_arch_from(const std::string& s) {
  if (s == "mlp30") return FArch::kMlp30;
  if (s == "lstm50") return FArch::kLstm50;
  if (s == "gru80") return FArch::kGru80;
  throw std::invalid_argument("unknown f architecture '" + s + "'");
}

RhoArch rho_arch_from(const std::string& s) {
  if (s == "linear") return RhoArch::kLinear;
  if (s == "mlp100") return RhoArch::kMlp100;
  throw std::invalid_argument("unknown rho architecture '" + s + "'");
}

std::string to_string(FArch a) {
  switch (a) {
    case FArch::kMlp30: return "mlp30";
    case FArch::kLstm50: return "lstm50";
    case FArch::kGru80: return "gru80";
  }
  return "?";
}

std::string to_string(RhoArch a) {
  return a == RhoArch::kLinear ? "linear" : "mlp100";
}

int ModelSpec::f_output_dim() const {
  switch (f_arch) {
    case FArch::kMlp30: return 30;
    case FArch::kLstm50: return 50;
    case FArch::kGru80: return 80;
  }
  return 0;
}

void ModelSpec::validate() const {
  if (vocab < 1) throw std::invalid_argument("ModelSpec: vocab must be >= 1");
  if (k < 0) throw std::invalid_argument("ModelSpec: k must be >= 0 (0 = full sequence)");
  if (output_dim < 1) throw std::invalid_argument("ModelSpec: output_dim must be >= 1");
  if (full_sequence() && f_arch == FArch::kMlp30)
    throw std::invalid_argument("ModelSpec: full-sequence models need a recurrent f (lstm50/gru80)");
  if (!full_sequence() && f_arch != FArch::kMlp30)
    throw std::invalid_argument("ModelSpec: k-ary models use the feedforward f (mlp30)");
  if (embed_dim() < 1) throw std::invalid_argument("ModelSpec: floor(100/k) must be >= 1");
}

Tensor& Params::find(const std::string& name) {
  for (auto& [n, t] : trainable)
    if (n == name) return t;
  throw std::out_of_range("Params: no tensor named '" + name + "'");
}

const Tensor& Params::find(const std::string& name) const {
  for (const auto& [n, t] : trainable)
    if (n == name) return t;
  throw std::out_of_range("Params: no tensor named '" + name + "'");
}

std::size_t Params::trainable_size() const {
  std::size_t total = 0;
  for (const auto& [n, t] : trainable) total += t.size();
  return total;
}

void Params::zero_grads() {
  for (auto& [n, t] : trainable) t.zero_grad();
}

std::uint64_t Params::checksum() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const Tensor& t) {
    for (double v : t.data) {
      std::uint64_t bits;
      static_assert(sizeof(bits) == sizeof(v));
      std::memcpy(&bits, &v, sizeof(bits));
      for (int b = 0; b < 8; ++b) {
        h ^= (bits >> (8 * b)) & 0xffu;
        h *= 0x100000001b3ULL;
      }
    }
  };
  for (const auto& [n, t] : trainable) mix(t);
  mix(embedding);
  return h;
}

std::size_t trainable_param_count(const ModelSpec& spec) {
  spec.validate();
  const std::size_t out = static_cast<std::size_t>(spec.output_dim);
  const std::size_t fout = static_cast<std::size_t>(spec.f_output_dim());
  std::size_t f_params = 0;
  switch (spec.f_arch) {
    case FArch::kMlp30:
      f_params = static_cast<std::size_t>(spec.f_input_dim()) * 30 + 30;
      break;
    case FArch::kLstm50:
      // fused gate blocks i,f,g,o with separate input- and hidden-side biases
      f_params = 4 * 50 * (100 + 50) + 2 * 4 * 50;
      break;
    case FArch::kGru80:
      f_params = 3 * 80 * (100 + 80) + 2 * 3 * 80;
      break;
  }
  std::size_t rho_params = 0;
  if (spec.rho_arch == RhoArch::kLinear) {
    rho_params = fout * out + out;
  } else {
    rho_params = fout * 100 + 100 + 100 * out + out;
  }
  return f_params + rho_params;
}

namespace {

Tensor uniform_init(Rng& rng, Shape shape, std::size_t fan_in) {
  Tensor t = Tensor::zeros(std::move(shape));
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (double& v : t.data) v = rng.uniform(-bound, bound);
  t.requires_grad = true;
  return t;
}

}  // namespace

Params init_params(const ModelSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  Params p;

  const std::size_t d = static_cast<std::size_t>(spec.embed_dim());
  const std::size_t vocab = static_cast<std::size_t>(spec.vocab);
  p.embedding = Tensor::zeros({vocab, d});
  const double escale = 1.0 / std::sqrt(static_cast<double>(d));
  for (double& v : p.embedding.data) v = rng.gaussian() * escale;
  p.embedding.requires_grad = false;

  const std::size_t out = static_cast<std::size_t>(spec.output_dim);
  const std::size_t fout = static_cast<std::size_t>(spec.f_output_dim());
  auto push = [&p](const std::string& name, Tensor t) {
    p.trainable.emplace_back(name, std::move(t));
  };

  switch (spec.f_arch) {
    case FArch::kMlp30: {
      const std::size_t in = static_cast<std::size_t>(spec.f_input_dim());
      push("f.W", uniform_init(rng, {in, 30}, in));
      push("f.b", uniform_init(rng, {30}, in));
      break;
    }
    case FArch::kLstm50:
    case FArch::kGru80: {
      const std::size_t H = fout;
      const std::size_t gates = (spec.f_arch == FArch::kLstm50 ? 4 : 3) * H;
      const std::size_t in = static_cast<std::size_t>(spec.embed_dim());
      push("f.W_ih", uniform_init(rng, {in, gates}, in));
      push("f.b_ih", uniform_init(rng, {gates}, in));
      push("f.W_hh", uniform_init(rng, {H, gates}, H));
      push("f.b_hh", uniform_init(rng, {gates}, H));
      break;
    }
  }
  if (spec.rho_arch == RhoArch::kLinear) {
    push("rho.W", uniform_init(rng, {fout, out}, fout));
    push("rho.b", uniform_init(rng, {out}, fout));
  } else {
    push("rho.U", uniform_init(rng, {fout, 100}, fout));
    push("rho.c", uniform_init(rng, {100}, fout));
    push("rho.V", uniform_init(rng, {100, out}, 100));
    push("rho.d", uniform_init(rng, {out}, 100));
  }

  if (p.trainable_size() != trainable_param_count(spec))
    throw std::logic_error("init_params: allocated size disagrees with trainable_param_count");
  return p;
}

// ---- plain forwards ----

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapC = Eigen::Map<const EMat>;
using VecC = Eigen::Map<const Eigen::VectorXd>;

Eigen::VectorXd affine(const Tensor& W, const Tensor& b, const Eigen::VectorXd& x) {
  return MapC(W.data.data(), W.rows(), W.cols()).transpose() * x + VecC(b.data.data(), b.size());
}

Eigen::VectorXd as_vec(const Tensor& t) {
  return VecC(t.data.data(), t.size());
}

Tensor to_tensor(const Eigen::VectorXd& v) {
  return Tensor::row(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace

Tensor embed(const ModelSpec& spec, const Params& params, int digit) {
  if (digit < 0 || digit >= spec.vocab)
    throw std::out_of_range("embed: digit " + std::to_string(digit) +
                            " outside vocabulary [0, " + std::to_string(spec.vocab) + ")");
  const std::size_t d = static_cast<std::size_t>(spec.embed_dim());
  std::vector<double> row(params.embedding.data.begin() + digit * d,
                          params.embedding.data.begin() + (digit + 1) * d);
  return Tensor::row(std::move(row));
}

Tensor mlp_f_forward(const ModelSpec& spec, const Params& params, const Tensor& x) {
  const std::size_t in = static_cast<std::size_t>(spec.f_input_dim());
  if (x.size() != in)
    throw ShapeError("mlp_f_forward: expected input length " + std::to_string(in) + ", got " +
                     shape_str(x.shape));
  Eigen::VectorXd h = affine(params.find("f.W"), params.find("f.b"), as_vec(x));
  for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = std::tanh(h[i]);
  return to_tensor(h);
}

Tensor rnn_forward(const ModelSpec& spec, const Params& params, const std::vector<Tensor>& seq) {
  if (seq.empty()) throw std::invalid_argument("rnn_forward: empty sequence");
  const std::size_t d = static_cast<std::size_t>(spec.embed_dim());
  for (const Tensor& t : seq)
    if (t.size() != d)
      throw ShapeError("rnn_forward: element shape " + shape_str(t.shape) + " != [" +
                       std::to_string(d) + "]");
  const std::size_t H = static_cast<std::size_t>(spec.f_output_dim());
  const Tensor& W_ih = params.find("f.W_ih");
  const Tensor& b_ih = params.find("f.b_ih");
  const Tensor& W_hh = params.find("f.W_hh");
  const Tensor& b_hh = params.find("f.b_hh");

  Eigen::VectorXd h = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(H);
  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };

  for (const Tensor& xt : seq) {
    const Eigen::VectorXd xg = affine(W_ih, b_ih, as_vec(xt));
    const Eigen::VectorXd hg = affine(W_hh, b_hh, h);
    if (spec.f_arch == FArch::kLstm50) {
      Eigen::VectorXd nh(H), nc(H);
      for (std::size_t j = 0; j < H; ++j) {
        const double i_g = sig(xg[j] + hg[j]);
        const double f_g = sig(xg[H + j] + hg[H + j]);
        const double g_g = std::tanh(xg[2 * H + j] + hg[2 * H + j]);
        const double o_g = sig(xg[3 * H + j] + hg[3 * H + j]);
        nc[j] = f_g * c[j] + i_g * g_g;
        nh[j] = o_g * std::tanh(nc[j]);
      }
      h = nh;
      c = nc;
    } else {
      Eigen::VectorXd nh(H);
      for (std::size_t j = 0; j < H; ++j) {
        const double r = sig(xg[j] + hg[j]);
        const double z = sig(xg[H + j] + hg[H + j]);
        const double n = std::tanh(xg[2 * H + j] + r * hg[2 * H + j]);
        nh[j] = (1.0 - z) * n + z * h[j];
      }
      h = nh;
    }
  }
  return to_tensor(h);  // short-term hidden state of the last step
}

Tensor rho_forward(const ModelSpec& spec, const Params& params, const Tensor& x) {
  const std::size_t fout = static_cast<std::size_t>(spec.f_output_dim());
  if (x.size() != fout)
    throw ShapeError("rho_forward: expected input length " + std::to_string(fout) + ", got " +
                     shape_str(x.shape));
  if (spec.rho_arch == RhoArch::kLinear)
    return to_tensor(affine(params.find("rho.W"), params.find("rho.b"), as_vec(x)));
  Eigen::VectorXd hidden = affine(params.find("rho.U"), params.find("rho.c"), as_vec(x));
  for (Eigen::Index i = 0; i < hidden.size(); ++i) hidden[i] = std::tanh(hidden[i]);
  return to_tensor(affine(params.find("rho.V"), params.find("rho.d"), hidden));
}

SequenceFunction make_f_sequence_fn(const ModelSpec& spec, const Params& params) {
  SequenceFunction f;
  if (spec.full_sequence()) {
    f.eval = [&spec, &params](std::size_t, const std::vector<Tensor>& seq) {
      return rnn_forward(spec, params, seq);
    };
  } else {
    const std::size_t k = static_cast<std::size_t>(spec.k);
    const std::size_t d = static_cast<std::size_t>(spec.embed_dim());
    f.prefix_arity = k;
    f.eval = [&spec, &params, k, d](std::size_t, const std::vector<Tensor>& seq) {
      std::vector<Tensor> head =
          seq.size() >= k ? std::vector<Tensor>(seq.begin(), seq.begin() + k)
                          : project_k(seq, k);
      std::vector<double> flat;
      flat.reserve(k * d);
      for (const Tensor& t : head) flat.insert(flat.end(), t.data.begin(), t.data.end());
      return mlp_f_forward(spec, params, Tensor::row(std::move(flat)));
    };
  }
  return f;
}

SequenceFunction make_fprime_sequence_fn(const ModelSpec& spec, const Params& params) {
  SequenceFunction f = make_f_sequence_fn(spec, params);
  SequenceFunction composed;
  composed.prefix_arity = f.prefix_arity;
  composed.eval = [f, &spec, &params](std::size_t n, const std::vector<Tensor>& seq) {
    return rho_forward(spec, params, f.eval(n, seq));
  };
  return composed;
}

RhoFunction make_rho_fn(const ModelSpec& spec, const Params& params) {
  return [&spec, &params](const Tensor& x) { return rho_forward(spec, params, x); };
}

// ---- batched tape builders ----

namespace {

std::size_t batch_seq_len(const std::vector<std::vector<int>>& xs) {
  if (xs.empty()) throw std::invalid_argument("model forward: empty batch");
  const std::size_t n = xs[0].size();
  if (n == 0) throw std::invalid_argument("model forward: empty sequence in batch");
  for (const auto& row : xs)
    if (row.size() != n)
      throw std::invalid_argument("model forward: batch requires equal-length sequences");
  return n;
}

NodeId rnn_unroll(Graph& g, const ModelSpec& spec, Params& params, NodeId embedded,
                  const std::vector<std::vector<int>>& xs,
                  const std::vector<Permutation>& perms) {
  const std::size_t B = xs.size();
  const std::size_t n = xs[0].size();
  const std::size_t H = static_cast<std::size_t>(spec.f_output_dim());
  NodeId W_ih = g.leaf(params.find("f.W_ih"));
  NodeId b_ih = g.leaf(params.find("f.b_ih"));
  NodeId W_hh = g.leaf(params.find("f.W_hh"));
  NodeId b_hh = g.leaf(params.find("f.b_hh"));

  NodeId h = g.zeros({B, H});
  NodeId c = g.zeros({B, H});
  std::vector<std::uint32_t> rows(B);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t b = 0; b < B; ++b)
      rows[b] = static_cast<std::uint32_t>(b * n + perms[b].mapping[t]);
    NodeId xt = g.gather_rows(embedded, rows);
    NodeId xg = g.bias_add(g.matmul(xt, W_ih), b_ih);
    NodeId hg = g.bias_add(g.matmul(h, W_hh), b_hh);
    if (spec.f_arch == FArch::kLstm50) {
      NodeId gates = g.add(xg, hg);
      NodeId i_g = g.sigmoid(g.slice(gates, 1, 0, H));
      NodeId f_g = g.sigmoid(g.slice(gates, 1, H, 2 * H));
      NodeId g_g = g.tanh(g.slice(gates, 1, 2 * H, 3 * H));
      NodeId o_g = g.sigmoid(g.slice(gates, 1, 3 * H, 4 * H));
      c = g.add(g.mul(f_g, c), g.mul(i_g, g_g));
      h = g.mul(o_g, g.tanh(c));
    } else {
      NodeId r = g.sigmoid(g.add(g.slice(xg, 1, 0, H), g.slice(hg, 1, 0, H)));
      NodeId z = g.sigmoid(g.add(g.slice(xg, 1, H, 2 * H), g.slice(hg, 1, H, 2 * H)));
      NodeId nn = g.tanh(g.add(g.slice(xg, 1, 2 * H, 3 * H),
                               g.mul(r, g.slice(hg, 1, 2 * H, 3 * H))));
      h = g.add(nn, g.mul(z, g.sub(h, nn)));  // (1-z)*n + z*h
    }
  }
  return h;
}

NodeId mlp_f_from_rows(Graph& g, const ModelSpec& spec, Params& params, NodeId embedded,
                       const std::vector<std::vector<std::uint32_t>>& rows_per_slot) {
  std::vector<NodeId> parts;
  parts.reserve(rows_per_slot.size());
  for (const auto& rows : rows_per_slot) parts.push_back(g.gather_rows(embedded, rows));
  NodeId x = parts.size() == 1 ? parts[0] : g.concat(parts, 1);
  NodeId W = g.leaf(params.find("f.W"));
  NodeId b = g.leaf(params.find("f.b"));
  return g.tanh(g.bias_add(g.matmul(x, W), b));
}

}  // namespace

NodeId embed_all(Graph& g, const ModelSpec& spec, Params& params,
                 const std::vector<std::vector<int>>& xs, bool sort_rows) {
  const std::size_t n = batch_seq_len(xs);
  std::vector<std::uint32_t> flat;
  flat.reserve(xs.size() * n);
  std::vector<int> row;
  for (const auto& x : xs) {
    row.assign(x.begin(), x.end());
    if (sort_rows) std::sort(row.begin(), row.end());
    for (int d : row) {
      if (d < 0 || d >= spec.vocab)
        throw std::out_of_range("embed_all: digit " + std::to_string(d) +
                                " outside vocabulary [0, " + std::to_string(spec.vocab) + ")");
      flat.push_back(static_cast<std::uint32_t>(d));
    }
  }
  return g.gather_rows(g.leaf(params.embedding), flat);
}

NodeId apply_rho(Graph& g, const ModelSpec& spec, Params& params, NodeId f_out) {
  if (spec.rho_arch == RhoArch::kLinear) {
    NodeId W = g.leaf(params.find("rho.W"));
    NodeId b = g.leaf(params.find("rho.b"));
    return g.bias_add(g.matmul(f_out, W), b);
  }
  NodeId U = g.leaf(params.find("rho.U"));
  NodeId c = g.leaf(params.find("rho.c"));
  NodeId V = g.leaf(params.find("rho.V"));
  NodeId d = g.leaf(params.find("rho.d"));
  NodeId hidden = g.tanh(g.bias_add(g.matmul(f_out, U), c));
  return g.bias_add(g.matmul(hidden, V), d);
}

NodeId build_pooled_predictions(Graph& g, const ModelSpec& spec, Params& params,
                                const std::vector<std::vector<int>>& xs) {
  if (spec.full_sequence())
    throw std::invalid_argument(
        "build_pooled_predictions: full-sequence models train with sampled permutations; "
        "exact pooling over every ordering is not tractable here");
  const std::size_t B = xs.size();
  const std::size_t n = batch_seq_len(xs);
  const std::size_t k = static_cast<std::size_t>(spec.k);
  if (n < k)
    throw std::invalid_argument("build_pooled_predictions: sequence length " + std::to_string(n) +
                                " below arity " + std::to_string(k));

  NodeId embedded = embed_all(g, spec, params, xs, spec.sorted_pooling());
  const auto selections = spec.sorted_pooling() ? enumerate_k_combinations(n, k)
                                                : enumerate_k_permutations(n, k);
  const std::size_t T = selections.size();
  std::vector<std::vector<std::uint32_t>> rows(k, std::vector<std::uint32_t>(B * T));
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t j = 0; j < k; ++j)
        rows[j][b * T + t] = static_cast<std::uint32_t>(b * n + selections[t].indices[j]);

  NodeId f_terms = mlp_f_from_rows(g, spec, params, embedded, rows);  // [B*T, 30]
  NodeId pooled = g.group_mean(f_terms, T);                           // [B, 30]
  return apply_rho(g, spec, params, pooled);
}

NodeId build_f_permuted(Graph& g, const ModelSpec& spec, Params& params,
                        const std::vector<std::vector<int>>& xs,
                        const std::vector<Permutation>& perms) {
  const std::size_t B = xs.size();
  const std::size_t n = batch_seq_len(xs);
  if (perms.size() != B)
    throw std::invalid_argument("build_f_permuted: one permutation per example required");
  for (const auto& p : perms)
    if (p.size() != n) throw std::invalid_argument("build_f_permuted: permutation length != n");

  NodeId embedded = embed_all(g, spec, params, xs, /*sort_rows=*/false);
  if (spec.full_sequence()) return rnn_unroll(g, spec, params, embedded, xs, perms);

  const std::size_t k = static_cast<std::size_t>(spec.k);
  if (n < k)
    throw std::invalid_argument("build_f_permuted: sequence length below arity");
  std::vector<std::vector<std::uint32_t>> rows(k, std::vector<std::uint32_t>(B));
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t j = 0; j < k; ++j)
      rows[j][b] = static_cast<std::uint32_t>(b * n + perms[b].mapping[j]);
  return mlp_f_from_rows(g, spec, params, embedded, rows);  // [B, 30]
}

NodeId build_canonical_predictions(Graph& g, const ModelSpec& spec, Params& params,
                                   const std::vector<std::vector<int>>& xs, CanonicalKey key) {
  const std::size_t n = batch_seq_len(xs);
  std::vector<Permutation> orders;
  orders.reserve(xs.size());
  for (const auto& x : xs) {
    Permutation p = Permutation::identity(n);
    std::stable_sort(p.mapping.begin(), p.mapping.end(), [&](std::uint32_t a, std::uint32_t b) {
      return key == CanonicalKey::kAscending ? x[a] < x[b] : x[b] < x[a];
    });
    orders.push_back(std::move(p));
  }
  return apply_rho(g, spec, params, build_f_permuted(g, spec, params, xs, orders));
}

// ---- checkpointing ----

namespace {

json spec_to_json(const ModelSpec& s) {
  json j;
  j["vocab"] = s.vocab;
  j["k"] = s.k;
  j["f_arch"] = to_string(s.f_arch);
  j["rho_arch"] = to_string(s.rho_arch);
  j["output_dim"] = s.output_dim;
  j["sort_input"] = s.sort_input;
  return j;
}

ModelSpec spec_from_json(const json& j) {
  ModelSpec s;
  s.vocab = j.at("vocab").get<int>();
  s.k = j.at("k").get<int>();
  s.f_arch = f_arch_from(j.at("f_arch").get<std::string>());
  s.rho_arch = rho_arch_from(j.at("rho_arch").get<std::string>());
  s.output_dim = j.at("output_dim").get<int>();
  s.sort_input = j.at("sort_input").get<bool>();
  s.validate();
  return s;
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelSpec& spec, const Params& params,
                     std::uint64_t init_seed) {
  json j;
  j["schema_version"] = 1;
  j["kind"] = "model_checkpoint";
  j["spec"] = spec_to_json(spec);
  j["init_seed"] = init_seed;
  json named = json::object();
  for (const auto& [name, t] : params.trainable) {
    json entry;
    entry["shape"] = t.shape;
    entry["data"] = t.data;
    named[name] = std::move(entry);
  }
  j["trainable"] = std::move(named);
  j["embedding"] = {{"shape", params.embedding.shape}, {"data", params.embedding.data}};

  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out << j.dump(1) << '\n';
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  json j = json::parse(in);
  if (j.at("kind").get<std::string>() != "model_checkpoint")
    throw std::runtime_error("load_checkpoint: " + path + " is not a model checkpoint");

  Checkpoint ck;
  ck.spec = spec_from_json(j.at("spec"));
  ck.init_seed = j.at("init_seed").get<std::uint64_t>();
  // allocate with the right names/shapes, then overwrite values
  ck.params = init_params(ck.spec, ck.init_seed);
  for (auto& [name, t] : ck.params.trainable) {
    const json& entry = j.at("trainable").at(name);
    const auto shape = entry.at("shape").get<Shape>();
    if (shape != t.shape)
      throw std::runtime_error("load_checkpoint: shape mismatch for " + name);
    t.data = entry.at("data").get<std::vector<double>>();
  }
  ck.params.embedding.data = j.at("embedding").at("data").get<std::vector<double>>();
  if (ck.params.embedding.data.size() != shape_numel(ck.params.embedding.shape))
    throw std::runtime_error("load_checkpoint: embedding size mismatch");
  return ck;
}

}  // namespace janossy
