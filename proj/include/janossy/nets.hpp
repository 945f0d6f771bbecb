#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "janossy/graph.hpp"
#include "janossy/perm.hpp"
#include "janossy/pooling.hpp"
#include "janossy/tensor.hpp"

namespace janossy {

enum class FArch { kMlp30, kLstm50, kGru80 };
enum class RhoArch { kLinear, kMlp100 };

FArch f_arch_from(const std::string& s);
RhoArch rho_arch_from(const std::string& s);
std::string to_string(FArch a);
std::string to_string(RhoArch a);

// Architecture description. k = 0 means the full-sequence (recurrent)
// model; k >= 1 selects the k-ary feedforward model whose embedding
// dimension shrinks to floor(100/k) so the trainable parameter count stays
// constant across k.
struct ModelSpec {
  int vocab = 100;
  int k = 1;
  FArch f_arch = FArch::kMlp30;
  RhoArch rho_arch = RhoArch::kLinear;
  int output_dim = 1;
  // k-ary models with k >= 2 sort the digits before pooling, cutting the
  // enumeration from n!/(n-k)! ordered selections to C(n,k) combinations.
  bool sort_input = true;

  bool full_sequence() const { return k == 0; }
  int embed_dim() const { return full_sequence() ? 100 : 100 / k; }
  int f_input_dim() const { return full_sequence() ? embed_dim() : k * embed_dim(); }
  int f_output_dim() const;
  bool sorted_pooling() const { return !full_sequence() && k >= 2 && sort_input; }
  void validate() const;
};

// Named parameter tensors. The embedding table is frozen: excluded from the
// trainable list, the checksum of a training run must leave it bit-identical.
struct Params {
  std::vector<std::pair<std::string, Tensor>> trainable;
  Tensor embedding;  // [vocab, embed_dim], requires_grad = false

  Tensor& find(const std::string& name);
  const Tensor& find(const std::string& name) const;
  std::size_t trainable_size() const;
  void zero_grads();
  std::uint64_t checksum() const;  // over trainable values then embedding
};

// Exact count excluding the frozen embedding; reproduces the closed forms
// behind the published table of model sizes.
std::size_t trainable_param_count(const ModelSpec& spec);

// Embedding: standard Gaussian scaled by 1/sqrt(embed_dim). Trainables:
// uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)]. Both streams come from
// `seed`, in a fixed order, so a seed pins the whole initialization.
Params init_params(const ModelSpec& spec, std::uint64_t seed);

// ---- plain (tape-free) forward evaluation ----

Tensor embed(const ModelSpec& spec, const Params& params, int digit);  // [embed_dim]
Tensor mlp_f_forward(const ModelSpec& spec, const Params& params, const Tensor& x);
Tensor rnn_forward(const ModelSpec& spec, const Params& params, const std::vector<Tensor>& seq);
Tensor rho_forward(const ModelSpec& spec, const Params& params, const Tensor& x);

// f as a sequence function over embedded elements (each rank-1 [embed_dim]).
// k-ary models read the first k elements (prefix_arity = k) and zero-pad
// short input; recurrent models consume the whole sequence.
SequenceFunction make_f_sequence_fn(const ModelSpec& spec, const Params& params);
// rho composed inside: f' = rho(f(.)), the unit averaged at inference time
// after pi-SGD training.
SequenceFunction make_fprime_sequence_fn(const ModelSpec& spec, const Params& params);
RhoFunction make_rho_fn(const ModelSpec& spec, const Params& params);

// ---- batched tape builders (training / fast evaluation) ----
// All take a batch of equal-length digit sequences.

// Embeds every digit: [B*n, embed_dim]. Sorts each row first when asked.
NodeId embed_all(Graph& g, const ModelSpec& spec, Params& params,
                 const std::vector<std::vector<int>>& xs, bool sort_rows);

// Exact k-ary pooled predictions [B, output_dim]: mean of f over ordered
// k-selections (or combinations of the sorted input), then rho outside.
NodeId build_pooled_predictions(Graph& g, const ModelSpec& spec, Params& params,
                                const std::vector<std::vector<int>>& xs);

// f applied to one given ordering per example; returns [B, f_output_dim].
// Recurrent models consume the permuted sequence, k-ary models its first k
// elements. This is the pi-SGD per-term unit (rho is applied by the caller,
// inside the term).
NodeId build_f_permuted(Graph& g, const ModelSpec& spec, Params& params,
                        const std::vector<std::vector<int>>& xs,
                        const std::vector<Permutation>& perms);

NodeId apply_rho(Graph& g, const ModelSpec& spec, Params& params, NodeId f_out);

// Canonical-ordering predictions: per-example digit sort, then f, then rho.
NodeId build_canonical_predictions(Graph& g, const ModelSpec& spec, Params& params,
                                   const std::vector<std::vector<int>>& xs, CanonicalKey key);

// ---- checkpointing ----

struct Checkpoint {
  ModelSpec spec;
  Params params;
  std::uint64_t init_seed = 0;
};

// JSON container; doubles survive the round trip bit-exactly.
void save_checkpoint(const std::string& path, const ModelSpec& spec, const Params& params,
                     std::uint64_t init_seed);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace janossy
