#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "janossy/tensor.hpp"

namespace janossy {

struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class OpKind : std::uint8_t {
  kLeaf,
  kMatmul,
  kAdd,
  kSub,
  kMul,
  kTanh,
  kSigmoid,
  kConcat,
  kSlice,
  kSum,
  kMean,
  kSquare,
  kAbs,
  kBiasAdd,     // [N,F] + [F]
  kGroupMean,   // [G*T,F] -> [G,F], mean over consecutive blocks of T rows
  kGatherRows,  // row lookup by index list
  kScale,       // multiply by a compile-time-known constant
};

const char* op_name(OpKind k);

// Extra operands for ops that need more than tensor inputs.
struct OpAux {
  int axis = 0;
  std::size_t begin = 0, end = 0;   // slice
  std::size_t group = 0;            // group_mean block size
  double constant = 0.0;            // scale factor
  std::vector<std::uint32_t> rows;  // gather indices
};

using NodeId = int;

// Dynamic tape: rebuilt every forward pass, walked once in reverse for
// gradients. Node slots (and their buffers) are recycled across clear()
// calls so steady-state training does not allocate.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // Binds an externally owned tensor. The tensor must outlive all use of
  // this graph; gradients accumulate into t.grad when t.requires_grad.
  NodeId leaf(Tensor& t);
  // Copies a value into the graph; never receives gradient.
  NodeId constant(Tensor t);
  NodeId zeros(Shape s) { return constant(Tensor::zeros(std::move(s))); }

  NodeId matmul(NodeId a, NodeId b);
  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId tanh(NodeId a);
  NodeId sigmoid(NodeId a);
  NodeId concat(std::span<const NodeId> parts, int axis);
  NodeId slice(NodeId a, int axis, std::size_t begin, std::size_t end);
  NodeId sum(NodeId a);
  NodeId mean(NodeId a);
  NodeId square(NodeId a);
  NodeId abs(NodeId a);
  NodeId bias_add(NodeId x, NodeId b);
  NodeId group_mean(NodeId x, std::size_t block);
  NodeId gather_rows(NodeId x, std::vector<std::uint32_t> rows);
  NodeId scale(NodeId a, double c);

  // Generic dispatch used by the op-level test drivers.
  NodeId apply(OpKind kind, std::span<const NodeId> inputs, OpAux aux = {});

  const Tensor& value(NodeId id) const;
  double scalar_value(NodeId id) const { return value(id).item(); }
  // Gradient of the last backward() with respect to a node's output.
  std::span<const double> node_grad(NodeId id) const;

  // Reverse sweep from a scalar loss node. Accumulates into the .grad of
  // every bound leaf with requires_grad (allocating it if absent); repeated
  // calls keep accumulating until the caller resets the leaf grads.
  void backward(NodeId loss);

  void clear();  // drop all nodes, keep buffer capacity
  std::size_t node_count() const { return used_; }

 private:
  struct Node {
    OpKind op = OpKind::kLeaf;
    NodeId a = -1, b = -1;
    std::vector<NodeId> extra;  // concat parts beyond the first two
    Tensor* bound = nullptr;
    Tensor value;
    std::vector<double> grad;
    bool needs_grad = false;
    OpAux aux;
  };

  Node& fresh(OpKind op);
  NodeId finish(Node& n);
  const Tensor& val(NodeId id) const;
  Node& at(NodeId id);
  void check_id(NodeId id) const;

  // deque: growth never moves existing nodes, so value references taken
  // while building an op stay valid
  std::deque<Node> pool_;
  std::size_t used_ = 0;
};

// Max over all parameter entries of |autodiff - central difference| /
// max(1e-12, |central difference|). build must deterministically construct
// the same scalar loss from the current parameter values every call.
double grad_check(const std::function<NodeId(Graph&)>& build, std::span<Tensor* const> params,
                  double step);

// Same comparison at parameter-tensor granularity: max over tensors of
// ||ad - fd||_2 / max(1e-12, ||fd||_2). Entry-level division breaks down on
// large models where some true gradient entries sit below the finite
// difference noise floor; the norm ratio still exposes any systematic error.
double grad_check_norms(const std::function<NodeId(Graph&)>& build,
                        std::span<Tensor* const> params, double step);

}  // namespace janossy
