#include "janossy/graph.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace janossy {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapC = Eigen::Map<const EMat>;
using Map = Eigen::Map<EMat>;

[[noreturn]] void shape_fail(OpKind op, const Tensor& a, const Tensor& b) {
  throw ShapeError(std::string(op_name(op)) + ": incompatible shapes " + shape_str(a.shape) +
                   " and " + shape_str(b.shape));
}

[[noreturn]] void shape_fail(OpKind op, const Tensor& a, const std::string& why) {
  throw ShapeError(std::string(op_name(op)) + ": " + why + " (got " + shape_str(a.shape) + ")");
}

}  // namespace

const char* op_name(OpKind k) {
  switch (k) {
    case OpKind::kLeaf: return "leaf";
    case OpKind::kMatmul: return "matmul";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kTanh: return "tanh";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kConcat: return "concat";
    case OpKind::kSlice: return "slice";
    case OpKind::kSum: return "sum";
    case OpKind::kMean: return "mean";
    case OpKind::kSquare: return "square";
    case OpKind::kAbs: return "abs";
    case OpKind::kBiasAdd: return "bias_add";
    case OpKind::kGroupMean: return "group_mean";
    case OpKind::kGatherRows: return "gather_rows";
    case OpKind::kScale: return "scale";
  }
  return "?";
}

void Graph::check_id(NodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= used_)
    throw std::logic_error("Graph: invalid node id " + std::to_string(id));
}

Graph::Node& Graph::at(NodeId id) {
  check_id(id);
  return pool_[static_cast<std::size_t>(id)];
}

const Tensor& Graph::val(NodeId id) const {
  check_id(id);
  const Node& n = pool_[static_cast<std::size_t>(id)];
  return n.bound ? *n.bound : n.value;
}

const Tensor& Graph::value(NodeId id) const { return val(id); }

std::span<const double> Graph::node_grad(NodeId id) const {
  check_id(id);
  return pool_[static_cast<std::size_t>(id)].grad;
}

Graph::Node& Graph::fresh(OpKind op) {
  if (used_ == pool_.size()) pool_.emplace_back();
  Node& n = pool_[used_];
  n.op = op;
  n.a = n.b = -1;
  n.extra.clear();
  n.bound = nullptr;
  n.grad.clear();
  n.needs_grad = false;
  n.aux.axis = 0;
  n.aux.begin = n.aux.end = 0;
  n.aux.group = 0;
  n.aux.constant = 0.0;
  n.aux.rows.clear();
  return n;
}

NodeId Graph::finish(Node& n) {
  NodeId id = static_cast<NodeId>(used_);
  ++used_;
  if (!n.value.all_finite() && !n.bound)
    throw std::runtime_error(std::string(op_name(n.op)) + ": non-finite output");
  return id;
}

void Graph::clear() { used_ = 0; }

NodeId Graph::leaf(Tensor& t) {
  Node& n = fresh(OpKind::kLeaf);
  n.bound = &t;
  n.needs_grad = t.requires_grad;
  NodeId id = static_cast<NodeId>(used_++);
  return id;
}

NodeId Graph::constant(Tensor t) {
  Node& n = fresh(OpKind::kLeaf);
  n.value = std::move(t);
  return finish(n);
}

NodeId Graph::matmul(NodeId a, NodeId b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  if (A.rank() != 2 || B.rank() != 2 || A.cols() != B.rows()) shape_fail(OpKind::kMatmul, A, B);
  Node& n = fresh(OpKind::kMatmul);
  n.a = a;
  n.b = b;
  n.needs_grad = at(a).needs_grad || at(b).needs_grad;
  const std::size_t m = A.rows(), k = A.cols(), p = B.cols();
  n.value.shape = {m, p};
  n.value.data.resize(m * p);
  Map(n.value.data.data(), m, p).noalias() =
      MapC(A.data.data(), m, k) * MapC(B.data.data(), k, p);
  return finish(n);
}

// Shared builder for add/sub/mul: same shape, or scalar on either side.
NodeId Graph::add(NodeId a, NodeId b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  Node& n = fresh(OpKind::kAdd);
  n.a = a;
  n.b = b;
  n.needs_grad = at(a).needs_grad || at(b).needs_grad;
  if (same_shape(A, B)) {
    n.value.shape = A.shape;
    n.value.data.resize(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) n.value.data[i] = A.data[i] + B.data[i];
  } else if (A.is_scalar() || B.is_scalar()) {
    const Tensor& big = A.is_scalar() ? B : A;
    const double s = (A.is_scalar() ? A : B).data[0];
    n.value.shape = big.shape;
    n.value.data.resize(big.size());
    for (std::size_t i = 0; i < big.size(); ++i) n.value.data[i] = big.data[i] + s;
  } else {
    shape_fail(OpKind::kAdd, A, B);
  }
  return finish(n);
}

NodeId Graph::sub(NodeId a, NodeId b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  Node& n = fresh(OpKind::kSub);
  n.a = a;
  n.b = b;
  n.needs_grad = at(a).needs_grad || at(b).needs_grad;
  if (same_shape(A, B)) {
    n.value.shape = A.shape;
    n.value.data.resize(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) n.value.data[i] = A.data[i] - B.data[i];
  } else if (B.is_scalar()) {
    const double s = B.data[0];
    n.value.shape = A.shape;
    n.value.data.resize(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) n.value.data[i] = A.data[i] - s;
  } else if (A.is_scalar()) {
    const double s = A.data[0];
    n.value.shape = B.shape;
    n.value.data.resize(B.size());
    for (std::size_t i = 0; i < B.size(); ++i) n.value.data[i] = s - B.data[i];
  } else {
    shape_fail(OpKind::kSub, A, B);
  }
  return finish(n);
}

NodeId Graph::mul(NodeId a, NodeId b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  Node& n = fresh(OpKind::kMul);
  n.a = a;
  n.b = b;
  n.needs_grad = at(a).needs_grad || at(b).needs_grad;
  if (same_shape(A, B)) {
    n.value.shape = A.shape;
    n.value.data.resize(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) n.value.data[i] = A.data[i] * B.data[i];
  } else if (A.is_scalar() || B.is_scalar()) {
    const Tensor& big = A.is_scalar() ? B : A;
    const double s = (A.is_scalar() ? A : B).data[0];
    n.value.shape = big.shape;
    n.value.data.resize(big.size());
    for (std::size_t i = 0; i < big.size(); ++i) n.value.data[i] = big.data[i] * s;
  } else {
    shape_fail(OpKind::kMul, A, B);
  }
  return finish(n);
}

NodeId Graph::tanh(NodeId a) {
  const Tensor& A = val(a);
  Node& n = fresh(OpKind::kTanh);
  n.a = a;
  n.needs_grad = at(a).needs_grad;
  n.value.shape = A.shape;
  n.value.data.resize(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) n.value.data[i] = std::tanh(A.data[i]);
  return finish(n);
}

NodeId Graph::sigmoid(NodeId a) {
  const Tensor& A = val(a);
  Node& n = fresh(OpKind::kSigmoid);
  n.a = a;
  n.needs_grad = at(a).needs_grad;
  n.value.shape = A.shape;
  n.value.data.resize(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) n.value.data[i] = 1.0 / (1.0 + std::exp(-A.data[i]));
  return finish(n);
}

NodeId Graph::square(NodeId a) {
  const Tensor& A = val(a);
  Node& n = fresh(OpKind::kSquare);
  n.a = a;
  n.needs_grad = at(a).needs_grad;
  n.value.shape = A.shape;
  n.value.data.resize(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) n.value.data[i] = A.data[i] * A.data[i];
  return finish(n);
}

NodeId Graph::abs(NodeId a) {
  const Tensor& A = val(a);
  Node& n = fresh(OpKind::kAbs);
  n.a = a;
  n.needs_grad = at(a).needs_grad;
  n.value.shape = A.shape;
  n.value.data.resize(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) n.value.data[i] = std::fabs(A.data[i]);
  return finish(n);
}

NodeId Graph::concat(std::span<const NodeId> parts, int axis) {
  if (parts.empty()) throw ShapeError("concat: needs at least one input");
  const Tensor& first = val(parts[0]);
  Node& n = fresh(OpKind::kConcat);
  n.aux.axis = axis;
  n.a = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) n.extra.push_back(parts[i]);
  for (NodeId p : parts) n.needs_grad = n.needs_grad || at(p).needs_grad;

  if (first.rank() == 1) {
    if (axis != 0) shape_fail(OpKind::kConcat, first, "rank-1 concat requires axis 0");
    std::size_t total = 0;
    for (NodeId p : parts) {
      if (val(p).rank() != 1) shape_fail(OpKind::kConcat, val(p), "rank mismatch");
      total += val(p).size();
    }
    n.value.shape = {total};
    n.value.data.resize(total);
    std::size_t off = 0;
    for (NodeId p : parts) {
      const Tensor& t = val(p);
      std::copy(t.data.begin(), t.data.end(), n.value.data.begin() + off);
      off += t.size();
    }
    return finish(n);
  }

  if (first.rank() != 2 || (axis != 0 && axis != 1))
    shape_fail(OpKind::kConcat, first, "rank-2 with axis 0 or 1 required");
  if (axis == 0) {
    std::size_t rows = 0;
    const std::size_t cols = first.cols();
    for (NodeId p : parts) {
      if (val(p).rank() != 2 || val(p).cols() != cols) shape_fail(OpKind::kConcat, val(p), first);
      rows += val(p).rows();
    }
    n.value.shape = {rows, cols};
    n.value.data.resize(rows * cols);
    std::size_t off = 0;
    for (NodeId p : parts) {
      const Tensor& t = val(p);
      std::copy(t.data.begin(), t.data.end(), n.value.data.begin() + off);
      off += t.size();
    }
  } else {
    const std::size_t rows = first.rows();
    std::size_t cols = 0;
    for (NodeId p : parts) {
      if (val(p).rank() != 2 || val(p).rows() != rows) shape_fail(OpKind::kConcat, val(p), first);
      cols += val(p).cols();
    }
    n.value.shape = {rows, cols};
    n.value.data.resize(rows * cols);
    std::size_t col_off = 0;
    for (NodeId p : parts) {
      const Tensor& t = val(p);
      const std::size_t tc = t.cols();
      for (std::size_t r = 0; r < rows; ++r)
        std::copy(t.data.begin() + r * tc, t.data.begin() + (r + 1) * tc,
                  n.value.data.begin() + r * cols + col_off);
      col_off += tc;
    }
  }
  return finish(n);
}

NodeId Graph::slice(NodeId a, int axis, std::size_t begin, std::size_t end) {
  const Tensor& A = val(a);
  Node& n = fresh(OpKind::kSlice);
  n.a = a;
  n.needs_grad = at(a).needs_grad;
  n.aux.axis = axis;
  n.aux.begin = begin;
  n.aux.end = end;
  if (begin > end) shape_fail(OpKind::kSlice, A, "begin > end");
  if (A.rank() == 1) {
    if (axis != 0 || end > A.size()) shape_fail(OpKind::kSlice, A, "bad rank-1 slice bounds");
    n.value.shape = {end - begin};
    n.value.data.assign(A.data.begin() + begin, A.data.begin() + end);
  } else if (A.rank() == 2 && axis == 0) {
    if (end > A.rows()) shape_fail(OpKind::kSlice, A, "row slice out of range");
    const std::size_t c = A.cols();
    n.value.shape = {end - begin, c};
    n.value.data.assign(A.data.begin() + begin * c, A.data.begin() + end * c);
  } else if (A.rank() == 2 && axis == 1) {
    if (end > A.cols()) shape_fail(OpKind::kSlice, A, "column slice out of range");
    const std::size_t r = A.rows(), c = A.cols(), w = end - begin;
    n.value.shape = {r, w};
    n.value.data.resize(r * w);
    for (std::size_t i = 0; i < r; ++i)
      std::copy(A.data.begin() + i * c + begin, A.data.begin() + i * c + end,
                n.value.data.begin() + i * w);
  } else {
    shape_fail(OpKind::kSlice, A, "axis must be 0 or 1");
  }
  return finish(n);
}

NodeId Graph::sum(NodeId a) {
  const Tensor& A = val(a);
  Node& n = fresh(OpKind::kSum);
  n.a = a;
  n.needs_grad = at(a).needs_grad;
  double acc = 0.0;
  for (double v : A.data) acc += v;
  n.value.shape = {};
  n.value.data.assign(1, acc);
  return finish(n);
}

NodeId Graph::mean(NodeId a) {
  const Tensor& A = val(a);
  if (A.size() == 0) shape_fail(OpKind::kMean, A, "mean of empty tensor");
  Node& n = fresh(OpKind::kMean);
  n.a = a;
  n.needs_grad = at(a).needs_grad;
  double acc = 0.0;
  for (double v : A.data) acc += v;
  n.value.shape = {};
  n.value.data.assign(1, acc / static_cast<double>(A.size()));
  return finish(n);
}

NodeId Graph::bias_add(NodeId x, NodeId b) {
  const Tensor& X = val(x);
  const Tensor& B = val(b);
  if (X.rank() != 2 || B.rank() != 1 || B.size() != X.cols()) shape_fail(OpKind::kBiasAdd, X, B);
  Node& n = fresh(OpKind::kBiasAdd);
  n.a = x;
  n.b = b;
  n.needs_grad = at(x).needs_grad || at(b).needs_grad;
  const std::size_t r = X.rows(), c = X.cols();
  n.value.shape = {r, c};
  n.value.data.resize(r * c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) n.value.data[i * c + j] = X.data[i * c + j] + B.data[j];
  return finish(n);
}

NodeId Graph::group_mean(NodeId x, std::size_t block) {
  const Tensor& X = val(x);
  if (X.rank() != 2 || block == 0 || X.rows() % block != 0)
    shape_fail(OpKind::kGroupMean, X, "rows must be a multiple of block " + std::to_string(block));
  Node& n = fresh(OpKind::kGroupMean);
  n.a = x;
  n.needs_grad = at(x).needs_grad;
  n.aux.group = block;
  const std::size_t groups = X.rows() / block, c = X.cols();
  n.value.shape = {groups, c};
  n.value.data.assign(groups * c, 0.0);
  const double inv = 1.0 / static_cast<double>(block);
  for (std::size_t g = 0; g < groups; ++g) {
    double* out = n.value.data.data() + g * c;
    for (std::size_t t = 0; t < block; ++t) {
      const double* in = X.data.data() + (g * block + t) * c;
      for (std::size_t j = 0; j < c; ++j) out[j] += in[j];
    }
    for (std::size_t j = 0; j < c; ++j) out[j] *= inv;
  }
  return finish(n);
}

NodeId Graph::gather_rows(NodeId x, std::vector<std::uint32_t> rows) {
  const Tensor& X = val(x);
  if (X.rank() != 2) shape_fail(OpKind::kGatherRows, X, "rank-2 required");
  const std::size_t r = X.rows(), c = X.cols();
  for (std::uint32_t idx : rows)
    if (idx >= r)
      throw ShapeError("gather_rows: index " + std::to_string(idx) + " out of range for " +
                       shape_str(X.shape));
  Node& n = fresh(OpKind::kGatherRows);
  n.a = x;
  n.needs_grad = at(x).needs_grad;
  n.aux.rows = std::move(rows);
  const std::size_t m = n.aux.rows.size();
  n.value.shape = {m, c};
  n.value.data.resize(m * c);
  for (std::size_t i = 0; i < m; ++i)
    std::copy(X.data.begin() + n.aux.rows[i] * c, X.data.begin() + (n.aux.rows[i] + 1) * c,
              n.value.data.begin() + i * c);
  return finish(n);
}

NodeId Graph::scale(NodeId a, double c) {
  const Tensor& A = val(a);
  Node& n = fresh(OpKind::kScale);
  n.a = a;
  n.needs_grad = at(a).needs_grad;
  n.aux.constant = c;
  n.value.shape = A.shape;
  n.value.data.resize(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) n.value.data[i] = A.data[i] * c;
  return finish(n);
}

NodeId Graph::apply(OpKind kind, std::span<const NodeId> in, OpAux aux) {
  switch (kind) {
    case OpKind::kMatmul: return matmul(in[0], in[1]);
    case OpKind::kAdd: return add(in[0], in[1]);
    case OpKind::kSub: return sub(in[0], in[1]);
    case OpKind::kMul: return mul(in[0], in[1]);
    case OpKind::kTanh: return tanh(in[0]);
    case OpKind::kSigmoid: return sigmoid(in[0]);
    case OpKind::kConcat: return concat(in, aux.axis);
    case OpKind::kSlice: return slice(in[0], aux.axis, aux.begin, aux.end);
    case OpKind::kSum: return sum(in[0]);
    case OpKind::kMean: return mean(in[0]);
    case OpKind::kSquare: return square(in[0]);
    case OpKind::kAbs: return abs(in[0]);
    case OpKind::kBiasAdd: return bias_add(in[0], in[1]);
    case OpKind::kGroupMean: return group_mean(in[0], aux.group);
    case OpKind::kGatherRows: return gather_rows(in[0], aux.rows);
    case OpKind::kScale: return scale(in[0], aux.constant);
    case OpKind::kLeaf: break;
  }
  throw std::logic_error("Graph::apply: unsupported op");
}

void Graph::backward(NodeId loss) {
  check_id(loss);
  const Tensor& L = val(loss);
  if (!L.is_scalar())
    throw ShapeError("backward: loss must be scalar, got shape " + shape_str(L.shape));

  for (std::size_t i = 0; i < used_; ++i) {
    Node& n = pool_[i];
    if (n.needs_grad)
      n.grad.assign((n.bound ? n.bound->data.size() : n.value.data.size()), 0.0);
  }
  Node& ln = at(loss);
  if (!ln.needs_grad) return;  // loss independent of every trainable leaf
  ln.grad[0] = 1.0;

  for (std::size_t ii = used_; ii-- > 0;) {
    Node& n = pool_[ii];
    if (!n.needs_grad || n.op == OpKind::kLeaf) continue;
    const std::vector<double>& g = n.grad;
    switch (n.op) {
      case OpKind::kMatmul: {
        const Tensor& A = val(n.a);
        const Tensor& B = val(n.b);
        const std::size_t m = A.rows(), k = A.cols(), p = B.cols();
        MapC G(g.data(), m, p);
        if (at(n.a).needs_grad)
          Map(at(n.a).grad.data(), m, k).noalias() += G * MapC(B.data.data(), k, p).transpose();
        if (at(n.b).needs_grad)
          Map(at(n.b).grad.data(), k, p).noalias() += MapC(A.data.data(), m, k).transpose() * G;
        break;
      }
      case OpKind::kAdd:
      case OpKind::kSub: {
        const double sb = (n.op == OpKind::kSub) ? -1.0 : 1.0;
        const Tensor& A = val(n.a);
        const Tensor& B = val(n.b);
        if (same_shape(A, B)) {
          if (at(n.a).needs_grad) {
            auto& ga = at(n.a).grad;
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
          }
          if (at(n.b).needs_grad) {
            auto& gb = at(n.b).grad;
            for (std::size_t i = 0; i < g.size(); ++i) gb[i] += sb * g[i];
          }
        } else if (A.is_scalar()) {
          if (at(n.a).needs_grad) {
            double acc = 0.0;
            for (double v : g) acc += v;
            at(n.a).grad[0] += acc;
          }
          if (at(n.b).needs_grad) {
            auto& gb = at(n.b).grad;
            for (std::size_t i = 0; i < g.size(); ++i) gb[i] += sb * g[i];
          }
        } else {  // B scalar
          if (at(n.a).needs_grad) {
            auto& ga = at(n.a).grad;
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
          }
          if (at(n.b).needs_grad) {
            double acc = 0.0;
            for (double v : g) acc += v;
            at(n.b).grad[0] += sb * acc;
          }
        }
        break;
      }
      case OpKind::kMul: {
        const Tensor& A = val(n.a);
        const Tensor& B = val(n.b);
        if (same_shape(A, B)) {
          if (at(n.a).needs_grad) {
            auto& ga = at(n.a).grad;
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * B.data[i];
          }
          if (at(n.b).needs_grad) {
            auto& gb = at(n.b).grad;
            for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * A.data[i];
          }
        } else if (A.is_scalar()) {
          if (at(n.a).needs_grad) {
            double acc = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * B.data[i];
            at(n.a).grad[0] += acc;
          }
          if (at(n.b).needs_grad) {
            auto& gb = at(n.b).grad;
            const double s = A.data[0];
            for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * s;
          }
        } else {
          if (at(n.b).needs_grad) {
            double acc = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * A.data[i];
            at(n.b).grad[0] += acc;
          }
          if (at(n.a).needs_grad) {
            auto& ga = at(n.a).grad;
            const double s = B.data[0];
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * s;
          }
        }
        break;
      }
      case OpKind::kTanh: {
        if (!at(n.a).needs_grad) break;
        auto& ga = at(n.a).grad;
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double y = n.value.data[i];
          ga[i] += g[i] * (1.0 - y * y);
        }
        break;
      }
      case OpKind::kSigmoid: {
        if (!at(n.a).needs_grad) break;
        auto& ga = at(n.a).grad;
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double y = n.value.data[i];
          ga[i] += g[i] * y * (1.0 - y);
        }
        break;
      }
      case OpKind::kSquare: {
        if (!at(n.a).needs_grad) break;
        auto& ga = at(n.a).grad;
        const Tensor& A = val(n.a);
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * 2.0 * A.data[i];
        break;
      }
      case OpKind::kAbs: {
        if (!at(n.a).needs_grad) break;
        auto& ga = at(n.a).grad;
        const Tensor& A = val(n.a);
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double x = A.data[i];
          ga[i] += g[i] * (x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0));
        }
        break;
      }
      case OpKind::kConcat: {
        auto feed = [&](NodeId p, std::size_t& off_rows, std::size_t& off_cols) {
          Node& pn = at(p);
          const Tensor& t = val(p);
          if (n.aux.axis == 0 || t.rank() == 1) {
            if (pn.needs_grad) {
              auto& gp = pn.grad;
              const double* src = g.data() + off_rows;
              for (std::size_t i = 0; i < t.size(); ++i) gp[i] += src[i];
            }
            off_rows += t.size();
          } else {
            const std::size_t rows = n.value.rows(), cols = n.value.cols(), tc = t.cols();
            if (pn.needs_grad) {
              auto& gp = pn.grad;
              for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t j = 0; j < tc; ++j)
                  gp[r * tc + j] += g[r * cols + off_cols + j];
            }
            off_cols += tc;
          }
        };
        std::size_t off_rows = 0, off_cols = 0;
        feed(n.a, off_rows, off_cols);
        for (NodeId p : n.extra) feed(p, off_rows, off_cols);
        break;
      }
      case OpKind::kSlice: {
        if (!at(n.a).needs_grad) break;
        auto& ga = at(n.a).grad;
        const Tensor& A = val(n.a);
        if (A.rank() == 1 || n.aux.axis == 0) {
          const std::size_t c = A.rank() == 1 ? 1 : A.cols();
          const double* src = g.data();
          double* dst = ga.data() + n.aux.begin * c;
          for (std::size_t i = 0; i < g.size(); ++i) dst[i] += src[i];
        } else {
          const std::size_t r = A.rows(), c = A.cols(), w = n.aux.end - n.aux.begin;
          for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < w; ++j) ga[i * c + n.aux.begin + j] += g[i * w + j];
        }
        break;
      }
      case OpKind::kSum: {
        if (!at(n.a).needs_grad) break;
        auto& ga = at(n.a).grad;
        const double s = g[0];
        for (auto& v : ga) v += s;
        break;
      }
      case OpKind::kMean: {
        if (!at(n.a).needs_grad) break;
        auto& ga = at(n.a).grad;
        const double s = g[0] / static_cast<double>(ga.size());
        for (auto& v : ga) v += s;
        break;
      }
      case OpKind::kBiasAdd: {
        const std::size_t r = n.value.rows(), c = n.value.cols();
        if (at(n.a).needs_grad) {
          auto& gx = at(n.a).grad;
          for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
        }
        if (at(n.b).needs_grad) {
          auto& gb = at(n.b).grad;
          for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) gb[j] += g[i * c + j];
        }
        break;
      }
      case OpKind::kGroupMean: {
        if (!at(n.a).needs_grad) break;
        auto& gx = at(n.a).grad;
        const std::size_t block = n.aux.group, groups = n.value.rows(), c = n.value.cols();
        const double inv = 1.0 / static_cast<double>(block);
        for (std::size_t gi = 0; gi < groups; ++gi) {
          const double* src = g.data() + gi * c;
          for (std::size_t t = 0; t < block; ++t) {
            double* dst = gx.data() + (gi * block + t) * c;
            for (std::size_t j = 0; j < c; ++j) dst[j] += src[j] * inv;
          }
        }
        break;
      }
      case OpKind::kGatherRows: {
        if (!at(n.a).needs_grad) break;
        auto& gx = at(n.a).grad;
        const std::size_t c = n.value.cols();
        for (std::size_t i = 0; i < n.aux.rows.size(); ++i) {
          double* dst = gx.data() + n.aux.rows[i] * c;
          const double* src = g.data() + i * c;
          for (std::size_t j = 0; j < c; ++j) dst[j] += src[j];
        }
        break;
      }
      case OpKind::kScale: {
        if (!at(n.a).needs_grad) break;
        auto& ga = at(n.a).grad;
        const double s = n.aux.constant;
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * s;
        break;
      }
      case OpKind::kLeaf:
        break;
    }
  }

  // flush leaf gradients into the bound tensors
  for (std::size_t i = 0; i < used_; ++i) {
    Node& n = pool_[i];
    if (n.op == OpKind::kLeaf && n.bound && n.bound->requires_grad && !n.grad.empty()) {
      n.bound->ensure_grad();
      for (std::size_t j = 0; j < n.grad.size(); ++j) n.bound->grad[j] += n.grad[j];
    }
  }
}

namespace {

// Shared sweep: hands (tensor index, entry index, ad, fd) to the reducer.
void fd_sweep(const std::function<NodeId(Graph&)>& build, std::span<Tensor* const> params,
              double step,
              const std::function<void(std::size_t, std::size_t, double, double)>& consume) {
  if (step <= 0.0) throw std::invalid_argument("grad_check: step must be > 0");
  for (Tensor* p : params) p->zero_grad();
  Graph g;
  NodeId loss = build(g);
  g.backward(loss);

  std::vector<std::vector<double>> autodiff;
  autodiff.reserve(params.size());
  for (Tensor* p : params) autodiff.push_back(p->grad);

  Graph probe;
  auto eval = [&]() {
    probe.clear();
    return probe.value(build(probe)).item();
  };

  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Tensor& p = *params[pi];
    for (std::size_t i = 0; i < p.data.size(); ++i) {
      const double keep = p.data[i];
      p.data[i] = keep + step;
      const double up = eval();
      p.data[i] = keep - step;
      const double down = eval();
      p.data[i] = keep;
      consume(pi, i, autodiff[pi][i], (up - down) / (2.0 * step));
    }
  }
}

}  // namespace

double grad_check(const std::function<NodeId(Graph&)>& build, std::span<Tensor* const> params,
                  double step) {
  double worst = 0.0;
  fd_sweep(build, params, step, [&worst](std::size_t, std::size_t, double ad, double fd) {
    worst = std::max(worst, std::fabs(ad - fd) / std::max(1e-12, std::fabs(fd)));
  });
  return worst;
}

double grad_check_norms(const std::function<NodeId(Graph&)>& build,
                        std::span<Tensor* const> params, double step) {
  std::vector<double> diff_sq(params.size(), 0.0), fd_sq(params.size(), 0.0);
  fd_sweep(build, params, step, [&](std::size_t pi, std::size_t, double ad, double fd) {
    diff_sq[pi] += (ad - fd) * (ad - fd);
    fd_sq[pi] += fd * fd;
  });
  double worst = 0.0;
  for (std::size_t pi = 0; pi < params.size(); ++pi)
    worst = std::max(worst, std::sqrt(diff_sq[pi]) / std::max(1e-12, std::sqrt(fd_sq[pi])));
  return worst;
}

}  // namespace janossy
