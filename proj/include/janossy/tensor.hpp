#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace janossy {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& s);
std::string shape_str(const Shape& s);

// Dense 64-bit real array, row-major, with an optional gradient buffer.
// Rank 0 (shape {}) and rank 1/2 are the only shapes the engine produces.
struct Tensor {
  Shape shape;
  std::vector<double> data;
  bool requires_grad = false;
  std::vector<double> grad;  // empty == absent; otherwise same length as data

  Tensor() = default;
  Tensor(Shape s, std::vector<double> d);

  static Tensor zeros(Shape s);
  static Tensor full(Shape s, double v);
  static Tensor scalar(double v);
  static Tensor row(std::vector<double> v);                       // shape {n}
  static Tensor matrix(std::size_t r, std::size_t c, std::vector<double> v);

  std::size_t size() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }
  std::size_t rows() const;
  std::size_t cols() const;
  bool is_scalar() const { return data.size() == 1; }
  double item() const;

  void ensure_grad();  // allocate zeroed grad if absent
  void zero_grad();    // allocate if absent, zero otherwise
  bool all_finite() const;
};

bool same_shape(const Tensor& a, const Tensor& b);

}  // namespace janossy
