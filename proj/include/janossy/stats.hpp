#pragma once

#include <cstdint>
#include <vector>

namespace janossy {

double mean_of(const std::vector<double>& v);
// Sample standard deviation (n-1 divisor); returns 0 for fewer than 2 values.
double sample_std(const std::vector<double>& v);

// Upper regularized incomplete gamma Q(a, x).
double gamma_q(double a, double x);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

// Goodness-of-fit against the uniform distribution over counts.size() cells.
ChiSquareResult chi_square_uniform(const std::vector<std::uint64_t>& counts);

}  // namespace janossy
