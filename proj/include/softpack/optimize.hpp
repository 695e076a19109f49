#pragma once

// Derivative-free minimization in several variables (GSL simplex method).

#include <functional>
#include <span>
#include <vector>

namespace softpack::numeric {

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder–Mead from x0 with initial simplex edge lengths `step`. Stops when
/// the simplex size falls below size_tol or after max_iter iterations.
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                          std::vector<double> step, double size_tol, int max_iter);

}  // namespace softpack::numeric
