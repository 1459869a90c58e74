#pragma once

// Composite Simpson on uniform grids, refined by halving with Richardson
// extrapolation. Each refinement only evaluates the new midpoints, and the
// integrand is requested as a whole uniform grid so callers can use the
// incremental Dirichlet kernels.

#include <cstddef>
#include <functional>
#include <vector>

namespace zr {

// Values at t0, t0 + h, ..., t0 + (count-1) h.
using GridFunction = std::function<std::vector<double>(double t0, double h, std::size_t count)>;

struct QuadratureOptions {
  double max_step = 0.1;   // initial panel width upper bound
  double rtol = 1e-8;
  double atol = 0;
  std::size_t max_evaluations = std::size_t{1} << 26;
  int min_levels = 2;
};

struct QuadratureResult {
  double value = 0;
  double error_estimate = 0;
  std::size_t evaluations = 0;
  double step = 0;          // final panel width
  int levels = 0;
  bool converged = false;
};

QuadratureResult simpson_adaptive(const GridFunction& f, double a, double b, const QuadratureOptions& options);

// Convenience wrapper for pointwise integrands.
QuadratureResult simpson_adaptive(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureOptions& options);

}  // namespace zr
