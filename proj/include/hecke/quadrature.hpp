#pragma once

#include <functional>

#include "hecke/types.hpp"

namespace hecke {

struct QuadratureResult {
  Complex value;
  double error_estimate = 0.0;
  int intervals = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int initial_panels = 1;
  int max_intervals = 200000;
};

/// Adaptive Gauss-Kronrod (7/15) integration of a complex integrand on [lo, hi].
/// Throws ConvergenceError when the interval budget is exhausted before the
/// tolerance is met.
QuadratureResult integrate_adaptive(const std::function<Complex(double)>& f, double lo, double hi,
                                    const QuadratureOptions& opts = {});

}  // namespace hecke
