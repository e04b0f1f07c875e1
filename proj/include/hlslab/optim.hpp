#pragma once

#include <functional>

namespace hlslab {

struct MinResult {
  double x = 0.0;
  double fx = 0.0;
  int evals = 0;
  bool converged = false;
};

// Golden-section minimization of f on [a, b].
MinResult golden_min(const std::function<double(double)>& f, double a, double b,
                     double xtol = 1e-10, int max_iter = 200);

// Brent's parabolic-interpolation minimizer on [a, b].
MinResult brent_min(const std::function<double(double)>& f, double a, double b,
                    double xtol = 1e-10, int max_iter = 200);

}  // namespace hlslab
