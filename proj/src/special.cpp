#include "hlslab/special.hpp"

#include <cmath>
#include <stdexcept>

namespace hlslab {

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  return std::lgamma(x);
}

double sphere_area(int d) {
  if (d < 0) throw std::domain_error("sphere_area: dimension must be non-negative");
  const double h = 0.5 * (d + 1);
  return std::exp(std::log(2.0) + h * std::log(M_PI) - log_gamma(h));
}

double gen_binom(double q, int k) {
  if (k <= 0) throw std::domain_error("gen_binom: k must be >= 1");
  double acc = 1.0;
  for (int j = 0; j < k; ++j) acc *= (q - j) / (j + 1);
  return acc;
}

}  // namespace hlslab
