#pragma once

#include <vector>

namespace hlslab {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Nodes/weights by Newton iteration on the Legendre recurrence.
GaussRule gauss_legendre(int order);

// Cached rule (rules are reused heavily with a handful of orders).
const GaussRule& gauss_legendre_cached(int order);

// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
template <class F>
double gauss_integrate(const F& f, double a, double b, int order) {
  const GaussRule& g = gauss_legendre_cached(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) acc += g.w[i] * f(mid + half * g.x[i]);
  return half * acc;
}

// Composite Gauss-Legendre: panels equal subdivisions of [a, b].
template <class F>
double gauss_integrate_panels(const F& f, double a, double b, int panels, int order) {
  double acc = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) acc += gauss_integrate(f, a + p * h, a + (p + 1) * h, order);
  return acc;
}

}  // namespace hlslab
