#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "hlslab/params.hpp"
#include "hlslab/radial.hpp"

namespace hlslab {

// Mean of (A - B cos(phi))^{-e/2} over S^{d-1}, i.e. with weight sin^{d-2}(phi)
// and normalization |S^{d-2}|/|S^{d-1}| (for d = 2 the weight is 1 and the
// normalization 1/pi; for d = 1 the sphere is two points).
// Composite Gauss-Legendre with geometric panel refinement toward phi = 0
// when the integrand peaks there (B close to A).
double angular_mean(int d, double A, double B, double e);

// Same mean parametrized by the gap A - B > 0 supplied directly by the
// caller; use when A - B would cancel catastrophically (e.g. near-diagonal
// geometry where the gap is known in closed form).
double angular_mean_gap(int d, double gap, double B, double e);

// Spherical mean of |r e - rho omega|^{-lambda} over omega in S^{n-1}.
// Throws std::domain_error when both arguments vanish, and a singularity
// error (std::domain_error) on the diagonal r = rho when s <= 1/2.
double angular_kernel(const Params& P, double r, double rho);

// Tabulated angular kernel between the primal nodes r_i and the staggered
// nodes rho_j of one grid.  Both node families are log-uniform, so
// k(r_i, rho_j) = r_i^{-lambda} * g(tau), tau = log rho_j - log r_i
// = (j - i + 1/2) dt: a single profile of 2N-1 values covers the dense
// kernel, which entry() reconstitutes on the fly.
// The stored values are not point samples: each is the triangle-weighted
// cell average of g around tau, i.e. the exact per-cell weight of the
// trapezoid double sum.  This integrates the |tau|^{2s-1} diagonal cusp
// instead of sampling across it, which the plain staggered sum gets wrong
// at first order in dt.
struct KernelTable {
  Params P;
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> profile;  // averaged g(tau_m), index m + N - 1, m = j - i

  double entry(int i, int j) const {
    return std::pow(grid->r[i], -P.lambda()) * profile[j - i + grid->N - 1];
  }

  // Parallel build (profile entries independent); honors the HLSLAB_CACHE
  // directory for binary caching keyed by (n, s, grid hash).
  static KernelTable build(const Params& P, std::shared_ptr<const RadialGrid> grid);
  // Serial reference build, no caching.
  static KernelTable build_serial(const Params& P, std::shared_ptr<const RadialGrid> grid);
};

}  // namespace hlslab
