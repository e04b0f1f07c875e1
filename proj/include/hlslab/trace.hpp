#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hlslab/params.hpp"
#include "hlslab/radial.hpp"
#include "hlslab/stability.hpp"

namespace hlslab {

// Extension operators behind the restrictive (trace) Sobolev constants.
// Boundary data lives on R^{n-1} as a RadialFn with Params(n-1, s-1/2);
// everything here requires s > 1/2.

// Riesz order-s normalization of the extension kernel:
//   c = Gamma((n-s)/2) / (2^s pi^{n/2} Gamma(s/2)).
double trace_const(const Params& P);

// Half-space extension sampled on (boundary radius r'_i) x (normal t_k > 0);
// axial symmetry in t, so only positive magnitudes are stored.
struct HalfGrid2D {
  Params P;
  std::shared_ptr<const RadialGrid> bgrid;  // boundary grid, dimension n-1
  std::vector<double> tmag, wt;             // positive t nodes / dt weights
  std::vector<double> v;                    // v[k * bgrid->N + i]

  // int_{R^n} |v|^2 = |S^{n-2}| sum_i w_i sum_k 2 wt_k v_{ki}^2.
  double l2_sq() const;
};

std::string halfgrid_to_csv(const HalfGrid2D& e);

// Cached per-(n, s) tensor of azimuthal kernel means
//   k[t_k][i][j] = mean over S^{n-2} of (r_i^2 + rho_j^2 + t_k^2
//                   - 2 r_i rho_j cos phi)^{-(n-s)/2}
// with rho the staggered boundary nodes (diagonal never hit, even at small t).
struct TraceKernel {
  Params P;
  std::shared_ptr<const RadialGrid> bgrid;
  std::vector<double> tmag, wt;
  std::vector<double> k;  // k[(kk * N + i) * N + j]

  static const TraceKernel& get(const Params& P);  // registry; N = 256, 64 t-levels
};

// T*(g)(x', t) = c int g(y') (|x'-y'|^2 + t^2)^{-(n-s)/2} dy'.
// g must be sampled on TraceKernel::get(P).bgrid.
HalfGrid2D extension_flat(const Params& P, const RadialFn& g);

// A/B ratio with A = int_{R^n} |T*(g)|^2 and B the boundary HLS form of order
// s - 1/2 (lambda' = n - 2s) applied to (g, g).
double trace_ab_ratio(const Params& P, const RadialFn& g);

// Max relative deviation of A/B across a seeded 10-member boundary corpus,
// with the constant kappa frozen from the first member.
double trace_equivalence_check(const Params& P);

// For the boundary extremal g_b = (2b/(b^2+r'^2))^{(n-2+2s)/2}:
//   int_{R^n} |T*(g_b)|^2 / ||g_b||^2_{2(n-1)/(n-2+2s)}  ( = C_{n,s} ).
double extremal_trace_equality(const Params& P, double b);

// Boundary-level stability report: the Theorem 1 chain in dimension n-1 at
// order s - 1/2, whose bound (1/2) min{K_{n-1,s-1/2}, min{2^{(n-2+2s)/(n-1)}-2, 1}}
// is the one entering the flat restrictive stability statement.
StabilityReport trace_stability_flat(const Params& P, const RadialFn& g,
                                     const std::string& case_id = "");

// Sphere extension T~*(g)(x) = c int_{S^{n-1}} g(xi) |x - xi|^{-(n-s)} dsigma
// for zonal g, sampled on a (radius R, polar angle alpha) grid.  The radial
// nodes are staggered so R = 1 is never hit.
struct SphereExtension {
  Params P;
  std::vector<double> R, wR;        // log-spaced radii / dR weights
  std::vector<double> cosal, wal;   // GL polar nodes / S^{n-1}-measure weights
  std::vector<double> v;            // v[j * A + a]

  double l2_sq() const;  // int_{R^n} |v|^2 (crude near R = 1; see ratio ops)
};

// g is zonal on S^{n-1}: a ZonalSphereFn built with Params(n-1, s-1/2).
SphereExtension extension_sphere(const Params& P, const ZonalSphereFn& g);

// int_{R^n} |T~*(g)|^2 / ||g||^2_{2(n-1)/(n-2+2s)} with the radial integral
// resolved across the R = 1 singularity by exponential substitutions.
double sphere_trace_ratio(const Params& P, const ZonalSphereFn& g);

// sphere_trace_ratio for g == 1 via the closed radial profile ( = D_{n,s} ).
double extremal_trace_sphere_equality(const Params& P);

}  // namespace hlslab
