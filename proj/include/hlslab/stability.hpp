#pragma once

#include <memory>
#include <optional>
#include <string>

#include "hlslab/constants.hpp"
#include "hlslab/kernel.hpp"
#include "hlslab/radial.hpp"
#include "hlslab/riesz.hpp"

namespace hlslab {

struct StabilityReport {
  int n = 0;
  double s = 0.0;
  std::string case_id;
  double deficit = 0.0;
  double dist_sq = 0.0;
  double ratio = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool pass = false;
  double bstar = 0.0;
  double cstar = 0.0;
  int grid_N = 0;
  double tol = 1e-6;
  bool near_manifold = false;  // dist below quadrature resolution: ratio not formed
  bool converged = true;
};

std::string report_to_json(const StabilityReport& r);

struct FitResult {
  double dist_sq = 0.0;
  double b = 1.0;
  double c = 1.0;
  bool converged = true;
};

// Shared per-(n, s, N) grid and kernel-table registry.
std::shared_ptr<const RadialGrid> lab_grid(int n, int N = 2048);
const KernelTable& lab_kernel(const Params& P, int N = 2048);

// ---- HLS side (Theorem 1) ----

// ||g||_p^2 - S^{-1} ||(-Delta)^{-s/2} g||_2^2,  p = 2n/(n+2s).
double hls_deficit(const RadialFn& g, const KernelTable& K);

// min over (b, c) of ||g - c H_b||_p^2, centers at the origin; log-scan in b
// plus golden-section refinement, inner 1-D Brent in c.  Upper bound for the
// true manifold distance.
FitResult hls_manifold_distance(const Params& P, const RadialFn& g);

StabilityReport hls_stability(const RadialFn& g, const KernelTable& K,
                              const std::string& case_id = "");

// ---- Sobolev side (Theorem 2) ----

// S * <F,F>_{Hs} - ||F||^2_{2*_s}.
double sobolev_deficit(const BubbleCombo& F, const std::shared_ptr<const RadialGrid>& grid);

// <F,F> - max_b <F,U_b>^2/<U_b,U_b> in the Hs inner product (optimal c in
// closed form per b).
FitResult sobolev_manifold_distance(const BubbleCombo& F,
                                    const std::shared_ptr<const RadialGrid>& grid);

StabilityReport sobolev_stability(const BubbleCombo& F,
                                  const std::shared_ptr<const RadialGrid>& grid,
                                  const std::string& case_id = "");

// ---- Lemma-level checks ----

// Orthogonalizes raw against U_b and the finite-difference dilation tangent in
// Hs, then returns  ||r||^2 - (2*_s - 1) S^{-1} ||U||^{2-2*} int U^{2*-2} r^2
// - 4s/(n+2s+2) ||r||^2  (all Hs/L2 as displayed).  Empty when the residual
// vector degenerates to zero.
std::optional<double> spectral_gap_check(double b, const BubbleCombo& raw,
                                         const std::shared_ptr<const RadialGrid>& grid);

// (1+x)^q vs its truncated binomial expansion (+|x|^q when q non-integer).
bool taylor_pointwise_check(double x, double q);

// Lemma-level upper bound for ||u + r||^2_{2*_s}; u >= 0 and u + r >= 0.
bool norm_expansion_check(const Params& P, const RadialFn& u, const RadialFn& r);

struct LocalBounds {
  double nu_lower;         // m(delta)
  double nu_lower_scaled;  // S_{n,s} m(delta), the functional-ratio normalization
  double mu_lower;         // 1/2 ((n-2s)/(n+2s)) min{m(2 delta)(n-2s)/(n+2s), 1}
  double global_lower;     // delta * mu_lower
};
LocalBounds local_bounds(const Params& P, double delta);

// D(g) >= D(g+) + D(g-) + ||g||^2 - ||g+||^2 - ||g-||^2, plus the h(m)
// estimate when the smaller part carries mass fraction <= 1/2.
bool split_superadditivity_check(const RadialFn& g, const KernelTable& K);

// h(m) = 1 - m^q - (1-m)^q >= (2^q - 2) m^q on [0, 1/2], q = (n+2s)/n.
bool h_m_bound_check(int n, double s, double m);

// Relative residual of the Legendre deficit identity
//   F(f) - E(f) = E*(g) - F*(g) + S ||(-Delta)^{s/2}(f - f_1)||^2
// with g the dual point of F and f_1 = S^{-1}(-Delta)^{-s} g; every term is
// evaluated by an independent quadrature route.
double legendre_deficit_identity(const BubbleCombo& F, const KernelTable& K);

// Relative residual of the Holder-equality case E(f) + E*(g) = 2 int f g.
double legendre_holder_residual(const BubbleCombo& F,
                                const std::shared_ptr<const RadialGrid>& grid);

// Sphere HLS stability report (Corollary 1); distance measured after
// stereographic transfer to R^n on the kernel table's grid.
StabilityReport corollary_sphere_check(const ZonalSphereFn& g, const KernelTable& K);

}  // namespace hlslab
