#pragma once

#include "hlslab/kernel.hpp"
#include "hlslab/radial.hpp"

namespace hlslab {

// HLS bilinear form  iint g1(x) |x-y|^{-lambda} g2(y) dx dy  for radial g1, g2
// on the kernel table's grid.  Symmetrized over the two (primal, staggered)
// pairings so the result is exactly symmetric in its arguments.
// Row-parallel; per-row sums and the row reduction are fixed-order, so the
// value is independent of the thread count.
double hls_form(const RadialFn& g1, const RadialFn& g2, const KernelTable& K);
// Serial reference implementation (identical arithmetic order).
double hls_form_serial(const RadialFn& g1, const RadialFn& g2, const KernelTable& K);

// ||(-Delta)^{-s/2} g||_2^2 = riesz_const * hls_form(g, g).
double neg_frac_norm_sq(const RadialFn& g, const KernelTable& K);

// (-Delta)^{-s} g.  Primal outputs integrate staggered samples and vice
// versa, so the singular diagonal is never touched.
RadialFn riesz_potential(const RadialFn& g, const KernelTable& K);

// Homogeneous H^s inner product of two Sobolev-flavor bubble combinations,
// term-pairwise via <U_a, U_b> = c * int U_a U_b^{2*_s - 1} with
// c = Gamma((n+2s)/2)/Gamma((n-2s)/2) (b-independent); the two pairing routes
// are averaged.  Throws std::invalid_argument on HLS flavor or mismatched
// Params.
double hs_inner(const BubbleCombo& F, const BubbleCombo& G,
                const std::shared_ptr<const RadialGrid>& grid);

// The Gamma-ratio constant c above.
double bubble_el_constant(const Params& P);

// Sphere HLS double integral  iint_{S^n x S^n} g |xi - eta|^{-lambda} g.
// Double latitude quadrature; the second latitude family is a GL rule of
// order M+1, which strictly interlaces the M-rule and avoids the diagonal.
double sphere_hls_form(const ZonalSphereFn& g);

}  // namespace hlslab
