#pragma once

#include "hlslab/params.hpp"

namespace hlslab {

// Closed-form constants and explicit stability lower bounds.

struct BoundSet {
  double S_ns;          // sharp fractional Sobolev constant
  double K_ns;          // sup over delta of the local-to-global chain
  double hls_bound;     // 1/2 * min{K, min{2^{(n+2s)/n} - 2, 1}}
  double sob_bound;     // S * min{K, min{2^{(n+2s)/n} - 2, 1}} / 4
  double koenig_upper;  // S * 4s/(n+2+2s), strict upper bound for the Sobolev infimum
};

struct TraceConstants {
  double C_ns;          // flat restrictive Sobolev constant
  double D_ns;          // sphere restrictive Sobolev constant
  double flat_bound;    // C * min{K_{n-1,s-1/2}, min{2^{(n-2+2s)/(n-1)} - 2, 1}} / 4
  double sphere_bound;  // same with D
};

// Sharp fractional Sobolev constant S_{n,s}; both closed forms must agree
// to 1e-12 relative (checked internally, throws std::logic_error otherwise).
double sobolev_sharp_constant(const Params& P);

// The two equivalent closed forms, for cross-checking.
double sobolev_sharp_constant_form1(const Params& P);  // (4 pi)^s form
double sobolev_sharp_constant_form2(const Params& P);  // |S^n|^{2s/n} form

// Lieb's sharp diagonal HLS constant for kernel |x-y|^{-lambda}.
double lieb_sharp_diagonal(int n, double lambda);

// Lieb-Loss layer-cake upper bound for the HLS constant with exponents (p, q').
// Requires 1/q' + 1/p - (n - lambda)/n = 1.
double liebloss_upper_bound(int n, double lambda, double p, double qprime);

// l(delta) = sqrt(delta / (1 - delta)) on (0, 1).
double l_of_delta(double delta);

// Local Sobolev stability modulus m(delta); integer and non-integer 2*_s branches.
double m_of_delta(const Params& P, double delta);

// K_{n,s}: sup over delta in (0, 1/2) of (delta/2)((n-2s)/(n+2s)) min{m(2 delta)(n-2s)/(n+2s), 1}.
// Dense grid scan plus golden-section refinement.
double K_constant(const Params& P);

// All theorem-level bounds for (n, s).
BoundSet stability_bounds(const Params& P);

// Sphere HLS constant B_{n,s}.
double sphere_hls_constant(const Params& P);

// Beckner's restrictive Sobolev constants and the theorem bounds.
// Requires s > 1/2; bounds require n >= 3 (they live in dimension n-1).
TraceConstants trace_constants(const Params& P);

// Riesz normalization: (-Delta)^{-s} has kernel riesz_const * |x-y|^{2s-n}.
double riesz_const(const Params& P);

}  // namespace hlslab
