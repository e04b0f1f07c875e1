#pragma once

namespace hlslab {

// log Gamma(x), x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

// Surface area of the unit sphere S^d in R^{d+1}: 2 pi^{(d+1)/2} / Gamma((d+1)/2).
double sphere_area(int d);

// Generalized binomial coefficient q(q-1)...(q-k+1)/k!, k >= 1.
double gen_binom(double q, int k);

}  // namespace hlslab
