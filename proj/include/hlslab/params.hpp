#pragma once

#include <stdexcept>
#include <string>

namespace hlslab {

// Problem dimensions (n, s) with the exponents derived from them.
// Valid range: integer n >= 2 and 0 < s < n/2.
struct Params {
  int n;
  double s;

  Params(int n_, double s_) : n(n_), s(s_) {
    if (n < 2) throw std::domain_error("Params: dimension n must be >= 2");
    if (!(s > 0.0 && s < 0.5 * n))
      throw std::domain_error("Params: order s must satisfy 0 < s < n/2 (got s=" +
                              std::to_string(s_) + ", n=" + std::to_string(n_) + ")");
  }

  double lambda() const { return n - 2.0 * s; }          // kernel exponent, in (0, n)
  double sob_exp() const { return 2.0 * n / (n - 2.0 * s); }   // 2*_s > 2
  double hls_exp() const { return 2.0 * n / (n + 2.0 * s); }   // p in (1, 2)

  bool operator==(const Params& o) const { return n == o.n && s == o.s; }
};

}  // namespace hlslab
