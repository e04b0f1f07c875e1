#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hlslab/params.hpp"

namespace hlslab {

// Cell-centered square grid on [-L, L]^2 for the planar (n = 2) demo of the
// competing-symmetries iteration and the polarization flow.
struct GridFn2D {
  Params P;  // n must be 2
  double L = 12.0;
  int N = 128;
  std::vector<double> v;  // v[ix * N + iy], centers x = -L + (ix + 1/2) h

  GridFn2D(Params p, double halfwidth = 12.0, int cells = 128);
  template <class F>
  GridFn2D(Params p, double halfwidth, int cells, const F& f)
      : GridFn2D(p, halfwidth, cells) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) v[i * N + j] = f(x(i), x(j));
  }

  double h() const { return 2.0 * L / N; }
  double x(int i) const { return -L + (i + 0.5) * h(); }
  double& at(int i, int j) { return v[i * N + j]; }
  double at(int i, int j) const { return v[i * N + j]; }
  double lp_norm(double p) const;  // (h^2 sum |v|^p)^{1/p}
};

// HLS bubble (2b/(b^2+|x-a|^2))^{(n+2s)/2} sampled on a grid.
GridFn2D bubble2d(const GridFn2D& like, double ax, double ay, double b, double c);

// Values sorted decreasingly and reassigned to cells ordered by distance from
// the origin (ties by index); exact value-multiset preservation.
GridFn2D decreasing_rearrangement(const GridFn2D& f);

// Carlen-Loss conformal map (Uf)(x) = (2/|x+e_2|^2)^{n/p} f(psi(x)) by
// bilinear interpolation; if norm_err is non-null it receives the relative
// L^p norm drift of this call.
GridFn2D conformal_U(const GridFn2D& f, double p, double* norm_err = nullptr);

// Grid-compatible reflection halfplanes: X/Y boundaries at c = m h/2,
// diagonal/antidiagonal boundaries at c = m h.  The favored side is the one
// containing the origin.
enum class HalfplaneKind { X, Y, DiagMain, DiagAnti };
struct Halfplane {
  HalfplaneKind kind;
  int m;
};

// Two-point rearrangement across H: max on the favored side, min on the
// other; exact L^p preservation.  Throws std::invalid_argument when the
// boundary misses the box.
GridFn2D polarize(const GridFn2D& f, const Halfplane& H);

// Quadratic form  sum_{cells} f(x) W(x - y) g(y)  with W(d) = h^4 |d|^{-lambda}
// off the diagonal and the exact square-cell integral of |z|^{-lambda} on it.
double hls2d(const GridFn2D& f, const GridFn2D& g);
double hls2d_serial(const GridFn2D& f, const GridFn2D& g);

struct FlowRecord {
  int step;
  double lp_norm;
  double hls_value;
  double dist_rel;   // squared manifold distance / squared norm (competing
                     // symmetries) or relative per-step displacement (flow)
  double dist_to_h;  // L^p distance to the limit object
};

struct FlowTrace {
  std::vector<FlowRecord> records;
  std::string to_csv() const;
};

struct Fit2D {
  double dist = 0.0;
  double ax = 0.0, ay = 0.0, b = 1.0, c = 1.0;
  bool converged = true;
};

// Multi-start coordinate descent for inf_{a,b,c} ||f - c B_{a,b}||_p; an
// upper bound for the true manifold distance.
Fit2D manifold_distance_2d(const GridFn2D& f, int restarts = 8, std::uint64_t seed = 0);

// |d(f) - d(g)| <= ||f - g||_p + 2 * slack  at the level of computed upper
// bounds.
bool lipschitz_distance_check(const GridFn2D& f, const GridFn2D& g, double slack);

// First step whose dist_rel column is <= delta.
std::optional<int> first_crossing(const FlowTrace& trace, double delta);

// f_k = (R U)^k f0 with per-step records; p = 2n/(n+2s).
FlowTrace competing_symmetries(const GridFn2D& f0, int K);

// Randomized polarization sequence emulating the continuous rearrangement
// flow; ends near decreasing_rearrangement(f0).
FlowTrace discrete_flow(const GridFn2D& f0, int steps, std::uint64_t seed);

}  // namespace hlslab
