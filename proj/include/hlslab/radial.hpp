#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hlslab/params.hpp"

namespace hlslab {

// Log-spaced radial quadrature grid for integrals of the form
//   int_0^inf f(r) r^{n-1} dr  =  sum_i w[i] f(r[i])
// (trapezoid in log r, spectrally accurate for bubble-type integrands).
// A staggered copy of the nodes, offset half a log-cell, is carried along so
// that singular-kernel double sums never hit the diagonal.
struct RadialGrid {
  int n = 0;          // dimension entering the r^{n-1} measure
  int N = 0;
  double rmin = 0.0, rmax = 0.0;
  double dt = 0.0;    // log spacing
  std::vector<double> r, w;    // primal nodes and weights
  std::vector<double> rs, ws;  // staggered nodes (r[i] * e^{dt/2}) and weights

  static std::shared_ptr<const RadialGrid> make(int n, int N = 2048, double rmin = 1e-4,
                                                double rmax = 1e4);
  std::uint64_t hash() const;
};

// Radial function sampled on both node families of a grid.
struct RadialFn {
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> v;   // values at grid->r
  std::vector<double> vs;  // values at grid->rs

  RadialFn() = default;
  explicit RadialFn(std::shared_ptr<const RadialGrid> g);
  RadialFn(std::shared_ptr<const RadialGrid> g, const std::function<double(double)>& f);

  RadialFn& operator+=(const RadialFn& o);
  RadialFn& operator-=(const RadialFn& o);
  RadialFn& operator*=(double c);
  friend RadialFn operator+(RadialFn a, const RadialFn& b) { return a += b; }
  friend RadialFn operator-(RadialFn a, const RadialFn& b) { return a -= b; }
  friend RadialFn operator*(double c, RadialFn a) { return a *= c; }
};

enum class BubbleFlavor { Sobolev, Hls };

// Finite combination of centered Aubin-Talenti bubbles.
//   Sobolev flavor: c (2b/(b^2+r^2))^{(n-2s)/2}
//   HLS flavor:     c (2b/(b^2+r^2))^{(n+2s)/2}
struct BubbleCombo {
  Params P;
  BubbleFlavor flavor;
  struct Term {
    double c;
    double b;
  };
  std::vector<Term> terms;

  BubbleCombo(Params p, BubbleFlavor f) : P(p), flavor(f) {}
  BubbleCombo& add(double c, double b);
  double operator()(double r) const;
  RadialFn sample(std::shared_ptr<const RadialGrid> g) const;
};

double bubble_value(const Params& P, BubbleFlavor flavor, double b, double c, double r);
BubbleCombo make_bubble(const Params& P, double b, double c, BubbleFlavor flavor);

// (|S^{n-1}| sum_i w_i |v_i|^p)^{1/p}, p >= 1.
double lp_norm(const RadialFn& f, double p);

// L^2 pairing |S^{n-1}| sum_i w_i f_i g_i.
double l2_inner(const RadialFn& f, const RadialFn& g);

// f = f_plus - f_minus with disjoint supports.
std::pair<RadialFn, RadialFn> split_parts(const RadialFn& f);

// Zonal function on S^n sampled at Gauss-Legendre latitudes:
//   int_{S^n} g = sum_j wq[j] g(theta[j]),  wq[j] = |S^{n-1}| sin^{n-1}(theta_j) * GL weight.
struct ZonalSphereFn {
  Params P;
  std::vector<double> theta;  // colatitudes in (0, pi)
  std::vector<double> costh;
  std::vector<double> wq;     // full surface-measure weights
  std::vector<double> v;

  ZonalSphereFn(Params p, int M = 512);
  ZonalSphereFn(Params p, int M, const std::function<double(double)>& f_of_costheta);
  // 4-point Lagrange interpolation in cos(theta).
  double interp(double costheta) const;
  double integral() const;  // int_{S^n} g
  double lp_norm(double p) const;
};

// Pullback to R^n with conformal factor (2/(1+r^2))^{n/p}; preserves L^p.
RadialFn stereographic_transfer(const ZonalSphereFn& g, double p,
                                std::shared_ptr<const RadialGrid> grid);

// CSV (r,value) and JSON serialization.
std::string radial_to_csv(const RadialFn& f);
std::string radial_to_json(const RadialFn& f);

}  // namespace hlslab
