#include "hlslab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "hlslab/quadrature.hpp"
#include "hlslab/special.hpp"

namespace hlslab {

std::shared_ptr<const RadialGrid> RadialGrid::make(int n, int N, double rmin, double rmax) {
  if (N < 16 || !(rmin > 0.0) || !(rmax > rmin))
    throw std::domain_error("RadialGrid: bad geometry");
  auto g = std::make_shared<RadialGrid>();
  g->n = n;
  g->N = N;
  g->rmin = rmin;
  g->rmax = rmax;
  const double t0 = std::log(rmin), t1 = std::log(rmax);
  g->dt = (t1 - t0) / (N - 1);
  g->r.resize(N);
  g->w.resize(N);
  g->rs.resize(N);
  g->ws.resize(N);
  for (int i = 0; i < N; ++i) {
    const double t = t0 + i * g->dt;
    g->r[i] = std::exp(t);
    g->rs[i] = std::exp(t + 0.5 * g->dt);
    const double endpoint = (i == 0 || i == N - 1) ? 0.5 : 1.0;
    // substitution r = e^t turns r^{n-1} dr into r^n dt
    g->w[i] = endpoint * std::pow(g->r[i], n) * g->dt;
    g->ws[i] = endpoint * std::pow(g->rs[i], n) * g->dt;
  }
  return g;
}

std::uint64_t RadialGrid::hash() const {
  // FNV-1a over the defining scalars
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  mix(static_cast<std::uint64_t>(n));
  mix(static_cast<std::uint64_t>(N));
  std::uint64_t bits;
  static_assert(sizeof(double) == sizeof(std::uint64_t));
  std::memcpy(&bits, &rmin, 8);
  mix(bits);
  std::memcpy(&bits, &rmax, 8);
  mix(bits);
  return h;
}

RadialFn::RadialFn(std::shared_ptr<const RadialGrid> g)
    : grid(std::move(g)), v(grid->N, 0.0), vs(grid->N, 0.0) {}

RadialFn::RadialFn(std::shared_ptr<const RadialGrid> g, const std::function<double(double)>& f)
    : grid(std::move(g)), v(grid->N), vs(grid->N) {
  for (int i = 0; i < grid->N; ++i) {
    v[i] = f(grid->r[i]);
    vs[i] = f(grid->rs[i]);
  }
}

RadialFn& RadialFn::operator+=(const RadialFn& o) {
  if (grid != o.grid) throw std::invalid_argument("RadialFn: mismatched grids");
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] += o.v[i];
    vs[i] += o.vs[i];
  }
  return *this;
}

RadialFn& RadialFn::operator-=(const RadialFn& o) {
  if (grid != o.grid) throw std::invalid_argument("RadialFn: mismatched grids");
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] -= o.v[i];
    vs[i] -= o.vs[i];
  }
  return *this;
}

RadialFn& RadialFn::operator*=(double c) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] *= c;
    vs[i] *= c;
  }
  return *this;
}

double bubble_value(const Params& P, BubbleFlavor flavor, double b, double c, double r) {
  const double expo = (flavor == BubbleFlavor::Sobolev) ? 0.5 * (P.n - 2.0 * P.s)
                                                        : 0.5 * (P.n + 2.0 * P.s);
  return c * std::pow(2.0 * b / (b * b + r * r), expo);
}

BubbleCombo& BubbleCombo::add(double c, double b) {
  if (!(b > 0.0)) throw std::domain_error("BubbleCombo: scale b must be positive");
  terms.push_back({c, b});
  return *this;
}

double BubbleCombo::operator()(double r) const {
  double acc = 0.0;
  for (const Term& t : terms) acc += bubble_value(P, flavor, t.b, t.c, r);
  return acc;
}

RadialFn BubbleCombo::sample(std::shared_ptr<const RadialGrid> g) const {
  return RadialFn(std::move(g), [this](double r) { return (*this)(r); });
}

BubbleCombo make_bubble(const Params& P, double b, double c, BubbleFlavor flavor) {
  BubbleCombo combo(P, flavor);
  combo.add(c, b);
  return combo;
}

double lp_norm(const RadialFn& f, double p) {
  if (!(p >= 1.0)) throw std::domain_error("lp_norm: p must be >= 1");
  const RadialGrid& g = *f.grid;
  double acc = 0.0;
  for (int i = 0; i < g.N; ++i) acc += g.w[i] * std::pow(std::abs(f.v[i]), p);
  return std::pow(sphere_area(g.n - 1) * acc, 1.0 / p);
}

double l2_inner(const RadialFn& f, const RadialFn& g) {
  if (f.grid != g.grid) throw std::invalid_argument("l2_inner: mismatched grids");
  const RadialGrid& gr = *f.grid;
  double acc = 0.0;
  for (int i = 0; i < gr.N; ++i) acc += gr.w[i] * f.v[i] * g.v[i];
  return sphere_area(gr.n - 1) * acc;
}

std::pair<RadialFn, RadialFn> split_parts(const RadialFn& f) {
  RadialFn plus(f.grid), minus(f.grid);
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    plus.v[i] = std::max(f.v[i], 0.0);
    minus.v[i] = std::max(-f.v[i], 0.0);
    plus.vs[i] = std::max(f.vs[i], 0.0);
    minus.vs[i] = std::max(-f.vs[i], 0.0);
  }
  return {plus, minus};
}

ZonalSphereFn::ZonalSphereFn(Params p, int M) : P(p) {
  const GaussRule& gl = gauss_legendre_cached(M);
  theta.resize(M);
  costh.resize(M);
  wq.resize(M);
  v.assign(M, 0.0);
  const double area = sphere_area(P.n - 1);
  // integrate in x = cos(theta): |S^{n-1}| (1-x^2)^{(n-2)/2} dx
  for (int j = 0; j < M; ++j) {
    const double x = gl.x[j];
    costh[j] = x;
    theta[j] = std::acos(x);
    wq[j] = area * gl.w[j] * std::pow(1.0 - x * x, 0.5 * (P.n - 2));
  }
}

ZonalSphereFn::ZonalSphereFn(Params p, int M, const std::function<double(double)>& f)
    : ZonalSphereFn(p, M) {
  for (int j = 0; j < M; ++j) v[j] = f(costh[j]);
}

double ZonalSphereFn::interp(double x) const {
  const int M = static_cast<int>(costh.size());
  // costh is decreasing in j (GL nodes ascend, acos flips); find bracket
  int lo = 0, hi = M - 1;
  if (x >= costh[M - 1]) {
    // nothing; handled by clamping below
  }
  // binary search for first index with costh[j] <= x when sorted ascending in costh reversed
  // costh[0] = smallest (most negative); it ascends with j
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (costh[mid] <= x) lo = mid; else hi = mid;
  }
  int i0 = std::clamp(lo - 1, 0, M - 4);
  double num = 0.0;
  for (int a = 0; a < 4; ++a) {
    double L = 1.0;
    for (int b2 = 0; b2 < 4; ++b2) {
      if (a == b2) continue;
      L *= (x - costh[i0 + b2]) / (costh[i0 + a] - costh[i0 + b2]);
    }
    num += L * v[i0 + a];
  }
  return num;
}

double ZonalSphereFn::integral() const {
  double acc = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) acc += wq[j] * v[j];
  return acc;
}

double ZonalSphereFn::lp_norm(double p) const {
  if (!(p >= 1.0)) throw std::domain_error("ZonalSphereFn::lp_norm: p must be >= 1");
  double acc = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) acc += wq[j] * std::pow(std::abs(v[j]), p);
  return std::pow(acc, 1.0 / p);
}

RadialFn stereographic_transfer(const ZonalSphereFn& g, double p,
                                std::shared_ptr<const RadialGrid> grid) {
  if (!(p > 1.0)) throw std::domain_error("stereographic_transfer: p must exceed 1");
  const double np = g.P.n / p;
  return RadialFn(std::move(grid), [&g, np](double r) {
    const double r2 = r * r;
    const double x = (1.0 - r2) / (1.0 + r2);
    return std::pow(2.0 / (1.0 + r2), np) * g.interp(x);
  });
}

std::string radial_to_csv(const RadialFn& f) {
  std::ostringstream os;
  os.precision(17);
  os << "r,value\n";
  for (int i = 0; i < f.grid->N; ++i) os << f.grid->r[i] << "," << f.v[i] << "\n";
  return os.str();
}

std::string radial_to_json(const RadialFn& f) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"schema\":1,\"n\":" << f.grid->n << ",\"r\":[";
  for (int i = 0; i < f.grid->N; ++i) os << (i ? "," : "") << f.grid->r[i];
  os << "],\"value\":[";
  for (int i = 0; i < f.grid->N; ++i) os << (i ? "," : "") << f.v[i];
  os << "]}";
  return os.str();
}

}  // namespace hlslab
