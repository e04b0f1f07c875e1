#include "hlslab/riesz.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hlslab/constants.hpp"
#include "hlslab/quadrature.hpp"
#include "hlslab/special.hpp"

namespace hlslab {

namespace {

// One pairing route: primal samples of a against staggered samples of b.
// row[i] = w_i a(r_i) sum_j ws_j k(r_i, rho_j) b(rho_j); rows summed in order.
double half_form(const RadialFn& a, const RadialFn& b, const KernelTable& K,
                 bool parallel) {
  const RadialGrid& g = *K.grid;
  const int N = g.N;
  std::vector<double> row(N);
  auto one = [&](int i) {
    double acc = 0.0;
    for (int j = 0; j < N; ++j) acc += g.ws[j] * K.entry(i, j) * b.vs[j];
    row[i] = g.w[i] * a.v[i] * acc;
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < N; ++i) one(i);
  } else {
    for (int i = 0; i < N; ++i) one(i);
  }
  double total = 0.0;
  for (int i = 0; i < N; ++i) total += row[i];
  return total;
}

double hls_form_impl(const RadialFn& g1, const RadialFn& g2, const KernelTable& K,
                     bool parallel) {
  if (g1.grid != K.grid || g2.grid != K.grid)
    throw std::invalid_argument("hls_form: functions not on the kernel grid");
  const double area = sphere_area(K.grid->n - 1);
  return 0.5 * area * area *
         (half_form(g1, g2, K, parallel) + half_form(g2, g1, K, parallel));
}

}  // namespace

double hls_form(const RadialFn& g1, const RadialFn& g2, const KernelTable& K) {
  return hls_form_impl(g1, g2, K, true);
}

double hls_form_serial(const RadialFn& g1, const RadialFn& g2, const KernelTable& K) {
  return hls_form_impl(g1, g2, K, false);
}

double neg_frac_norm_sq(const RadialFn& g, const KernelTable& K) {
  return riesz_const(K.P) * hls_form(g, g, K);
}

RadialFn riesz_potential(const RadialFn& g, const KernelTable& K) {
  if (g.grid != K.grid)
    throw std::invalid_argument("riesz_potential: function not on the kernel grid");
  const RadialGrid& gr = *K.grid;
  const int N = gr.N;
  const double c = riesz_const(K.P) * sphere_area(gr.n - 1);
  RadialFn out(g.grid);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < N; ++i) {
    double acc = 0.0;
    for (int j = 0; j < N; ++j) acc += gr.ws[j] * K.entry(i, j) * g.vs[j];
    out.v[i] = c * acc;
  }
#pragma omp parallel for schedule(static)
  for (int j = 0; j < N; ++j) {
    double acc = 0.0;
    for (int i = 0; i < N; ++i) acc += gr.w[i] * K.entry(i, j) * g.v[i];
    out.vs[j] = c * acc;
  }
  return out;
}

double bubble_el_constant(const Params& P) {
  return std::exp(log_gamma(0.5 * (P.n + 2.0 * P.s)) - log_gamma(0.5 * (P.n - 2.0 * P.s)));
}

namespace {

// c * int U_a U_b^{2*_s - 1}  (unit amplitudes) by the radial grid rule.
double pair_route(const Params& P, double ba, double bb, const RadialGrid& g) {
  const double e1 = 0.5 * (P.n - 2.0 * P.s), e2 = 0.5 * (P.n + 2.0 * P.s);
  double acc = 0.0;
  for (int i = 0; i < g.N; ++i) {
    const double r2 = g.r[i] * g.r[i];
    acc += g.w[i] * std::pow(2.0 * ba / (ba * ba + r2), e1) *
           std::pow(2.0 * bb / (bb * bb + r2), e2);
  }
  return sphere_area(g.n - 1) * acc;
}

}  // namespace

double hs_inner(const BubbleCombo& F, const BubbleCombo& G,
                const std::shared_ptr<const RadialGrid>& grid) {
  if (F.flavor != BubbleFlavor::Sobolev || G.flavor != BubbleFlavor::Sobolev)
    throw std::invalid_argument("hs_inner: requires Sobolev-flavor combos");
  if (!(F.P == G.P)) throw std::invalid_argument("hs_inner: mismatched Params");
  const double c = bubble_el_constant(F.P);
  double acc = 0.0;
  for (const auto& a : F.terms)
    for (const auto& b : G.terms)
      acc += a.c * b.c * 0.5 *
             (pair_route(F.P, a.b, b.b, *grid) + pair_route(F.P, b.b, a.b, *grid));
  return c * acc;
}

double sphere_hls_form(const ZonalSphereFn& g) {
  const Params& P = g.P;
  const double lambda = P.lambda();
  const int M = static_cast<int>(g.v.size());
  // staggered copy on the interlacing GL rule of order M+1
  ZonalSphereFn h(P, M + 1, [&g](double x) { return g.interp(x); });
  const int Mi = M, Mj = M + 1;
  std::vector<double> row(Mi);
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < Mi; ++i) {
    const double ci = g.costh[i], si = std::sqrt(std::max(0.0, 1.0 - ci * ci));
    double acc = 0.0;
    for (int j = 0; j < Mj; ++j) {
      const double cj = h.costh[j], sj = std::sqrt(std::max(0.0, 1.0 - cj * cj));
      const double A = 2.0 - 2.0 * ci * cj, B = 2.0 * si * sj;
      acc += h.wq[j] * h.v[j] * angular_mean(P.n, A, B, lambda);
    }
    row[i] = g.wq[i] * g.v[i] * acc;
  }
  double total = 0.0;
  for (int i = 0; i < Mi; ++i) total += row[i];
  return total;
}

}  // namespace hlslab
