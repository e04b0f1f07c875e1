#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "hlslab/constants.hpp"
#include "hlslab/corpus.hpp"
#include "hlslab/stability.hpp"

using namespace hlslab;

namespace {
constexpr int kN = 1024;
}

TEST_CASE("extremals have vanishing deficit on both sides") {
  for (auto [n, s] : {std::pair{3, 1.0}, {4, 1.0}, {3, 0.75}, {5, 1.5}}) {
    const Params P(n, s);
    const KernelTable& K = lab_kernel(P, kN);
    for (double b : {0.5, 1.0, 2.0}) {
      const RadialFn g = make_bubble(P, b, 1.0, BubbleFlavor::Hls).sample(K.grid);
      const double scale = std::pow(lp_norm(g, P.hls_exp()), 2);
      CHECK(std::abs(hls_deficit(g, K)) <= 1e-4 * scale);
    }
    const BubbleCombo U = make_bubble(P, 1.3, 1.0, BubbleFlavor::Sobolev);
    CHECK(std::abs(sobolev_deficit(U, K.grid)) <= 1e-4 * hs_inner(U, U, K.grid));
  }
}

TEST_CASE("manifold distances recover a planted bubble") {
  const Params P(3, 1.0);
  auto grid = lab_grid(3, kN);
  const RadialFn g = make_bubble(P, 1.7, 0.8, BubbleFlavor::Hls).sample(grid);
  const FitResult f = hls_manifold_distance(P, g);
  CHECK(f.converged);
  CHECK(f.b == doctest::Approx(1.7).epsilon(1e-4));
  CHECK(f.c == doctest::Approx(0.8).epsilon(1e-4));
  CHECK(f.dist_sq <= 1e-10 * std::pow(lp_norm(g, P.hls_exp()), 2));

  const BubbleCombo F = make_bubble(P, 1.4, 0.9, BubbleFlavor::Sobolev);
  const FitResult fs = sobolev_manifold_distance(F, grid);
  CHECK(fs.b == doctest::Approx(1.4).epsilon(1e-4));
  CHECK(fs.c == doctest::Approx(0.9).epsilon(1e-4));
  CHECK(fs.dist_sq <= 1e-10 * hs_inner(F, F, grid));
  // the report flags the degenerate ratio instead of forming 0/0
  const StabilityReport rep = sobolev_stability(F, grid, "planted");
  CHECK(rep.near_manifold);
  CHECK(rep.pass);
  CHECK(std::isnan(rep.ratio));
}

TEST_CASE("seeded corpus passes the HLS stability bound") {
  const Params P(3, 1.0);
  const KernelTable& K = lab_kernel(P, kN);
  for (const HlsCase& c : make_hls_corpus(P, 20, 2024)) {
    const StabilityReport rep = hls_stability(realize(c, K.grid), K, c.id);
    CHECK(rep.converged);
    CHECK_MESSAGE(rep.pass, c.id, " margin=", rep.margin);
  }
}

TEST_CASE("seeded corpus passes the Sobolev stability bound") {
  const Params P(4, 1.0);
  auto grid = lab_grid(4, kN);
  for (const SobolevCase& c : make_sobolev_corpus(P, 20, 2024)) {
    const StabilityReport rep = sobolev_stability(c.combo, grid, c.id);
    CHECK(rep.converged);
    CHECK_MESSAGE(rep.pass, c.id, " margin=", rep.margin);
  }
}

TEST_CASE("spectral gap: orthogonalized residuals clear the 4s/(n+2s+2) share") {
  const Params P(3, 1.0);
  auto grid = lab_grid(3, kN);
  int checked = 0;
  for (const SobolevCase& c : make_sobolev_corpus(P, 10, 99)) {
    for (double b : {0.8, 1.25}) {
      const auto gap = spectral_gap_check(b, c.combo, grid);
      if (!gap) continue;
      ++checked;
      const double scale = hs_inner(c.combo, c.combo, grid);
      CHECK(*gap >= -1e-6 * scale);
    }
  }
  CHECK(checked >= 15);
  BubbleCombo H(P, BubbleFlavor::Hls);
  H.add(1.0, 1.0);
  CHECK_THROWS_AS(spectral_gap_check(1.0, H, grid), std::invalid_argument);
}

TEST_CASE("pointwise Taylor inequality") {
  for (double q : {2.0, 3.0, 6.0, 2.857142857142857, 4.4})
    for (double x : {-0.99, -0.5, -0.1, 0.0, 0.3, 1.0, 7.5})
      CHECK(taylor_pointwise_check(x, q));
  CHECK_THROWS_AS(taylor_pointwise_check(-1.5, 2.0), std::domain_error);
  CHECK_THROWS_AS(taylor_pointwise_check(0.5, 0.5), std::domain_error);
}

TEST_CASE("norm expansion upper bound") {
  const Params P(3, 0.75);  // 2*_s = 4: integer branch
  auto grid = lab_grid(3, 512);
  const RadialFn u = make_bubble(P, 1.0, 1.0, BubbleFlavor::Sobolev).sample(grid);
  const RadialFn w = make_bubble(P, 2.0, 1.0, BubbleFlavor::Sobolev).sample(grid);
  RadialFn r = 0.2 * w - 0.3 * u;  // u + r >= 0.7 u
  CHECK(norm_expansion_check(P, u, r));
  const Params Q(3, 0.8);  // fractional branch
  const RadialFn uq = make_bubble(Q, 1.0, 1.0, BubbleFlavor::Sobolev).sample(grid);
  const RadialFn wq = make_bubble(Q, 0.6, 1.0, BubbleFlavor::Sobolev).sample(grid);
  RadialFn rq = 0.15 * wq - 0.1 * uq;
  CHECK(norm_expansion_check(Q, uq, rq));
  RadialFn bad = -2.0 * u;
  CHECK_THROWS_AS(norm_expansion_check(P, u, bad), std::domain_error);
}

TEST_CASE("local_bounds is consistent with its ingredients") {
  const Params P(3, 1.0);
  for (double d : {0.05, 0.2, 0.4}) {
    const LocalBounds lb = local_bounds(P, d);
    CHECK(lb.nu_lower == doctest::Approx(m_of_delta(P, d)).epsilon(1e-14));
    CHECK(lb.nu_lower_scaled ==
          doctest::Approx(sobolev_sharp_constant(P) * lb.nu_lower).epsilon(1e-14));
    const double r = (P.n - 2.0 * P.s) / (P.n + 2.0 * P.s);
    CHECK(lb.mu_lower ==
          doctest::Approx(0.5 * r * std::min(m_of_delta(P, 2.0 * d) * r, 1.0)).epsilon(1e-14));
    CHECK(lb.global_lower == doctest::Approx(d * lb.mu_lower).epsilon(1e-14));
  }
  CHECK_THROWS_AS(local_bounds(P, 0.0), std::domain_error);
  CHECK_THROWS_AS(local_bounds(P, 0.5), std::domain_error);
}

TEST_CASE("splitting superadditivity and the h(m) inequality") {
  const Params P(3, 1.0);
  const KernelTable& K = lab_kernel(P, kN);
  BubbleCombo combo(P, BubbleFlavor::Hls);
  combo.add(1.0, 1.0);
  combo.add(-0.3, 4.0);  // changes sign at large radius
  CHECK(split_superadditivity_check(combo.sample(K.grid), K));
  const RadialFn pos = make_bubble(P, 1.0, 1.0, BubbleFlavor::Hls).sample(K.grid);
  CHECK_THROWS_AS(split_superadditivity_check(pos, K), std::domain_error);
  for (int n : {2, 3, 5})
    for (double s : {0.4, 0.9})
      for (double m : {0.0, 0.01, 0.1, 0.25, 0.5})
        CHECK(h_m_bound_check(n, s, m));
  CHECK_THROWS_AS(h_m_bound_check(3, 1.0, 0.7), std::domain_error);
}

TEST_CASE("Legendre duality: deficit identity and Holder equality case") {
  for (auto [n, s] : {std::pair{3, 1.0}, {4, 1.0}, {3, 0.75}}) {
    const Params P(n, s);
    const KernelTable& K = lab_kernel(P, kN);
    int done = 0;
    for (const SobolevCase& c : make_sobolev_corpus(P, 4, 777)) {
      CHECK(legendre_deficit_identity(c.combo, K) <= 1e-3);
      CHECK(legendre_holder_residual(c.combo, K.grid) <= 1e-10);
      ++done;
    }
    CHECK(done == 4);
  }
}

TEST_CASE("sphere corollary: constants sit on the manifold, tilted data passes") {
  const Params P(3, 1.0);
  const KernelTable& K = lab_kernel(P, kN);
  ZonalSphereFn one(P, 256, [](double) { return 1.0; });
  const StabilityReport flat = corollary_sphere_check(one, K);
  CHECK(flat.near_manifold);
  CHECK(flat.pass);
  ZonalSphereFn g(P, 256, [](double x) { return 1.0 + 0.5 * x + 0.3 * x * x; });
  const StabilityReport rep = corollary_sphere_check(g, K);
  CHECK(rep.converged);
  CHECK_MESSAGE(rep.pass, "margin=", rep.margin);
  CHECK(rep.deficit > 0.0);
}

TEST_CASE("report serialization carries the schema tag and fields") {
  StabilityReport r;
  r.n = 3;
  r.s = 1.0;
  r.case_id = "demo";
  r.pass = true;
  const std::string js = report_to_json(r);
  CHECK(js.find("\"schema\":1") != std::string::npos);
  CHECK(js.find("\"case_id\":\"demo\"") != std::string::npos);
  CHECK(js.find("\"pass\":true") != std::string::npos);
  CHECK(js.find("\"near_manifold\":false") != std::string::npos);
  CHECK(js.front() == '{');
  CHECK(js.back() == '}');
}
