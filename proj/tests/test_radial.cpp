#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "hlslab/radial.hpp"
#include "hlslab/special.hpp"

using namespace hlslab;

TEST_CASE("log-trapezoid grid integrates a Gaussian to machine-level accuracy") {
  // int_0^inf e^{-r^2/2} r^{n-1} dr = 2^{n/2-1} Gamma(n/2)
  for (int n : {2, 3, 4, 5, 7}) {
    auto g = RadialGrid::make(n);
    double sum = 0.0, sums = 0.0;
    for (int i = 0; i < g->N; ++i) {
      sum += g->w[i] * std::exp(-0.5 * g->r[i] * g->r[i]);
      sums += g->ws[i] * std::exp(-0.5 * g->rs[i] * g->rs[i]);
    }
    const double exact = std::exp((0.5 * n - 1.0) * std::log(2.0) + log_gamma(0.5 * n));
    // accuracy is limited by the [rmin, rmax] truncation, ~ rmin^n / n
    const double tol = std::max(1e-13, 2.0 * std::pow(g->rmin, n));
    CHECK(sum == doctest::Approx(exact).epsilon(tol));
    CHECK(sums == doctest::Approx(exact).epsilon(tol));
  }
}

TEST_CASE("||U_1||_{2*}^{2*} = |S^n| for the Sobolev bubble") {
  for (auto [n, s] : {std::pair{3, 1.0}, {4, 1.0}, {3, 0.75}, {5, 1.5}}) {
    const Params P(n, s);
    auto g = RadialGrid::make(n);
    const RadialFn U = make_bubble(P, 1.0, 1.0, BubbleFlavor::Sobolev).sample(g);
    const double q = P.sob_exp();
    CHECK(std::pow(lp_norm(U, q), q) == doctest::Approx(sphere_area(n)).epsilon(1e-6));
  }
}

TEST_CASE("bubble_value scaling relations") {
  const Params P(3, 1.0);
  // Sobolev flavor at r = 0: (2/b)^{(n-2s)/2}
  CHECK(bubble_value(P, BubbleFlavor::Sobolev, 2.0, 1.0, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  // HLS flavor is the Sobolev flavor raised to (n+2s)/(n-2s)
  const double v = bubble_value(P, BubbleFlavor::Sobolev, 1.5, 1.0, 0.7);
  CHECK(bubble_value(P, BubbleFlavor::Hls, 1.5, 1.0, 0.7) ==
        doctest::Approx(std::pow(v, (P.n + 2.0 * P.s) / (P.n - 2.0 * P.s))).epsilon(1e-13));
  // coefficient is linear
  CHECK(bubble_value(P, BubbleFlavor::Hls, 1.5, 3.0, 0.7) ==
        doctest::Approx(3.0 * bubble_value(P, BubbleFlavor::Hls, 1.5, 1.0, 0.7)));
}

TEST_CASE("RadialFn arithmetic acts on both node families") {
  auto g = RadialGrid::make(3, 128);
  const RadialFn a(g, [](double r) { return std::exp(-r); });
  const RadialFn b(g, [](double r) { return 1.0 / (1.0 + r * r); });
  RadialFn c = 2.0 * a + b - a;
  for (int i = 0; i < g->N; ++i) {
    CHECK(c.v[i] == doctest::Approx(a.v[i] + b.v[i]).epsilon(1e-15));
    CHECK(c.vs[i] == doctest::Approx(a.vs[i] + b.vs[i]).epsilon(1e-15));
  }
}

TEST_CASE("split_parts: disjoint supports, exact reassembly") {
  auto g = RadialGrid::make(3, 256);
  const RadialFn f(g, [](double r) { return std::sin(3.0 * std::log(r + 0.1)); });
  auto [fp, fm] = split_parts(f);
  for (int i = 0; i < g->N; ++i) {
    CHECK(fp.v[i] >= 0.0);
    CHECK(fm.v[i] >= 0.0);
    CHECK(fp.v[i] * fm.v[i] == 0.0);
    CHECK(fp.v[i] - fm.v[i] == f.v[i]);
    CHECK(fp.vs[i] - fm.vs[i] == f.vs[i]);
  }
}

TEST_CASE("l2_inner against a closed-form product integral") {
  auto g = RadialGrid::make(3);
  const RadialFn a(g, [](double r) { return std::exp(-r * r); });
  const RadialFn b(g, [](double r) { return std::exp(-2.0 * r * r); });
  // |S^2| int_0^inf e^{-3 r^2} r^2 dr = 4 pi * sqrt(pi/3)/(4*3) = pi^{3/2}/(3 sqrt 3)
  const double exact = std::pow(M_PI, 1.5) / (3.0 * std::sqrt(3.0));
  CHECK(l2_inner(a, b) == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("zonal sphere functions: measure, interpolation, transfer") {
  const Params P(3, 1.0);
  ZonalSphereFn one(P, 512, [](double) { return 1.0; });
  CHECK(one.integral() == doctest::Approx(sphere_area(3)).epsilon(1e-7));
  CHECK(one.lp_norm(2.0) == doctest::Approx(std::sqrt(sphere_area(3))).epsilon(1e-7));

  ZonalSphereFn g(P, 512, [](double x) { return 1.0 + 0.5 * x + 0.25 * x * x; });
  for (double x : {-0.93, -0.4, 0.0, 0.31, 0.88})
    CHECK(g.interp(x) == doctest::Approx(1.0 + 0.5 * x + 0.25 * x * x).epsilon(1e-9));

  // stereographic pullback preserves the L^p norm for every p > 1
  auto grid = RadialGrid::make(3);
  for (double p : {1.5, 2.0, 3.0}) {
    const RadialFn f = stereographic_transfer(g, p, grid);
    CHECK(lp_norm(f, p) == doctest::Approx(g.lp_norm(p)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(stereographic_transfer(g, 1.0, grid), std::domain_error);
}

TEST_CASE("serialization round-trips the grid faithfully") {
  auto g = RadialGrid::make(2, 16);
  const RadialFn f(g, [](double r) { return r; });
  const std::string csv = radial_to_csv(f);
  CHECK(csv.substr(0, 8) == "r,value\n");
  // 16 data rows after the header
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
  const std::string js = radial_to_json(f);
  CHECK(js.find("\"schema\":1") != std::string::npos);
  CHECK(js.find("\"n\":2") != std::string::npos);
  CHECK(js.front() == '{');
  CHECK(js.back() == '}');
}

TEST_CASE("grid hash separates distinct grids and is stable") {
  auto a = RadialGrid::make(3, 128);
  auto b = RadialGrid::make(3, 128);
  auto c = RadialGrid::make(3, 256);
  auto d = RadialGrid::make(4, 128);
  CHECK(a->hash() == b->hash());
  CHECK(a->hash() != c->hash());
  CHECK(a->hash() != d->hash());
}
