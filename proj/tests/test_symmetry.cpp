#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "hlslab/grid2d.hpp"
#include "hlslab/special.hpp"

using namespace hlslab;

namespace {

const Params kP2(2, 0.5);

GridFn2D random_nonneg(int N, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GridFn2D f(kP2, 12.0, N);
  for (double& x : f.v) x = u(eng) * u(eng);
  return f;
}

std::vector<double> sorted_values(const GridFn2D& f) {
  std::vector<double> v = f.v;
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("GridFn2D geometry and norms") {
  GridFn2D f(kP2, 10.0, 20, [](double, double) { return 3.0; });
  CHECK(f.h() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.x(0) == doctest::Approx(-9.5).epsilon(1e-15));
  CHECK(f.x(19) == doctest::Approx(9.5).epsilon(1e-15));
  // ||const||_p = (4 L^2)^{1/p} c
  for (double p : {1.0, 4.0 / 3.0, 2.0})
    CHECK(f.lp_norm(p) == doctest::Approx(std::pow(400.0, 1.0 / p) * 3.0).epsilon(1e-13));
  CHECK_THROWS_AS(f.lp_norm(0.5), std::domain_error);
  CHECK_THROWS_AS(GridFn2D(Params(3, 1.0), 10.0, 20), std::domain_error);
  CHECK_THROWS_AS(GridFn2D(kP2, 10.0, 4), std::domain_error);
}

TEST_CASE("decreasing rearrangement: multiset-exact, idempotent, radially ordered") {
  const GridFn2D f = random_nonneg(32, 5);
  const GridFn2D r = decreasing_rearrangement(f);
  CHECK(sorted_values(f) == sorted_values(r));
  const GridFn2D rr = decreasing_rearrangement(r);
  CHECK(r.v == rr.v);
  // values are nonincreasing in distance from the grid center
  for (int i = 0; i < r.N; ++i)
    for (int j = 0; j < r.N; ++j)
      for (int i2 = 0; i2 < r.N; ++i2)
        for (int j2 = 0; j2 < r.N; ++j2) {
          const double d1 = r.x(i) * r.x(i) + r.x(j) * r.x(j);
          const double d2 = r.x(i2) * r.x(i2) + r.x(j2) * r.x(j2);
          if (d1 < d2 - 1e-12) {
            CHECK(r.at(i, j) >= r.at(i2, j2));
            goto next;  // full quartic loop is excessive; spot-check per (i, j)
          }
        }
next:;
  GridFn2D bad = f;
  bad.v[7] = -1.0;
  CHECK_THROWS_AS(decreasing_rearrangement(bad), std::domain_error);
}

TEST_CASE("polarization preserves values and never decreases the HLS form") {
  const GridFn2D f = random_nonneg(32, 6);
  const double base = hls2d(f, f);
  CHECK(base == hls2d_serial(f, f));  // fixed-order reduction
  const Halfplane cases[] = {{HalfplaneKind::X, 5},    {HalfplaneKind::X, -9},
                             {HalfplaneKind::Y, 0},    {HalfplaneKind::Y, 12},
                             {HalfplaneKind::DiagMain, 3}, {HalfplaneKind::DiagAnti, -4}};
  for (const Halfplane& H : cases) {
    const GridFn2D g = polarize(f, H);
    CHECK(sorted_values(f) == sorted_values(g));
    CHECK(hls2d(g, g) >= base - 1e-10 * std::abs(base));
  }
  // a centered radial decreasing profile is a fixed point
  const GridFn2D b = bubble2d(f, 0.0, 0.0, 1.5, 1.0);
  for (const Halfplane& H : cases) CHECK(polarize(b, H).v == b.v);
  CHECK_THROWS_AS(polarize(f, Halfplane{HalfplaneKind::X, 32}), std::invalid_argument);
  CHECK_THROWS_AS(polarize(f, Halfplane{HalfplaneKind::DiagMain, -40}),
                  std::invalid_argument);
  GridFn2D other(kP2, 12.0, 16);
  CHECK_THROWS_AS(hls2d(f, other), std::invalid_argument);
}

TEST_CASE("conformal map: small norm drift, fixed point at the matched bubble") {
  const double p = kP2.hls_exp();
  GridFn2D f = bubble2d(GridFn2D(kP2, 12.0, 128), 0.5, -0.3, 1.2, 1.0);
  double drift = 1.0;
  const GridFn2D g = conformal_U(f, p, &drift);
  CHECK(drift < 0.05);
  CHECK(g.lp_norm(p) > 0.0);
  CHECK_THROWS_AS(conformal_U(f, 1.0), std::domain_error);
}

TEST_CASE("manifold_distance_2d recovers a planted bubble") {
  const GridFn2D like(kP2, 12.0, 64);
  const GridFn2D f = bubble2d(like, 0.4, -0.3, 1.3, 0.9);
  const Fit2D fit = manifold_distance_2d(f, 3, 1);
  CHECK(fit.converged);
  CHECK(fit.dist <= 0.02 * f.lp_norm(kP2.hls_exp()));
  CHECK(fit.ax == doctest::Approx(0.4).epsilon(0.05));
  CHECK(fit.ay == doctest::Approx(-0.3).epsilon(0.05));
  CHECK(fit.b == doctest::Approx(1.3).epsilon(0.05));
  CHECK(fit.c == doctest::Approx(0.9).epsilon(0.05));
}

TEST_CASE("computed distances are Lipschitz in the data") {
  const GridFn2D like(kP2, 12.0, 32);
  const GridFn2D f = bubble2d(like, 0.2, 0.1, 1.0, 1.0);
  GridFn2D g = f;
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j)
      g.at(i, j) += 0.05 * std::exp(-0.1 * (g.x(i) * g.x(i) + g.x(j) * g.x(j)));
  CHECK(lipschitz_distance_check(f, g, 1e-3));
}

TEST_CASE("first_crossing scans the dist_rel column") {
  FlowTrace t;
  for (int k = 0; k < 5; ++k)
    t.records.push_back({k, 1.0, 1.0, 1.0 / (k + 1.0), 0.0});
  CHECK(first_crossing(t, 0.3).value() == 3);
  CHECK(first_crossing(t, 1.0).value() == 0);
  CHECK(!first_crossing(t, 0.1).has_value());
  const std::string csv = t.to_csv();
  CHECK(csv.substr(0, 42) == "step,lp_norm,hls_value,dist_rel,dist_to_h\n");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}

TEST_CASE("competing symmetries drives an off-center bubble to the manifold") {
  const GridFn2D like(kP2, 12.0, 48);
  // two-bubble superposition: genuinely off the manifold
  GridFn2D f0 = bubble2d(like, 1.0, 0.6, 1.0, 1.0);
  const GridFn2D f1 = bubble2d(like, -1.5, -0.4, 0.6, 0.7);
  for (std::size_t k = 0; k < f0.v.size(); ++k) f0.v[k] += f1.v[k];
  const FlowTrace t = competing_symmetries(f0, 6);
  REQUIRE(t.records.size() == 7);
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    // rearrangement is exactly norm-preserving; U loses ~1% per step to the
    // bilinear resampling at this resolution
    if (k > 0)
      CHECK(t.records[k].lp_norm ==
            doctest::Approx(t.records[k - 1].lp_norm).epsilon(0.04));
    CHECK(t.records[k].hls_value > 0.0);
  }
  CHECK(t.records.front().dist_rel > 1e-3);
  CHECK(t.records.back().dist_rel < 0.5 * t.records.front().dist_rel);
  CHECK(t.records.back().dist_to_h < t.records.front().dist_to_h);
  GridFn2D neg = f0;
  neg.v[0] = -1.0;
  CHECK_THROWS_AS(competing_symmetries(neg, 1), std::domain_error);
}

TEST_CASE("discrete polarization flow: conserved norm, monotone form and distance") {
  const GridFn2D like(kP2, 12.0, 32);
  GridFn2D f0 = bubble2d(like, 1.5, -0.8, 1.0, 1.0);
  // roughen the profile so the flow has work to do
  std::mt19937_64 eng(42);
  std::uniform_real_distribution<double> u(0.8, 1.2);
  for (double& x : f0.v) x *= u(eng);
  const FlowTrace t = discrete_flow(f0, 120, 7);
  REQUIRE(t.records.size() == 121);
  const double n0 = t.records[0].lp_norm;
  for (std::size_t k = 1; k < t.records.size(); ++k) {
    CHECK(t.records[k].lp_norm == doctest::Approx(n0).epsilon(1e-12));
    CHECK(t.records[k].hls_value >= t.records[k - 1].hls_value - 1e-9 * n0 * n0);
    CHECK(t.records[k].dist_to_h <= t.records[k - 1].dist_to_h + 1e-12 * n0);
  }
  CHECK(t.records.back().dist_to_h < 0.8 * t.records.front().dist_to_h);
}
