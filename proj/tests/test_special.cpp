#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "hlslab/optim.hpp"
#include "hlslab/params.hpp"
#include "hlslab/quadrature.hpp"
#include "hlslab/special.hpp"

using namespace hlslab;

TEST_CASE("log_gamma matches classic values and the recurrence") {
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(log_gamma(2.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-14));
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(0.05, 40.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(eng);
    CHECK(log_gamma(x + 1.0) - log_gamma(x) == doctest::Approx(std::log(x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
}

TEST_CASE("sphere_area closed forms") {
  CHECK(sphere_area(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sphere_area(1) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
  CHECK(sphere_area(2) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
  CHECK(sphere_area(3) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-14));
}

TEST_CASE("gen_binom integer and fractional cases") {
  CHECK(gen_binom(5.0, 2) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(gen_binom(6.0, 4) == doctest::Approx(15.0).epsilon(1e-14));
  CHECK(gen_binom(2.5, 1) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(gen_binom(2.5, 2) == doctest::Approx(2.5 * 1.5 / 2.0).epsilon(1e-14));
  // Pascal-type recurrence C(q,k) = C(q-1,k) + C(q-1,k-1)
  for (double q : {3.7, 5.2, 9.9})
    for (int k = 2; k <= 5; ++k)
      CHECK(gen_binom(q, k) ==
            doctest::Approx(gen_binom(q - 1.0, k) + gen_binom(q - 1.0, k - 1)).epsilon(1e-12));
}

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
  const GaussRule& g5 = gauss_legendre(5);
  double sum = 0.0;
  for (std::size_t i = 0; i < g5.x.size(); ++i)
    sum += g5.w[i] * std::pow(g5.x[i], 8);
  CHECK(sum == doctest::Approx(2.0 / 9.0).epsilon(1e-14));  // int x^8 over [-1,1]
  CHECK(gauss_integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 24) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(gauss_integrate_panels([](double x) { return std::exp(-x); }, 0.0, 20.0, 8, 16) ==
        doctest::Approx(1.0 - std::exp(-20.0)).epsilon(1e-13));
  // cached rule is identical to a fresh one
  const GaussRule& c = gauss_legendre_cached(24);
  const GaussRule f = gauss_legendre(24);
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    CHECK(c.x[i] == f.x[i]);
    CHECK(c.w[i] == f.w[i]);
  }
}

TEST_CASE("1-D minimizers land on the analytic minimum") {
  auto q = [](double x) { return (x - 0.7) * (x - 0.7) + 3.0; };
  MinResult g = golden_min(q, -4.0, 5.0, 1e-10);
  CHECK(g.converged);
  CHECK(g.x == doctest::Approx(0.7).epsilon(1e-7));
  MinResult b = brent_min(q, -4.0, 5.0, 1e-10);
  CHECK(b.converged);
  CHECK(b.x == doctest::Approx(0.7).epsilon(1e-8));
  CHECK(b.evals <= g.evals);  // parabolic steps should not be slower here
  MinResult m = brent_min([](double x) { return std::cos(x); }, 2.0, 4.5, 1e-10);
  CHECK(m.x == doctest::Approx(M_PI).epsilon(1e-8));
}

TEST_CASE("Params invariants") {
  CHECK_THROWS_AS(Params(1, 0.25), std::domain_error);
  CHECK_THROWS_AS(Params(3, 0.0), std::domain_error);
  CHECK_THROWS_AS(Params(3, 1.5), std::domain_error);
  CHECK_THROWS_AS(Params(4, -1.0), std::domain_error);
  const Params P(3, 1.0);
  CHECK(P.lambda() == doctest::Approx(1.0));
  CHECK(P.sob_exp() == doctest::Approx(6.0));
  CHECK(P.hls_exp() == doctest::Approx(1.2));
  CHECK(P == Params(3, 1.0));
}
