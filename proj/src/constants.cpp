#include "hlslab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hlslab/optim.hpp"
#include "hlslab/special.hpp"

namespace hlslab {

double sobolev_sharp_constant_form1(const Params& P) {
  const double n = P.n, s = P.s;
  const double lg = s * std::log(4.0 * M_PI) + log_gamma(0.5 * (n + 2.0 * s)) -
                    log_gamma(0.5 * (n - 2.0 * s)) +
                    (2.0 * s / n) * (log_gamma(0.5 * n) - log_gamma(n));
  return std::exp(-lg);
}

double sobolev_sharp_constant_form2(const Params& P) {
  const double n = P.n, s = P.s;
  const double lg = log_gamma(0.5 * (n + 2.0 * s)) - log_gamma(0.5 * (n - 2.0 * s)) +
                    (2.0 * s / n) * std::log(sphere_area(P.n));
  return std::exp(-lg);
}

double sobolev_sharp_constant(const Params& P) {
  const double a = sobolev_sharp_constant_form1(P);
  const double b = sobolev_sharp_constant_form2(P);
  if (std::abs(a - b) > 1e-12 * std::abs(a))
    throw std::logic_error("sobolev_sharp_constant: the two closed forms disagree");
  return a;
}

double lieb_sharp_diagonal(int n, double lambda) {
  if (!(lambda > 0.0 && lambda < n))
    throw std::domain_error("lieb_sharp_diagonal: lambda must lie in (0, n)");
  const double lg = 0.5 * lambda * std::log(M_PI) + log_gamma(0.5 * n - 0.5 * lambda) -
                    log_gamma(n - 0.5 * lambda) +
                    (1.0 - lambda / n) * (log_gamma(n) - log_gamma(0.5 * n));
  return std::exp(lg);
}

double liebloss_upper_bound(int n, double lambda, double p, double qprime) {
  if (!(p > 1.0 && qprime > 1.0))
    throw std::domain_error("liebloss_upper_bound: exponents must exceed 1");
  if (!(lambda > 0.0 && lambda < n))
    throw std::domain_error("liebloss_upper_bound: lambda must lie in (0, n)");
  const double two_s_over_n = (n - lambda) / static_cast<double>(n);
  if (std::abs(1.0 / qprime + 1.0 / p - two_s_over_n - 1.0) > 1e-10)
    throw std::domain_error("liebloss_upper_bound: exponent relation violated");
  const double ln = lambda / n;
  // |B_1|^{lambda/n} = pi^{lambda/2} Gamma(1 + n/2)^{-lambda/n}
  const double pref = n / (n - lambda) *
                      std::exp(0.5 * lambda * std::log(M_PI) - ln * log_gamma(1.0 + 0.5 * n));
  const double t1 = std::pow(lambda * qprime / (n * (qprime - 1.0)), ln);
  const double t2 = std::pow(lambda * p / (n * (p - 1.0)), ln);
  return pref / (qprime * p) * (t1 + t2);
}

double l_of_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("l_of_delta: delta must lie in (0, 1)");
  return std::sqrt(delta / (1.0 - delta));
}

double m_of_delta(const Params& P, double delta) {
  const double l = l_of_delta(delta);
  const double q = P.sob_exp();
  const double lead = 4.0 * P.s / (P.n + 2.0 * P.s + 2.0);
  const bool integral = std::abs(q - std::round(q)) < 1e-9;
  double sum = 0.0;
  if (integral) {
    const int qi = static_cast<int>(std::round(q));
    for (int k = 3; k <= qi; ++k) sum += gen_binom(q, k) * std::pow(l, k - 2);
  } else {
    const int qf = static_cast<int>(std::floor(q));
    for (int k = 3; k <= qf; ++k) sum += gen_binom(q, k) * std::pow(l, k - 2);
    sum += std::pow(l, q - 2.0);
  }
  return lead - (2.0 / q) * sum;
}

namespace {

double k_objective(const Params& P, double delta) {
  const double ratio = (P.n - 2.0 * P.s) / (P.n + 2.0 * P.s);
  const double m2 = m_of_delta(P, 2.0 * delta);
  return 0.5 * delta * ratio * std::min(m2 * ratio, 1.0);
}

}  // namespace

double K_constant(const Params& P) {
  const int M = 20000;
  double best = -1.0;
  int besti = -1;
  for (int i = 0; i < M; ++i) {
    const double delta = 0.5 * (i + 0.5) / M;
    const double v = k_objective(P, delta);
    if (v > best) {
      best = v;
      besti = i;
    }
  }
  if (!(best > 0.0))
    throw std::runtime_error("K_constant: no positive value found in the scan");
  const double lo = 0.5 * (std::max(0, besti - 1) + 0.5) / M;
  const double hi = 0.5 * (std::min(M - 1, besti + 1) + 0.5) / M;
  MinResult r = golden_min([&](double d) { return -k_objective(P, d); }, lo, hi, 1e-14, 300);
  return std::max(best, -r.fx);
}

BoundSet stability_bounds(const Params& P) {
  BoundSet b{};
  b.S_ns = sobolev_sharp_constant(P);
  b.K_ns = K_constant(P);
  const double sign_term = std::min(std::pow(2.0, (P.n + 2.0 * P.s) / P.n) - 2.0, 1.0);
  const double k_small = std::min(b.K_ns, sign_term);
  b.hls_bound = 0.5 * k_small;
  b.sob_bound = 0.25 * b.S_ns * k_small;
  b.koenig_upper = b.S_ns * 4.0 * P.s / (P.n + 2.0 + 2.0 * P.s);
  if (!(b.sob_bound < b.koenig_upper))
    throw std::logic_error("stability_bounds: expected sob_bound < koenig_upper");
  return b;
}

double sphere_hls_constant(const Params& P) {
  const double n = P.n, s = P.s;
  const double lg = -0.5 * (n - 2.0 * s) * std::log(M_PI) +
                    (2.0 * s / n) * (log_gamma(0.5 * n) - log_gamma(n)) +
                    log_gamma(0.5 * n + s) - log_gamma(s);
  return std::exp(lg);
}

TraceConstants trace_constants(const Params& P) {
  if (!(P.s > 0.5))
    throw std::domain_error("trace_constants: requires s > 1/2");
  const double n = P.n, s = P.s;
  const double common = (2.0 * s - 1.0) / (n - 1.0) * (log_gamma(n - 1.0) - log_gamma(0.5 * (n - 1.0)));
  TraceConstants t{};
  t.C_ns = std::exp(-s * std::log(4.0 * M_PI) + log_gamma(s - 0.5) - log_gamma(0.5 * n + s - 1.0) +
                    log_gamma(0.5 * n - s) - log_gamma(s) + common);
  t.D_ns = std::exp(-s * std::log(4.0 * M_PI) + log_gamma(0.5 * (n - 2.0 * s)) -
                    log_gamma(0.5 * (n - 2.0 + 2.0 * s)) + common + log_gamma(s - 0.5) -
                    log_gamma(s));
  if (P.n >= 3) {
    const Params Pb(P.n - 1, P.s - 0.5);
    const double K = K_constant(Pb);
    const double sign_term =
        std::min(std::pow(2.0, (n - 2.0 + 2.0 * s) / (n - 1.0)) - 2.0, 1.0);
    const double k_small = std::min(K, sign_term);
    t.flat_bound = 0.25 * t.C_ns * k_small;
    t.sphere_bound = 0.25 * t.D_ns * k_small;
  } else {
    t.flat_bound = t.sphere_bound = std::nan("");
  }
  return t;
}

double riesz_const(const Params& P) {
  const double n = P.n, s = P.s;
  return std::exp(log_gamma(0.5 * (n - 2.0 * s)) - s * std::log(4.0) -
                  0.5 * n * std::log(M_PI) - log_gamma(s));
}

}  // namespace hlslab
