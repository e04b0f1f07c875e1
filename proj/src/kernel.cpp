#include "hlslab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hlslab/quadrature.hpp"
#include "hlslab/special.hpp"

namespace hlslab {

double angular_mean(int d, double A, double B, double e) {
  if (!(A > 0.0) || B < 0.0 || B > A)
    throw std::domain_error("angular_mean: need 0 <= B <= A, A > 0");
  return angular_mean_gap(d, A - B, B, e);
}

double angular_mean_gap(int d, double gap, double B, double e) {
  if (d < 1) throw std::domain_error("angular_mean: dimension must be >= 1");
  if (!(gap > 0.0) || B < 0.0)
    throw std::domain_error("angular_mean: need gap > 0, B >= 0");
  if (d == 1)
    return 0.5 * (std::pow(gap, -0.5 * e) + std::pow(gap + 2.0 * B, -0.5 * e));
  // A - B cos(phi) = gap + 2 B sin^2(phi/2), evaluated cancellation-free
  auto f = [d, gap, B, e](double phi) {
    const double sh = std::sin(0.5 * phi);
    return std::pow(std::sin(phi), d - 2) *
           std::pow(gap + 2.0 * B * sh * sh, -0.5 * e);
  };
  double integral;
  if (B <= gap) {  // equivalent to B <= A/2: no sharp peak at phi = 0
    integral = gauss_integrate(f, 0.0, M_PI, 64);
  } else {
    // integrand peaks at phi = 0 with width ~ sqrt(2 gap / B); refine toward 0
    const double width = std::sqrt(2.0 * gap / B);
    const int K =
        std::clamp(static_cast<int>(std::ceil(std::log2(M_PI / width))) + 4, 6, 64);
    double hi = M_PI;
    integral = 0.0;
    for (int k = 0; k < K; ++k) {
      const double lo = 0.5 * hi;
      integral += gauss_integrate(f, lo, hi, 24);
      hi = lo;
    }
    integral += gauss_integrate(f, 0.0, hi, 24);
  }
  return sphere_area(d - 2) / sphere_area(d - 1) * integral;
}

double angular_kernel(const Params& P, double r, double rho) {
  if (r < 0.0 || rho < 0.0) throw std::domain_error("angular_kernel: negative radius");
  if (r == 0.0 && rho == 0.0)
    throw std::domain_error("angular_kernel: both arguments vanish");
  const double lambda = P.lambda();
  const double rmax = std::max(r, rho), rmin = std::min(r, rho);
  if (rmin == 0.0) return std::pow(rmax, -lambda);
  if (r == rho && P.s <= 0.5)
    throw std::domain_error("angular_kernel: diagonal singularity for s <= 1/2");
  const double t = rmin / rmax;
  return std::pow(rmax, -lambda) * angular_mean(P.n, 1.0 + t * t, 2.0 * t, lambda);
}

namespace {

std::string cache_path(const Params& P, const RadialGrid& g) {
  const char* dir = std::getenv("HLSLAB_CACHE");
  if (!dir || !*dir) return {};
  std::uint64_t sbits;
  static_assert(sizeof(double) == sizeof(std::uint64_t));
  std::memcpy(&sbits, &P.s, 8);
  std::ostringstream os;
  os << dir << "/ktab_n" << P.n << "_s" << std::hex << sbits << "_g" << g.hash() << ".bin";
  return os.str();
}

bool load_profile(const std::string& path, const Params& P, const RadialGrid& g,
                  std::vector<double>& out) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) return false;
  std::int32_t ver = 0, n = 0, N = 0;
  double s = 0.0;
  bool ok = std::fread(&ver, 4, 1, fp) == 1 && ver == 2 &&
            std::fread(&n, 4, 1, fp) == 1 && std::fread(&s, 8, 1, fp) == 1 &&
            std::fread(&N, 4, 1, fp) == 1 && n == P.n && s == P.s && N == g.N;
  if (ok) {
    out.resize(2 * g.N - 1);
    ok = std::fread(out.data(), 8, out.size(), fp) == out.size();
  }
  std::fclose(fp);
  return ok;
}

void store_profile(const std::string& path, const Params& P, const RadialGrid& g,
                   const std::vector<double>& prof) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) return;  // cache is best-effort
  const std::int32_t ver = 2, n = P.n, N = g.N;
  std::fwrite(&ver, 4, 1, fp);
  std::fwrite(&n, 4, 1, fp);
  std::fwrite(&P.s, 8, 1, fp);
  std::fwrite(&N, 4, 1, fp);
  std::fwrite(prof.data(), 8, prof.size(), fp);
  std::fclose(fp);
}

// k(r, rho) = r^{-lambda} g(tau), tau = log rho - log r:
//   g(tau) = e^{-lambda max(tau, 0)} <|e - t omega|^{-lambda}>_omega, t = e^{-|tau|}
// Behaves like |tau|^{2s-1} (log for s = 1/2) at tau = 0; always integrable.
double profile_fn(int n, double lambda, double tau) {
  const double a = std::abs(tau);
  const double t = std::exp(-a);
  const double omt = -std::expm1(-a);  // 1 - t, no cancellation
  return std::exp(-lambda * std::max(tau, 0.0)) *
         angular_mean_gap(n, omt * omt, 2.0 * t, lambda);
}

// Integral over [a, b] of f with an integrable singularity at the endpoint
// touching tau = 0 (if any): geometric panel refinement toward it.
template <class F>
double panel_toward(const F& f, double a, double b, bool toward_a) {
  double acc = 0.0;
  double len = b - a;
  const double lmin = len * 0x1p-42;
  while (len > lmin) {
    const double half = 0.5 * len;
    if (toward_a)
      acc += gauss_integrate(f, a + half, a + len, 8);
    else
      acc += gauss_integrate(f, b - len, b - half, 8);
    len = half;
  }
  // leftover sliver ~ len^{2s} of the innermost panel: negligible
  return acc;
}

void fill_profile(const Params& P, const RadialGrid& g, std::vector<double>& prof,
                  bool parallel) {
  const int N = g.N;
  const double lambda = P.lambda();
  const double dt = g.dt;
  prof.resize(2 * N - 1);
  // triangle-weighted cell average (the exact weight of the trapezoid double
  // sum on a dt x dt cell), split at the weight kink and at tau = 0
  auto one = [&](int idx) {
    const int m = idx - (N - 1);
    const double tau0 = (m + 0.5) * dt;
    auto f = [&](double tau) {
      return (1.0 - std::abs(tau - tau0) / dt) * profile_fn(P.n, lambda, tau);
    };
    double acc = 0.0;
    for (int half = 0; half < 2; ++half) {
      const double a = half == 0 ? tau0 - dt : tau0;
      const double b = half == 0 ? tau0 : tau0 + dt;
      if (a < 0.0 && b > 0.0) {
        acc += panel_toward(f, a, 0.0, false) + panel_toward(f, 0.0, b, true);
      } else {
        const double dist = std::min(std::abs(a), std::abs(b));
        if (dist > b - a)
          acc += gauss_integrate(f, a, b, 8);
        else
          acc += panel_toward(f, a, b, std::abs(a) < std::abs(b));
      }
    }
    prof[idx] = acc / dt;
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (int idx = 0; idx < 2 * N - 1; ++idx) one(idx);
  } else {
    for (int idx = 0; idx < 2 * N - 1; ++idx) one(idx);
  }
}

}  // namespace

KernelTable KernelTable::build(const Params& P, std::shared_ptr<const RadialGrid> grid) {
  KernelTable K{P, std::move(grid), {}};
  const std::string path = cache_path(P, *K.grid);
  if (!path.empty() && load_profile(path, P, *K.grid, K.profile)) return K;
  fill_profile(P, *K.grid, K.profile, true);
  if (!path.empty()) store_profile(path, P, *K.grid, K.profile);
  return K;
}

KernelTable KernelTable::build_serial(const Params& P,
                                      std::shared_ptr<const RadialGrid> grid) {
  KernelTable K{P, std::move(grid), {}};
  fill_profile(P, *K.grid, K.profile, false);
  return K;
}

}  // namespace hlslab
