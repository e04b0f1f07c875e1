#include "hlslab/trace.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "hlslab/corpus.hpp"
#include "hlslab/kernel.hpp"
#include "hlslab/quadrature.hpp"
#include "hlslab/riesz.hpp"
#include "hlslab/special.hpp"

namespace hlslab {

namespace {

constexpr int kBoundaryN = 256;
constexpr int kNormalLevels = 64;
constexpr double kTMin = 1e-5, kTMax = 1e4;

void require_trace(const Params& P) {
  if (!(P.s > 0.5)) throw std::domain_error("trace: requires s > 1/2");
  if (P.n < 3) throw std::domain_error("trace: requires n >= 3");
}

Params boundary_params(const Params& P) { return Params(P.n - 1, P.s - 0.5); }

// Geometric panels from the far end toward `toward_a ? a : b`, stopping once
// the panel length reaches floor_len (the scale on which f stops varying);
// one closing panel covers the remainder.
template <class F>
double panel_floor(const F& f, double a, double b, bool toward_a, double floor_len,
                   int order) {
  double acc = 0.0;
  double len = b - a;
  while (len > floor_len) {
    const double half = 0.5 * len;
    if (toward_a)
      acc += gauss_integrate(f, a + half, a + len, order);
    else
      acc += gauss_integrate(f, b - len, b - half, order);
    len = half;
  }
  if (toward_a)
    acc += gauss_integrate(f, a, a + len, order);
  else
    acc += gauss_integrate(f, b - len, b, order);
  return acc;
}

// Exact cell weight: integral of the azimuthally averaged extension kernel
// against rho^{n-2} d rho over the log-cell of the staggered node rho_j,
// resolving the width-t peak at rho = r_i that a point sample would miss.
double tensor_cell(const Params& P, double r, double t, double ulo, double uhi,
                   double uref) {
  const double e = P.n - P.s;
  const int d = P.n - 1;
  const double rn = std::pow(r, P.n - 1.0);
  // x = log rho - log r; gap = (rho - r)^2 + t^2 cancellation-free via expm1
  auto f = [&](double x) {
    const double diff = r * std::expm1(x);
    const double ex = std::exp(x);
    return rn * std::exp((P.n - 1.0) * x) *
           angular_mean_gap(d, diff * diff + t * t, 2.0 * r * r * ex, e);
  };
  const double a = ulo - uref, b = uhi - uref;  // uref = log r
  const double len = b - a;
  const double w = std::max(t / r, 1e-14);
  if (a >= 0.0 || b <= 0.0) {
    const double dist = a >= 0.0 ? a : -b;
    if (dist >= len || w >= len)
      return gauss_integrate(f, a, b, dist >= 2.0 * len ? 2 : 4);
    return panel_floor(f, a, b, a >= 0.0, w, 4);
  }
  return panel_floor(f, a, 0.0, false, w, 4) + panel_floor(f, 0.0, b, true, w, 4);
}

std::string tensor_cache_path(const Params& P, const RadialGrid& g) {
  const char* dir = std::getenv("HLSLAB_CACHE");
  if (!dir || !*dir) return {};
  std::uint64_t sbits;
  std::memcpy(&sbits, &P.s, 8);
  std::ostringstream os;
  os << dir << "/ttab_n" << P.n << "_s" << std::hex << sbits << "_g" << g.hash()
     << "_T" << std::dec << kNormalLevels << ".bin";
  return os.str();
}

bool load_tensor(const std::string& path, std::vector<double>& out, std::size_t count) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) return false;
  std::int32_t ver = 0;
  out.resize(count);
  const bool ok = std::fread(&ver, 4, 1, fp) == 1 && ver == 2 &&
                  std::fread(out.data(), 8, count, fp) == count;
  std::fclose(fp);
  return ok;
}

void store_tensor(const std::string& path, const std::vector<double>& data) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) return;  // best-effort
  const std::int32_t ver = 2;
  std::fwrite(&ver, 4, 1, fp);
  std::fwrite(data.data(), 8, data.size(), fp);
  std::fclose(fp);
}

}  // namespace

double trace_const(const Params& P) {
  require_trace(P);
  return std::exp(log_gamma(0.5 * (P.n - P.s)) - log_gamma(0.5 * P.s)) /
         (std::pow(2.0, P.s) * std::pow(M_PI, 0.5 * P.n));
}

double HalfGrid2D::l2_sq() const {
  const int N = bgrid->N;
  double acc = 0.0;
  for (std::size_t k = 0; k < tmag.size(); ++k) {
    double row = 0.0;
    for (int i = 0; i < N; ++i) {
      const double val = v[k * N + i];
      row += bgrid->w[i] * val * val;
    }
    acc += 2.0 * wt[k] * row;
  }
  return sphere_area(P.n - 2) * acc;
}

std::string halfgrid_to_csv(const HalfGrid2D& e) {
  std::ostringstream os;
  os.precision(17);
  os << "r,t,value\n";
  const int N = e.bgrid->N;
  for (std::size_t k = 0; k < e.tmag.size(); ++k)
    for (int i = 0; i < N; ++i)
      os << e.bgrid->r[i] << "," << e.tmag[k] << "," << e.v[k * N + i] << "\n";
  return os.str();
}

const TraceKernel& TraceKernel::get(const Params& P) {
  require_trace(P);
  static std::map<std::pair<int, double>, TraceKernel> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({P.n, P.s});
  if (it != cache.end()) return it->second;

  TraceKernel K{P, lab_grid(P.n - 1, kBoundaryN), {}, {}, {}};
  const int T = kNormalLevels, N = kBoundaryN;
  const double dtau = std::log(kTMax / kTMin) / (T - 1);
  K.tmag.resize(T);
  K.wt.resize(T);
  for (int k = 0; k < T; ++k) {
    K.tmag[k] = kTMin * std::exp(k * dtau);
    K.wt[k] = K.tmag[k] * dtau * ((k == 0 || k == T - 1) ? 0.5 : 1.0);
  }
  // untabulated sliver [0, tmin]: the L^2-in-x' profile grows like t^{2s-2}
  // for s < 1 (flat for s >= 1), so int_0^tmin F = tmin F(tmin)/(2s-1)
  K.wt[0] += P.s < 1.0 ? kTMin / (2.0 * P.s - 1.0) : kTMin;

  const std::size_t count = static_cast<std::size_t>(T) * N * N;
  const std::string path = tensor_cache_path(P, *K.bgrid);
  if (path.empty() || !load_tensor(path, K.k, count)) {
    K.k.resize(count);
    const auto& r = K.bgrid->r;
    const auto& rs = K.bgrid->rs;
    const double dt = K.bgrid->dt;
#pragma omp parallel for schedule(dynamic, 1)
    for (int k = 0; k < T; ++k) {
      const double t = K.tmag[k];
      for (int i = 0; i < N; ++i) {
        const double uref = std::log(r[i]);
        for (int j = 0; j < N; ++j) {
          const double uc = std::log(rs[j]);
          K.k[(static_cast<std::size_t>(k) * N + i) * N + j] =
              tensor_cell(P, r[i], t, uc - 0.5 * dt, uc + 0.5 * dt, uref);
        }
      }
    }
    if (!path.empty()) store_tensor(path, K.k);
  }
  return cache.emplace(std::make_pair(P.n, P.s), std::move(K)).first->second;
}

HalfGrid2D extension_flat(const Params& P, const RadialFn& g) {
  const TraceKernel& K = TraceKernel::get(P);
  if (g.grid != K.bgrid)
    throw std::invalid_argument("extension_flat: g not on the trace boundary grid");
  const int N = K.bgrid->N, T = static_cast<int>(K.tmag.size());
  HalfGrid2D out{P, K.bgrid, K.tmag, K.wt, {}};
  out.v.assign(static_cast<std::size_t>(T) * N, 0.0);
  const double c = trace_const(P) * sphere_area(P.n - 2);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < T; ++k)
    for (int i = 0; i < N; ++i) {
      const double* row = &K.k[(static_cast<std::size_t>(k) * N + i) * N];
      double acc = 0.0;
      for (int j = 0; j < N; ++j) acc += g.vs[j] * row[j];
      out.v[static_cast<std::size_t>(k) * N + i] = c * acc;
    }
  return out;
}

double trace_ab_ratio(const Params& P, const RadialFn& g) {
  const double A = extension_flat(P, g).l2_sq();
  const KernelTable& Kb = lab_kernel(boundary_params(P), kBoundaryN);
  const double B = hls_form(g, g, Kb);
  if (B == 0.0) throw std::domain_error("trace_ab_ratio: degenerate boundary form");
  return A / B;
}

double trace_equivalence_check(const Params& P) {
  const Params Pb = boundary_params(P);
  const auto grid = TraceKernel::get(P).bgrid;
  const auto corpus = make_hls_corpus(Pb, 10, 424242);
  double kappa = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const RadialFn g = realize(corpus[i], grid);
    const double ratio = trace_ab_ratio(P, g);
    if (i == 0) {
      kappa = ratio;
      continue;
    }
    worst = std::max(worst, std::abs(ratio / kappa - 1.0));
  }
  return worst;
}

double extremal_trace_equality(const Params& P, double b) {
  const Params Pb = boundary_params(P);
  const auto grid = TraceKernel::get(P).bgrid;
  const RadialFn gb(grid, [&](double r) {
    return bubble_value(Pb, BubbleFlavor::Hls, b, 1.0, r);
  });
  const double denom = lp_norm(gb, Pb.hls_exp());
  return extension_flat(P, gb).l2_sq() / (denom * denom);
}

StabilityReport trace_stability_flat(const Params& P, const RadialFn& g,
                                     const std::string& case_id) {
  require_trace(P);
  return hls_stability(g, lab_kernel(boundary_params(P), kBoundaryN), case_id);
}

// ---------------- sphere side ----------------

double SphereExtension::l2_sq() const {
  const std::size_t A = cosal.size();
  double acc = 0.0;
  for (std::size_t j = 0; j < R.size(); ++j) {
    double ang = 0.0;
    for (std::size_t a = 0; a < A; ++a) {
      const double val = v[j * A + a];
      ang += wal[a] * val * val;
    }
    acc += wR[j] * std::pow(R[j], P.n - 1) * ang;
  }
  return acc;
}

SphereExtension extension_sphere(const Params& P, const ZonalSphereFn& g) {
  require_trace(P);
  if (g.P.n != P.n - 1)
    throw std::invalid_argument("extension_sphere: g must be zonal on S^{n-1}");
  SphereExtension out{P, {}, {}, {}, {}, {}};
  const int J = 200, A = 32;
  const double lmin = std::log(1e-3), lmax = std::log(1e3);
  const double dl = (lmax - lmin) / J;
  out.R.resize(J);
  out.wR.resize(J);
  for (int j = 0; j < J; ++j) {
    out.R[j] = std::exp(lmin + (j + 0.5) * dl);  // staggered: never hits R = 1
    out.wR[j] = out.R[j] * dl;
  }
  const GaussRule& rule = gauss_legendre_cached(A);
  out.cosal.resize(A);
  out.wal.resize(A);
  const double ca = sphere_area(P.n - 2);
  for (int a = 0; a < A; ++a) {
    out.cosal[a] = rule.x[a];
    out.wal[a] = ca * rule.w[a] * std::pow(1.0 - rule.x[a] * rule.x[a],
                                           0.5 * (P.n - 3));
  }
  out.v.assign(static_cast<std::size_t>(J) * A, 0.0);
  const double c = trace_const(P);
  const double e = P.n - P.s;
  const int d = P.n - 1;
#pragma omp parallel for schedule(dynamic, 1)
  for (int j = 0; j < J; ++j) {
    const double R = out.R[j];
    const double d1 = std::abs(1.0 - R);
    for (int a = 0; a < A; ++a) {
      const double alpha = std::acos(out.cosal[a]), sal = std::sin(alpha);
      double acc = 0.0;
      for (std::size_t q = 0; q < g.theta.size(); ++q) {
        const double sh = std::sin(0.5 * (alpha - g.theta[q]));
        const double st = std::sqrt(1.0 - g.costh[q] * g.costh[q]);
        acc += g.wq[q] * g.v[q] *
               angular_mean_gap(d, d1 * d1 + 4.0 * R * sh * sh, 2.0 * R * sal * st, e);
      }
      out.v[static_cast<std::size_t>(j) * A + a] = c * acc;
    }
  }
  return out;
}

namespace {

// int_0^inf f(R, |1-R|) R^{n-1} dR for f with an integrable
// |1-R|^{2s-2}-type singularity at R = 1 and f ~ const * R^{-2(n-s)} at
// infinity; |1-R| is handed to f exactly (from the exponential substitution)
// so gap-based kernels stay cancellation-free.
template <class F>
double radial_integral_split(const Params& P, const F& f) {
  const double n1 = P.n - 1;
  auto meas = [&](double R, double d1) { return f(R, d1) * std::pow(R, n1); };
  double acc = gauss_integrate_panels(
      [&](double R) { return meas(R, 1.0 - R); }, 0.0, 0.5, 8, 16);
  // [1/2, 1): R = 1 - e^{-u}
  acc += gauss_integrate_panels(
      [&](double u) {
        const double em = std::exp(-u);
        return meas(1.0 - em, em) * em;
      },
      std::log(2.0), 36.0, 30, 12);
  // (1, 2]: R = 1 + e^{-v}
  acc += gauss_integrate_panels(
      [&](double v) {
        const double em = std::exp(-v);
        return meas(1.0 + em, em) * em;
      },
      0.0, 36.0, 30, 12);
  // [2, Rmax]: R = e^t
  const double Rmax = 1e8;
  acc += gauss_integrate_panels(
      [&](double t) {
        const double R = std::exp(t);
        return meas(R, R - 1.0) * R;
      },
      std::log(2.0), std::log(Rmax), 24, 16);
  // tail, assuming f ~ c R^{-2(n-s)}
  acc += f(Rmax, Rmax - 1.0) * std::pow(Rmax, P.n) / (P.n - 2.0 * P.s);
  return acc;
}

double sphere_denominator(const Params& P, const ZonalSphereFn& g) {
  const double pp = 2.0 * (P.n - 1) / (P.n - 2.0 + 2.0 * P.s);
  const double nrm = g.lp_norm(pp);
  if (!(nrm > 0.0)) throw std::domain_error("sphere trace ratio: zero boundary data");
  return nrm * nrm;
}

}  // namespace

double sphere_trace_ratio(const Params& P, const ZonalSphereFn& g) {
  require_trace(P);
  if (g.P.n != P.n - 1)
    throw std::invalid_argument("sphere_trace_ratio: g must be zonal on S^{n-1}");
  const double c = trace_const(P);
  const double e = P.n - P.s;
  const int d = P.n - 1;
  // gap = (1-R)^2 + 4 R sin^2((alpha - theta)/2), cancellation-free
  auto value = [&](double R, double d1, double alpha, double sal) {
    double acc = 0.0;
    for (std::size_t q = 0; q < g.theta.size(); ++q) {
      const double sh = std::sin(0.5 * (alpha - g.theta[q]));
      const double st = std::sqrt(1.0 - g.costh[q] * g.costh[q]);
      acc += g.wq[q] * g.v[q] *
             angular_mean_gap(d, d1 * d1 + 4.0 * R * sh * sh, 2.0 * R * sal * st, e);
    }
    return c * acc;
  };
  const int A = 16;
  const GaussRule& rule = gauss_legendre_cached(A);
  const double ca = sphere_area(P.n - 2);
  double total = 0.0;
  for (int a = 0; a < A; ++a) {
    const double cal = rule.x[a];
    const double alpha = std::acos(cal), sal = std::sin(alpha);
    const double wal = ca * rule.w[a] * std::pow(1.0 - cal * cal, 0.5 * (P.n - 3));
    total += wal * radial_integral_split(P, [&](double R, double d1) {
      const double val = value(R, d1, alpha, sal);
      return val * val;
    });
  }
  return total / sphere_denominator(P, g);
}

double extremal_trace_sphere_equality(const Params& P) {
  require_trace(P);
  const double c = trace_const(P);
  const double e = P.n - P.s;
  const double area = sphere_area(P.n - 1);
  auto profile = [&](double R, double d1) {
    const double val = c * area * angular_mean_gap(P.n, d1 * d1, 2.0 * R, e);
    return val * val;
  };
  const double A = area * radial_integral_split(P, profile);
  return A / std::pow(area, (P.n - 2.0 + 2.0 * P.s) / (P.n - 1.0));
}

}  // namespace hlslab
