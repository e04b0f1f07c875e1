#include "hlslab/grid2d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hlslab/optim.hpp"
#include "hlslab/quadrature.hpp"
#include "hlslab/special.hpp"

namespace hlslab {

GridFn2D::GridFn2D(Params p, double halfwidth, int cells)
    : P(p), L(halfwidth), N(cells), v(static_cast<std::size_t>(cells) * cells, 0.0) {
  if (P.n != 2) throw std::domain_error("GridFn2D: planar module requires n = 2");
  if (N < 8 || !(L > 0.0)) throw std::domain_error("GridFn2D: bad grid geometry");
}

double GridFn2D::lp_norm(double p) const {
  if (!(p >= 1.0)) throw std::domain_error("GridFn2D::lp_norm: p must be >= 1");
  double acc = 0.0;
  for (double x : v) acc += std::pow(std::abs(x), p);
  return std::pow(h() * h() * acc, 1.0 / p);
}

GridFn2D bubble2d(const GridFn2D& like, double ax, double ay, double b, double c) {
  const double e = 0.5 * (like.P.n + 2.0 * like.P.s);
  return GridFn2D(like.P, like.L, like.N, [&](double X, double Y) {
    const double d2 = (X - ax) * (X - ax) + (Y - ay) * (Y - ay);
    return c * std::pow(2.0 * b / (b * b + d2), e);
  });
}

namespace {

// cells ordered by squared distance of their center offset from the grid
// center, ties by index; depends only on N
const std::vector<int>& center_order(int N) {
  static std::map<int, std::vector<int>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& ord = cache[N];
  if (ord.empty()) {
    ord.resize(static_cast<std::size_t>(N) * N);
    std::iota(ord.begin(), ord.end(), 0);
    std::vector<std::int64_t> key(ord.size());
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const std::int64_t di = 2 * i + 1 - N, dj = 2 * j + 1 - N;
        key[i * N + j] = di * di + dj * dj;
      }
    std::stable_sort(ord.begin(), ord.end(),
                     [&key](int a, int b) { return key[a] < key[b]; });
  }
  return ord;
}

}  // namespace

GridFn2D decreasing_rearrangement(const GridFn2D& f) {
  for (double x : f.v)
    if (x < 0.0)
      throw std::domain_error("decreasing_rearrangement: negative input");
  std::vector<double> sorted = f.v;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  GridFn2D out(f.P, f.L, f.N);
  const auto& ord = center_order(f.N);
  for (std::size_t k = 0; k < ord.size(); ++k) out.v[ord[k]] = sorted[k];
  return out;
}

GridFn2D conformal_U(const GridFn2D& f, double p, double* norm_err) {
  if (!(p > 1.0)) throw std::domain_error("conformal_U: p must exceed 1");
  const int N = f.N;
  const double hh = f.h(), L = f.L;
  auto interp = [&](double px, double py) -> double {
    const double u = (px + L) / hh - 0.5, w = (py + L) / hh - 0.5;
    const int i0 = static_cast<int>(std::floor(u)), j0 = static_cast<int>(std::floor(w));
    const double fu = u - i0, fw = w - j0;
    double acc = 0.0;
    for (int di = 0; di <= 1; ++di)
      for (int dj = 0; dj <= 1; ++dj) {
        const int i = i0 + di, j = j0 + dj;
        if (i < 0 || i >= N || j < 0 || j >= N) continue;
        acc += (di ? fu : 1.0 - fu) * (dj ? fw : 1.0 - fw) * f.at(i, j);
      }
    return acc;
  };
  const double np = f.P.n / p;
  GridFn2D out(f.P, L, N);
  // T = stereographic conjugate of the quarter-turn (a,b,c) -> (a,c,-b);
  // |det DT| = (2/|x+e_2|^2)^n via 1+|Tx|^2 = 2(1+|x|^2)/|x+e_2|^2, so the
  // prefactor below makes U an exact L^p isometry up to interpolation error.
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const double X = f.x(i), Y = f.x(j);
      const double denom = X * X + (Y + 1.0) * (Y + 1.0);
      if (denom <= 0.0) continue;
      const double px = 2.0 * X / denom, py = (X * X + Y * Y - 1.0) / denom;
      const double fv = interp(px, py);
      if (fv != 0.0) out.at(i, j) = std::pow(2.0 / denom, np) * fv;
    }
  if (norm_err) {
    const double n0 = f.lp_norm(p), n1 = out.lp_norm(p);
    *norm_err = n0 > 0.0 ? std::abs(n1 - n0) / n0 : 0.0;
  }
  return out;
}

GridFn2D polarize(const GridFn2D& f, const Halfplane& H) {
  const int N = f.N;
  const bool diag = H.kind == HalfplaneKind::DiagMain || H.kind == HalfplaneKind::DiagAnti;
  if (std::abs(H.m) >= N)
    throw std::invalid_argument("polarize: halfplane boundary misses the grid");
  const double c = diag ? H.m * f.h() : 0.5 * H.m * f.h();
  // favored side: the one containing the origin (either side for c = 0)
  const double fav = c >= 0.0 ? -1.0 : 1.0;
  GridFn2D out = f;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double d;
      int ip, jp;
      switch (H.kind) {
        case HalfplaneKind::X:
          d = f.x(i) - c;
          ip = H.m + N - 1 - i;
          jp = j;
          break;
        case HalfplaneKind::Y:
          d = f.x(j) - c;
          ip = i;
          jp = H.m + N - 1 - j;
          break;
        case HalfplaneKind::DiagMain:
          d = f.x(i) - f.x(j) - c;
          ip = j + H.m;
          jp = i - H.m;
          break;
        default:  // DiagAnti
          d = f.x(i) + f.x(j) - c;
          ip = H.m + N - 1 - j;
          jp = H.m + N - 1 - i;
          break;
      }
      if (d * fav >= 0.0) continue;  // favored or on the boundary
      if (ip < 0 || ip >= N || jp < 0 || jp >= N)
        throw std::logic_error("polarize: unfavored cell without in-box partner");
      const double a = f.at(ip, jp), b = f.at(i, j);
      out.at(ip, jp) = std::max(a, b);
      out.at(i, j) = std::min(a, b);
    }
  return out;
}

namespace {

struct WKey {
  int N;
  double h, lambda;
  bool operator<(const WKey& o) const {
    return std::tie(N, h, lambda) < std::tie(o.N, o.h, o.lambda);
  }
};

const std::vector<double>& weight_table(int N, double h, double lambda) {
  static std::map<WKey, std::vector<double>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& W = cache[WKey{N, h, lambda}];
  if (W.empty()) {
    W.resize(static_cast<std::size_t>(N) * N);
    const double h4 = h * h * h * h;
    for (int di = 0; di < N; ++di)
      for (int dj = 0; dj < N; ++dj) {
        if (di == 0 && dj == 0) continue;
        W[di * N + dj] = h4 * std::pow(h * std::sqrt(double(di) * di + double(dj) * dj),
                                       -lambda);
      }
    // exact integral of |z|^{-lambda} over the square cell centered at 0
    const double a = 0.5 * h;
    const double angular = gauss_integrate(
        [lambda](double phi) { return std::pow(std::cos(phi), lambda - 2.0); }, 0.0,
        0.25 * M_PI, 64);
    W[0] = h * h * 8.0 / (2.0 - lambda) * std::pow(a, 2.0 - lambda) * angular;
  }
  return W;
}

double hls2d_impl(const GridFn2D& f, const GridFn2D& g, bool parallel) {
  if (f.N != g.N || f.L != g.L || !(f.P == g.P))
    throw std::invalid_argument("hls2d: mismatched grids");
  const int N = f.N;
  const auto& W = weight_table(N, f.h(), f.P.lambda());
  std::vector<double> row(N);
  auto one = [&](int i1) {
    double acc = 0.0;
    for (int j1 = 0; j1 < N; ++j1) {
      const double fv = f.at(i1, j1);
      if (fv == 0.0) continue;
      double inner = 0.0;
      for (int i2 = 0; i2 < N; ++i2) {
        const int di = std::abs(i1 - i2) * N;
        const double* Wr = &W[di];
        const double* gr = &g.v[i2 * N];
        double s = 0.0;
        for (int j2 = 0; j2 < N; ++j2) s += Wr[std::abs(j1 - j2)] * gr[j2];
        inner += s;
      }
      acc += fv * inner;
    }
    row[i1] = acc;
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i1 = 0; i1 < N; ++i1) one(i1);
  } else {
    for (int i1 = 0; i1 < N; ++i1) one(i1);
  }
  double total = 0.0;
  for (int i1 = 0; i1 < N; ++i1) total += row[i1];
  return total;
}

}  // namespace

double hls2d(const GridFn2D& f, const GridFn2D& g) { return hls2d_impl(f, g, true); }
double hls2d_serial(const GridFn2D& f, const GridFn2D& g) {
  return hls2d_impl(f, g, false);
}

std::string FlowTrace::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "step,lp_norm,hls_value,dist_rel,dist_to_h\n";
  for (const FlowRecord& r : records)
    os << r.step << "," << r.lp_norm << "," << r.hls_value << "," << r.dist_rel << ","
       << r.dist_to_h << "\n";
  return os.str();
}

namespace {

double fit_norm(const GridFn2D& f, const GridFn2D& B, double c, double p) {
  double acc = 0.0;
  for (std::size_t k = 0; k < f.v.size(); ++k)
    acc += std::pow(std::abs(f.v[k] - c * B.v[k]), p);
  return std::pow(f.h() * f.h() * acc, 1.0 / p);
}

}  // namespace

Fit2D manifold_distance_2d(const GridFn2D& f, int restarts, std::uint64_t seed) {
  const double p = f.P.hls_exp();
  const double fnorm = f.lp_norm(p);
  Fit2D best;
  best.dist = fnorm;
  best.c = 0.0;
  if (!(fnorm > 0.0)) return best;

  int gi = 0, gj = 0;
  double gmax = -1.0;
  for (int i = 0; i < f.N; ++i)
    for (int j = 0; j < f.N; ++j)
      if (std::abs(f.at(i, j)) > gmax) {
        gmax = std::abs(f.at(i, j));
        gi = i;
        gj = j;
      }

  std::mt19937_64 eng(seed * 0x9e3779b97f4a7c15ull + 1);
  auto refine = [&](double ax, double ay, double b, double c0) {
    double c = c0;
    auto cost_c = [&](const GridFn2D& B) {
      const double cmax = 2.5 * fnorm / std::max(B.lp_norm(p), 1e-300);
      MinResult r = brent_min([&](double cc) { return fit_norm(f, B, cc, p); }, -cmax,
                              cmax, 1e-9, 80);
      c = r.x;
      return r.fx;
    };
    double wa = f.L / 3.0, wb = 1.2;
    double cur = cost_c(bubble2d(f, ax, ay, b, 1.0));
    for (int round = 0; round < 6; ++round) {
      MinResult rb = golden_min(
          [&](double lb) {
            GridFn2D B = bubble2d(f, ax, ay, std::exp(lb), 1.0);
            return cost_c(B);
          },
          std::log(b) - wb, std::log(b) + wb, 1e-7, 40);
      b = std::exp(rb.x);
      MinResult rx = golden_min(
          [&](double a) { return cost_c(bubble2d(f, a, ay, b, 1.0)); }, ax - wa,
          ax + wa, 1e-7, 40);
      ax = rx.x;
      MinResult ry = golden_min(
          [&](double a) { return cost_c(bubble2d(f, ax, a, b, 1.0)); }, ay - wa,
          ay + wa, 1e-7, 40);
      ay = ry.x;
      cur = cost_c(bubble2d(f, ax, ay, b, 1.0));
      wa *= 0.45;
      wb *= 0.6;
    }
    if (cur < best.dist) best = {cur, ax, ay, b, c, true};
  };

  const double e = 0.5 * (f.P.n + 2.0 * f.P.s);
  for (int r = 0; r < restarts; ++r) {
    double ax, ay, b;
    if (r == 0) {
      ax = f.x(gi);
      ay = f.x(gj);
      b = 1.0;
    } else if (r == 1) {
      ax = ay = 0.0;
      b = 1.0;
    } else {
      std::uniform_real_distribution<double> ua(-0.5 * f.L, 0.5 * f.L), ub(-1.2, 1.2);
      ax = f.x(gi) + 0.2 * ua(eng);
      ay = f.x(gj) + 0.2 * ua(eng);
      b = std::exp(ub(eng));
    }
    const double c0 = gmax / std::pow(2.0 / b, e);
    refine(ax, ay, b, c0);
  }
  return best;
}

bool lipschitz_distance_check(const GridFn2D& f, const GridFn2D& g, double slack) {
  const double p = f.P.hls_exp();
  const double df = manifold_distance_2d(f).dist;
  const double dg = manifold_distance_2d(g).dist;
  GridFn2D diff = f;
  for (std::size_t k = 0; k < diff.v.size(); ++k) diff.v[k] -= g.v[k];
  return std::abs(df - dg) <= diff.lp_norm(p) + 2.0 * slack;
}

std::optional<int> first_crossing(const FlowTrace& trace, double delta) {
  for (const FlowRecord& r : trace.records)
    if (r.dist_rel <= delta) return r.step;
  return std::nullopt;
}

FlowTrace competing_symmetries(const GridFn2D& f0, int K) {
  const double p = f0.P.hls_exp();
  const double n0 = f0.lp_norm(p);
  if (!(n0 > 0.0)) throw std::domain_error("competing_symmetries: zero input");
  for (double x : f0.v)
    if (x < 0.0) throw std::domain_error("competing_symmetries: negative input");
  const GridFn2D h = bubble2d(f0, 0.0, 0.0, 1.0,
                              n0 * std::pow(sphere_area(f0.P.n), -1.0 / p));
  FlowTrace trace;
  GridFn2D f = f0;
  for (int k = 0; k <= K; ++k) {
    FlowRecord rec{};
    rec.step = k;
    rec.lp_norm = f.lp_norm(p);
    rec.hls_value = hls2d(f, f);
    const Fit2D fit = manifold_distance_2d(f, 4, static_cast<std::uint64_t>(k));
    rec.dist_rel = fit.dist * fit.dist / (rec.lp_norm * rec.lp_norm);
    GridFn2D diff = f;
    for (std::size_t i = 0; i < diff.v.size(); ++i) diff.v[i] -= h.v[i];
    rec.dist_to_h = diff.lp_norm(p);
    trace.records.push_back(rec);
    if (k == K) break;
    f = decreasing_rearrangement(conformal_U(f, p));
  }
  return trace;
}

FlowTrace discrete_flow(const GridFn2D& f0, int steps, std::uint64_t seed) {
  const double p = f0.P.hls_exp();
  for (double x : f0.v)
    if (x < 0.0) throw std::domain_error("discrete_flow: negative input");
  const GridFn2D target = decreasing_rearrangement(f0);
  const double n0 = std::max(f0.lp_norm(p), 1e-300);
  std::mt19937_64 eng(seed * 0x9e3779b97f4a7c15ull + 2);
  FlowTrace trace;
  GridFn2D f = f0;
  auto record = [&](int step, double displacement) {
    FlowRecord rec{};
    rec.step = step;
    rec.lp_norm = f.lp_norm(p);
    rec.hls_value = hls2d(f, f);
    rec.dist_rel = displacement / n0;
    GridFn2D diff = f;
    for (std::size_t i = 0; i < diff.v.size(); ++i) diff.v[i] -= target.v[i];
    rec.dist_to_h = diff.lp_norm(p);
    trace.records.push_back(rec);
  };
  record(0, 0.0);
  for (int k = 1; k <= steps; ++k) {
    Halfplane H;
    H.kind = static_cast<HalfplaneKind>(eng() % 4);
    H.m = static_cast<int>(eng() % (2 * f.N - 1)) - (f.N - 1);
    GridFn2D next = polarize(f, H);
    GridFn2D diff = next;
    for (std::size_t i = 0; i < diff.v.size(); ++i) diff.v[i] -= f.v[i];
    const double disp = diff.lp_norm(p);
    f = std::move(next);
    record(k, disp);
  }
  return trace;
}

}  // namespace hlslab
