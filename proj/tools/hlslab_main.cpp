// hlslab command-line front end.
//
//   hlslab constants --n 2:6 --s 0.5:1.5:0.25 [--format text|csv|json]
//   hlslab verify --suite duality [--n ...] [--s ...] [--count C] [--seed S]
//   hlslab flow --steps 20 [--flow-N 48] [--seed S]
//
// Range arguments accept "a", "a:b" (step 1) and "a:b:step"; (n, s) pairs
// violating 0 < s < n/2 are silently dropped from the grid, and an empty grid
// is a usage error.  All output is deterministic for fixed arguments.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hlslab/constants.hpp"
#include "hlslab/corpus.hpp"
#include "hlslab/grid2d.hpp"
#include "hlslab/kernel.hpp"
#include "hlslab/radial.hpp"
#include "hlslab/riesz.hpp"
#include "hlslab/special.hpp"
#include "hlslab/stability.hpp"
#include "hlslab/trace.hpp"

using namespace hlslab;

namespace {

std::vector<double> parse_range(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw std::invalid_argument("bad range token: " + tok);
    parts.push_back(x);
  }
  if (parts.empty() || parts.size() > 3)
    throw std::invalid_argument("bad range: " + spec);
  if (parts.size() == 1) return {parts[0]};
  const double lo = parts[0], hi = parts[1];
  const double step = parts.size() == 3 ? parts[2] : 1.0;
  if (step <= 0.0 || hi < lo) throw std::invalid_argument("bad range: " + spec);
  std::vector<double> out;
  for (double x = lo; x <= hi + 1e-12 * step; x += step) out.push_back(x);
  return out;
}

std::vector<Params> param_grid(const std::string& nspec, const std::string& sspec) {
  std::vector<Params> out;
  for (double nd : parse_range(nspec)) {
    const int n = static_cast<int>(std::lround(nd));
    if (std::abs(nd - n) > 1e-9 || n < 2) continue;
    for (double s : parse_range(sspec))
      if (s > 0.0 && s < 0.5 * n) out.emplace_back(n, s);
  }
  return out;
}

enum class Format { Text, Csv, Json };

struct CheckLine {
  std::string suite, name;
  double value;
  bool pass;
};

struct Sink {
  std::ostream& os;
  Format fmt;
  bool first = true;

  void open() {
    if (fmt == Format::Json) os << "[";
    if (fmt == Format::Csv) os << "suite,check,value,pass\n";
  }
  void emit(const CheckLine& c) {
    char val[32];
    std::snprintf(val, sizeof(val), "%.12g", c.value);
    switch (fmt) {
      case Format::Text:
        os << c.suite << " | " << c.name << " | " << val << " | "
           << (c.pass ? "pass" : "FAIL") << "\n";
        break;
      case Format::Csv:
        os << c.suite << "," << c.name << "," << val << ","
           << (c.pass ? "true" : "false") << "\n";
        break;
      case Format::Json:
        os << (first ? "" : ",") << "\n  {\"suite\":\"" << c.suite
           << "\",\"check\":\"" << c.name << "\",\"value\":" << val
           << ",\"pass\":" << (c.pass ? "true" : "false") << "}";
        break;
    }
    first = false;
  }
  void close() {
    if (fmt == Format::Json) os << "\n]\n";
  }
};

std::string tag(const Params& P) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "n=%d,s=%g", P.n, P.s);
  return buf;
}

// ---- verify suites ----

struct SuiteCtx {
  std::vector<Params> grid;
  int kernel_N;
  double tol;
  std::uint64_t seed;
  int count;
  Sink& sink;
  int failures = 0;

  void check(const std::string& suite, const std::string& name, double value,
             bool pass) {
    sink.emit({suite, name, value, pass});
    if (!pass) ++failures;
  }
};

void suite_duality(SuiteCtx& C) {
  for (const Params& P : C.grid) {
    const double rel =
        riesz_const(P) * lieb_sharp_diagonal(P.n, P.lambda()) /
            sobolev_sharp_constant(P) - 1.0;
    C.check("duality", tag(P), rel, std::abs(rel) <= 1e-10);
  }
}

void suite_quadrature(SuiteCtx& C) {
  for (const Params& P : C.grid) {
    auto g = lab_grid(P.n, C.kernel_N);
    const RadialFn U = make_bubble(P, 1.0, 1.0, BubbleFlavor::Sobolev).sample(g);
    const double q = P.sob_exp();
    const double rel = std::pow(lp_norm(U, q), q) / sphere_area(P.n) - 1.0;
    C.check("quadrature", tag(P) + ",bubble-mass", rel, std::abs(rel) <= 1e-5);
  }
}

void suite_extremal(SuiteCtx& C) {
  for (const Params& P : C.grid) {
    const KernelTable& K = lab_kernel(P, C.kernel_N);
    const RadialFn g = make_bubble(P, 1.0, 1.0, BubbleFlavor::Hls).sample(K.grid);
    const double scale = std::pow(lp_norm(g, P.hls_exp()), 2);
    const double rel = hls_deficit(g, K) / scale;
    C.check("extremal", tag(P) + ",hls-deficit", rel, std::abs(rel) <= 1e-4);
    const BubbleCombo U = make_bubble(P, 1.3, 1.0, BubbleFlavor::Sobolev);
    const double srel = sobolev_deficit(U, K.grid) / hs_inner(U, U, K.grid);
    C.check("extremal", tag(P) + ",sobolev-deficit", srel, std::abs(srel) <= 1e-4);
  }
}

void suite_taylor(SuiteCtx& C) {
  std::mt19937_64 eng(C.seed);
  std::uniform_real_distribution<double> ux(-1.0, 8.0), uq(1.0, 8.0);
  int bad = 0;
  const int total = std::max(1000, C.count * 100);
  for (int i = 0; i < total; ++i)
    if (!taylor_pointwise_check(ux(eng), uq(eng))) ++bad;
  C.check("taylor", "pointwise-sweep", bad, bad == 0);
}

void suite_spectral_gap(SuiteCtx& C) {
  for (const Params& P : C.grid) {
    auto grid = lab_grid(P.n, C.kernel_N);
    for (const SobolevCase& c : make_sobolev_corpus(P, C.count, C.seed)) {
      const auto gap = spectral_gap_check(1.0, c.combo, grid);
      if (!gap) continue;
      const double scale = hs_inner(c.combo, c.combo, grid);
      C.check("spectral_gap", tag(P) + "," + c.id, *gap / scale,
              *gap >= -1e-6 * scale);
    }
  }
}

void suite_stability_hls(SuiteCtx& C) {
  for (const Params& P : C.grid) {
    const KernelTable& K = lab_kernel(P, C.kernel_N);
    for (const HlsCase& c : make_hls_corpus(P, C.count, C.seed)) {
      const StabilityReport rep = hls_stability(realize(c, K.grid), K, c.id);
      const bool ok =
          rep.near_manifold ? rep.pass : rep.ratio >= rep.bound - C.tol;
      C.check("stability_hls", tag(P) + "," + c.id,
              rep.near_manifold ? rep.deficit : rep.margin, ok);
    }
  }
}

void suite_stability_sobolev(SuiteCtx& C) {
  for (const Params& P : C.grid) {
    auto grid = lab_grid(P.n, C.kernel_N);
    for (const SobolevCase& c : make_sobolev_corpus(P, C.count, C.seed)) {
      const StabilityReport rep = sobolev_stability(c.combo, grid, c.id);
      const bool ok =
          rep.near_manifold ? rep.pass : rep.ratio >= rep.bound - C.tol;
      C.check("stability_sobolev", tag(P) + "," + c.id,
              rep.near_manifold ? rep.deficit : rep.margin, ok);
    }
  }
}

void suite_split(SuiteCtx& C) {
  for (const Params& P : C.grid) {
    const KernelTable& K = lab_kernel(P, C.kernel_N);
    // the corpus interleaves sign patterns with period 19; draw enough cases
    // to retain --count sign-changing ones
    int done = 0;
    for (const HlsCase& c : make_hls_corpus(P, 19 * (C.count / 9 + 1), C.seed)) {
      if (c.id.rfind("pair-pm", 0) != 0 || done >= C.count) continue;
      const RadialFn g = realize(c, K.grid);
      const auto [gp, gm] = split_parts(g);
      if (!(lp_norm(gm, P.hls_exp()) > 0.0)) continue;  // minus term dominated
      const bool ok = split_superadditivity_check(g, K);
      C.check("split", tag(P) + "," + c.id, ok ? 1.0 : 0.0, ok);
      ++done;
    }
    if (done == 0)
      C.check("split", tag(P) + ",no-sign-changing-cases", 0.0, false);
  }
}

void suite_sphere(SuiteCtx& C) {
  for (const Params& P : C.grid) {
    ZonalSphereFn one(P, 256, [](double) { return 1.0; });
    const double p = P.hls_exp();
    const double scale = std::pow(one.lp_norm(p), 2);
    const double rel =
        (scale - sphere_hls_constant(P) * sphere_hls_form(one)) / scale;
    C.check("sphere", tag(P) + ",const-saturation", rel, std::abs(rel) <= 1e-3);
    ZonalSphereFn g(P, 256, [](double x) { return 1.0 + 0.5 * x; });
    const StabilityReport rep = corollary_sphere_check(g, lab_kernel(P, C.kernel_N));
    C.check("sphere", tag(P) + ",tilted-stability",
            rep.near_manifold ? rep.deficit : rep.margin, rep.pass);
  }
}

void suite_trace(SuiteCtx& C) {
  bool any = false;
  for (const Params& P : C.grid) {
    if (P.s <= 0.5 || P.n < 3) continue;
    any = true;
    const TraceConstants tc = trace_constants(P);
    const double rel = extremal_trace_equality(P, 1.0) / tc.C_ns - 1.0;
    C.check("trace", tag(P) + ",flat-extremal", rel, std::abs(rel) <= 1e-2);
    const double drift = trace_equivalence_check(P);
    C.check("trace", tag(P) + ",ab-constancy", drift, drift <= 1e-2);
    const double drel = extremal_trace_sphere_equality(P) / tc.D_ns - 1.0;
    C.check("trace", tag(P) + ",sphere-extremal", drel, std::abs(drel) <= 1e-2);
  }
  if (!any) C.check("trace", "no-valid-params (need n >= 3, s > 1/2)", 0.0, false);
}

void suite_symmetry(SuiteCtx& C) {
  // planar demo is pinned to (2, 1/2)
  const Params P2(2, 0.5);
  std::mt19937_64 eng(C.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GridFn2D f(P2, 12.0, 48);
  for (double& x : f.v) x = u(eng) * u(eng);
  const double base = hls2d(f, f);
  bool mono = true;
  for (int m : {-9, 0, 7}) {
    const GridFn2D g = polarize(f, Halfplane{HalfplaneKind::X, m});
    mono = mono && hls2d(g, g) >= base - 1e-10 * base;
  }
  C.check("symmetry", "polarization-monotone", base, mono);
  GridFn2D f0 = bubble2d(GridFn2D(P2, 12.0, 32), 1.2, -0.6, 1.0, 1.0);
  const FlowTrace t = discrete_flow(f0, 60, C.seed);
  const double drop =
      t.records.back().dist_to_h / std::max(t.records.front().dist_to_h, 1e-300);
  C.check("symmetry", "flow-dist-drop", drop, drop < 1.0);
}

using SuiteFn = void (*)(SuiteCtx&);
const std::pair<const char*, SuiteFn> kSuites[] = {
    {"quadrature", suite_quadrature}, {"extremal", suite_extremal},
    {"taylor", suite_taylor},         {"spectral_gap", suite_spectral_gap},
    {"duality", suite_duality},       {"stability_hls", suite_stability_hls},
    {"stability_sobolev", suite_stability_sobolev},
    {"split", suite_split},           {"sphere", suite_sphere},
    {"trace", suite_trace},           {"symmetry", suite_symmetry},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"explicit constants and stability checks for HLS-type inequalities"};
  app.require_subcommand(1);

  std::string nspec = "3", sspec = "1", format = "text", out, suite, fault;
  int kernel_N = 1024, count = 10, steps = 20, flow_N = 48;
  double tol = 1e-6;
  std::uint64_t seed = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", nspec, "dimension or range a:b[:step]");
    sub->add_option("--s", sspec, "order or range a:b[:step]");
    sub->add_option("--format", format, "text|csv|json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    sub->add_option("--out", out, "write output to a file instead of stdout");
  };

  CLI::App* c_const = app.add_subcommand("constants", "tabulate explicit constants");
  add_common(c_const);

  CLI::App* c_verify = app.add_subcommand("verify", "run a named check suite");
  add_common(c_verify);
  c_verify->add_option("--suite", suite, "suite name")->required();
  c_verify->add_option("--grid-N", kernel_N, "radial grid size")->check(CLI::Range(64, 8192));
  c_verify->add_option("--tol", tol, "pass tolerance");
  c_verify->add_option("--seed", seed, "corpus seed");
  c_verify->add_option("--count", count, "corpus size per (n, s)")->check(CLI::Range(1, 10000));
  c_verify->add_option("--inject-fault", fault, "")->group("");  // hidden

  CLI::App* c_flow = app.add_subcommand("flow", "planar polarization flow trace (CSV)");
  c_flow->add_option("--steps", steps, "flow steps")->check(CLI::Range(1, 100000));
  c_flow->add_option("--flow-N", flow_N, "planar grid cells per side")->check(CLI::Range(8, 512));
  c_flow->add_option("--seed", seed, "polarization sequence seed");
  c_flow->add_option("--out", out, "write output to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::ofstream ofs;
  if (!out.empty()) {
    ofs.open(out);
    if (!ofs) {
      std::cerr << "cannot open " << out << "\n";
      return 2;
    }
  }
  std::ostream& os = out.empty() ? std::cout : ofs;
  const Format fmt = format == "csv" ? Format::Csv
                     : format == "json" ? Format::Json
                                        : Format::Text;

  try {
    if (c_flow->parsed()) {
      GridFn2D f0 = bubble2d(GridFn2D(Params(2, 0.5), 12.0, flow_N), 1.2, -0.6, 1.0, 1.0);
      std::mt19937_64 eng(seed);
      std::uniform_real_distribution<double> u(0.8, 1.2);
      for (double& x : f0.v) x *= u(eng);
      os << discrete_flow(f0, steps, seed).to_csv();
      return 0;
    }

    std::vector<Params> grid;
    try {
      grid = param_grid(nspec, sspec);
    } catch (const std::invalid_argument& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
    if (grid.empty()) {
      std::cerr << "no valid (n, s) pairs in --n " << nspec << " --s " << sspec
                << " (need integer n >= 2, 0 < s < n/2)\n";
      return 2;
    }

    if (c_const->parsed()) {
      if (fmt == Format::Csv)
        os << "n,s,S_ns,K_ns,hls_bound,sob_bound,koenig_upper,lieb_diagonal,"
              "riesz_const,sphere_B,trace_C,trace_D\n";
      if (fmt == Format::Json) os << "[";
      bool first = true;
      for (const Params& P : grid) {
        const BoundSet b = stability_bounds(P);
        double C_ns = std::nan(""), D_ns = std::nan("");
        if (P.n >= 3 && P.s > 0.5) {
          const TraceConstants tc = trace_constants(P);
          C_ns = tc.C_ns;
          D_ns = tc.D_ns;
        }
        const double vals[] = {b.S_ns,
                               b.K_ns,
                               b.hls_bound,
                               b.sob_bound,
                               b.koenig_upper,
                               lieb_sharp_diagonal(P.n, P.lambda()),
                               riesz_const(P),
                               sphere_hls_constant(P),
                               C_ns,
                               D_ns};
        const char* names[] = {"S_ns",         "K_ns",       "hls_bound",
                               "sob_bound",    "koenig_upper", "lieb_diagonal",
                               "riesz_const",  "sphere_B",   "trace_C",
                               "trace_D"};
        char num[32];
        switch (fmt) {
          case Format::Text:
            os << tag(P) << "\n";
            for (int i = 0; i < 10; ++i) {
              std::snprintf(num, sizeof(num), "%.12g", vals[i]);
              os << "  " << names[i] << " = " << num << "\n";
            }
            break;
          case Format::Csv:
            os << P.n << "," << P.s;
            for (double v : vals) {
              std::snprintf(num, sizeof(num), "%.12g", v);
              os << "," << num;
            }
            os << "\n";
            break;
          case Format::Json:
            os << (first ? "" : ",") << "\n  {\"n\":" << P.n << ",\"s\":" << P.s;
            for (int i = 0; i < 10; ++i) {
              std::snprintf(num, sizeof(num), "%.12g", vals[i]);
              os << ",\"" << names[i] << "\":"
                 << (std::isnan(vals[i]) ? "null" : num);
            }
            os << "}";
            break;
        }
        first = false;
      }
      if (fmt == Format::Json) os << "\n]\n";
      return 0;
    }

    // verify
    Sink sink{os, fmt};
    SuiteFn fn = nullptr;
    for (const auto& [name, f] : kSuites)
      if (suite == name) fn = f;
    if (!fn) {
      std::cerr << "unknown suite '" << suite << "'; available:";
      for (const auto& [name, f] : kSuites) std::cerr << " " << name;
      std::cerr << "\n";
      return 2;
    }
    SuiteCtx ctx{grid, kernel_N, tol, seed, count, sink};
    sink.open();
    fn(ctx);
    if (!fault.empty())
      ctx.check(suite, "injected-fault:" + fault, 0.0, false);
    sink.close();
    if (fmt == Format::Text)
      os << (ctx.failures ? "FAIL: " : "OK: ") << ctx.failures << " failed\n";
    return ctx.failures ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
