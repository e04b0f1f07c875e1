// Timing comparison of the OpenMP kernels against their serial reference
// implementations, plus a bitwise-equality check of the results.
//   bench_kernels [N] [reps]
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "hlslab/grid2d.hpp"
#include "hlslab/kernel.hpp"
#include "hlslab/radial.hpp"
#include "hlslab/riesz.hpp"

using namespace hlslab;
using clk = std::chrono::steady_clock;

namespace {

template <class F>
double time_best(int reps, const F& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = clk::now();
    f();
    best = std::min(best, std::chrono::duration<double>(clk::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-24s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   %s\n",
              name, serial * 1e3, parallel * 1e3, serial / parallel,
              identical ? "bitwise-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int N = argc > 1 ? std::atoi(argv[1]) : 1024;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;
  const Params P(3, 1.0);
  auto grid = RadialGrid::make(P.n, N);
  std::printf("threads=%d  N=%d  reps=%d (best-of)\n\n", omp_get_max_threads(), N, reps);

  // unset the cache so build() actually computes
  unsetenv("HLSLAB_CACHE");
  KernelTable Kp = KernelTable::build(P, grid);
  KernelTable Ks = KernelTable::build_serial(P, grid);
  const double t_build_p = time_best(reps, [&] { Kp = KernelTable::build(P, grid); });
  const double t_build_s =
      time_best(reps, [&] { Ks = KernelTable::build_serial(P, grid); });
  report("KernelTable::build", t_build_s, t_build_p, Kp.profile == Ks.profile);

  const RadialFn g = make_bubble(P, 1.3, 1.0, BubbleFlavor::Hls).sample(grid);
  double vp = 0.0, vs = 0.0;
  const double t_form_p = time_best(reps, [&] { vp = hls_form(g, g, Kp); });
  const double t_form_s = time_best(reps, [&] { vs = hls_form_serial(g, g, Kp); });
  report("hls_form", t_form_s, t_form_p, vp == vs);

  const Params P2(2, 0.5);
  const GridFn2D f = bubble2d(GridFn2D(P2, 12.0, 64), 0.7, -0.4, 1.1, 1.0);
  const double t_2d_p = time_best(reps, [&] { vp = hls2d(f, f); });
  const double t_2d_s = time_best(reps, [&] { vs = hls2d_serial(f, f); });
  report("hls2d", t_2d_s, t_2d_p, vp == vs);
  return 0;
}
