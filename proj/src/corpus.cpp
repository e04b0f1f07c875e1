#include "hlslab/corpus.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace hlslab {

namespace {

constexpr double kBRatios[] = {2.0, 4.0, 10.0};
constexpr double kCoeffs[] = {0.05, 0.1, 0.3};

std::mt19937_64 case_stream(std::uint64_t seed, int idx) {
  return std::mt19937_64(seed * 0x9e3779b97f4a7c15ull + 0x85ebca6b0ull * (idx + 1));
}

double log_uniform(std::mt19937_64& eng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(eng));
}

// archetype 0..17: (b-ratio, coeff, sign) pair; 18: truncated bubble
BubbleCombo pair_combo(const Params& P, BubbleFlavor flavor, int archetype, double b1) {
  const int ri = archetype % 3;
  const int ci = (archetype / 3) % 3;
  const int si = (archetype / 9) % 2;
  BubbleCombo combo(P, flavor);
  combo.add(1.0, b1);
  combo.add((si == 0 ? 1.0 : -1.0) * kCoeffs[ci], b1 * kBRatios[ri]);
  return combo;
}

std::string case_name(int idx, int archetype) {
  std::ostringstream os;
  if (archetype == 18) {
    os << "trunc-" << idx;
  } else {
    const char* sign = (archetype / 9) % 2 == 0 ? "pp" : "pm";
    os << "pair-" << sign << "-r" << kBRatios[archetype % 3] << "-c"
       << kCoeffs[(archetype / 3) % 3] << "-" << idx;
  }
  return os.str();
}

}  // namespace

std::vector<HlsCase> make_hls_corpus(const Params& P, int count, std::uint64_t seed) {
  std::vector<HlsCase> out;
  out.reserve(count);
  for (int idx = 0; idx < count; ++idx) {
    auto eng = case_stream(seed, idx);
    const int archetype = idx % 19;
    const double b1 = log_uniform(eng, 0.3, 3.0);
    if (archetype == 18) {
      BubbleCombo combo(P, BubbleFlavor::Hls);
      combo.add(1.0, b1);
      out.push_back({case_name(idx, archetype), combo, b1 * log_uniform(eng, 2.0, 20.0)});
    } else {
      out.push_back({case_name(idx, archetype),
                     pair_combo(P, BubbleFlavor::Hls, archetype, b1), 0.0});
    }
  }
  return out;
}

RadialFn realize(const HlsCase& c, const std::shared_ptr<const RadialGrid>& grid) {
  if (c.trunc_r > 0.0) {
    return RadialFn(grid, [&c](double r) { return r <= c.trunc_r ? c.combo(r) : 0.0; });
  }
  return c.combo.sample(grid);
}

std::vector<SobolevCase> make_sobolev_corpus(const Params& P, int count,
                                             std::uint64_t seed) {
  std::vector<SobolevCase> out;
  out.reserve(count);
  for (int idx = 0; idx < count; ++idx) {
    auto eng = case_stream(seed, idx);
    const int archetype = idx % 18;
    const double b1 = log_uniform(eng, 0.3, 3.0);
    out.push_back({case_name(idx, archetype),
                   pair_combo(P, BubbleFlavor::Sobolev, archetype, b1)});
  }
  return out;
}

}  // namespace hlslab
