#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hlslab/radial.hpp"

namespace hlslab {

// Seeded, deterministic test-function corpus: bubble pairs cycling through
// b-ratios {2, 4, 10}, coefficient ratios {0.05, 0.1, 0.3} and sign patterns
// {++, +-}, plus truncation-perturbed single bubbles.  Base scales are drawn
// from a per-case substream of the corpus seed.

struct HlsCase {
  std::string id;
  BubbleCombo combo;
  double trunc_r = 0.0;  // > 0: values zeroed for r > trunc_r
};

std::vector<HlsCase> make_hls_corpus(const Params& P, int count, std::uint64_t seed);

RadialFn realize(const HlsCase& c, const std::shared_ptr<const RadialGrid>& grid);

struct SobolevCase {
  std::string id;
  BubbleCombo combo;
};

std::vector<SobolevCase> make_sobolev_corpus(const Params& P, int count,
                                             std::uint64_t seed);

}  // namespace hlslab
