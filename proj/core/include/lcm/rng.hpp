#pragma once

#include <cstdint>

#include "lcm/errors.hpp"

namespace lcm {

// SplitMix64: the deterministic generator behind mask expansion, noise
// streams and pattern sampling. Fixed algorithm so transcripts are
// reproducible across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  uint64_t state_;
};

// Stateless mixer used to derive independent stream seeds from a global
// seed and small integer labels.
inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b) {
  SplitMix64 g(seed ^ (a * 0x9e3779b97f4a7c15ULL) ^
               (b * 0xc2b2ae3d27d4eb4fULL));
  g.next();
  return g.next();
}

// Seed shared by the client pair (i, j), i < j. Stands in for a key
// agreement round: both endpoints can derive it from the global seed.
inline uint64_t derive_pair_seed(uint64_t global_seed, int i, int j) {
  if (i >= j) throw bad_pair_order("pair seed requires i < j");
  return mix_seed(global_seed, static_cast<uint64_t>(i) + 1,
                  static_cast<uint64_t>(j) + 1);
}

}  // namespace lcm
