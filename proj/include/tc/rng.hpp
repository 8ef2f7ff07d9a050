#pragma once

#include <cmath>
#include <cstdint>

namespace tc {

// xoshiro256++ (Blackman & Vigna), seeded through splitmix64 so that any
// 64-bit value, including 0, yields a good state. The generator is fixed by
// the output contract: simulated draws must be bit-reproducible across
// platforms, so std::mt19937/std::normal_distribution (whose stream is
// implementation-defined) are not usable here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : s_) {
      // splitmix64 step
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on (0,1]: 53-bit mantissa, shifted so 0 is excluded (safe log).
  double next_open_closed() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [0,1).
  double next_closed_open() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller, cosine branch only. Consumes exactly two
  // 64-bit words per call; the sine companion is discarded so the draw count
  // per deviate is constant, which keeps substreams alignable.
  double gaussian() {
    const double u1 = next_open_closed();
    const double u2 = next_closed_open();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double gaussian(double mean, double sd) { return mean + sd * gaussian(); }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Per-replication substream: same base seed XOR'd with the replication index.
// Replication r sees identical shocks in every cell that shares base_seed,
// which is intentional (common random numbers across methods and designs).
inline Rng replication_rng(std::uint64_t base_seed, std::uint64_t rep) {
  return Rng(base_seed ^ rep);
}

}  // namespace tc
