#pragma once

#include <cmath>
#include <cstdint>

namespace mllab {

/// splitmix64 step; used both as a PRNG kernel and as a seed mixer.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d4a2a5793a8accULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from (master, stream, index).
/// Counter-based, so enlarging a population never perturbs the draws
/// of already-existing subjects or replications.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index = 0) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s ^= stream * 0x9e3779b97f4a7c15ULL;
  std::uint64_t b = splitmix64(s);
  s ^= index * 0xd1342543de82ef95ULL;
  std::uint64_t c = splitmix64(s);
  return a ^ (b + 0x165667b19e3779f9ULL) ^ (c << 1);
}

/// Seed streams used across the toolkit. Fixed values keep replays stable.
namespace seed_stream {
inline constexpr std::uint64_t kSubject = 0x5342u;      // per-subject protocol runs
inline constexpr std::uint64_t kAgent = 0x4147u;        // per-agent belief simulations
inline constexpr std::uint64_t kReplication = 0x5250u;  // Monte Carlo replications
inline constexpr std::uint64_t kInit = 0x494eu;         // EM initializations
}  // namespace seed_stream

/// Small deterministic generator. All distributions are hand-rolled from
/// the raw 64-bit stream, so sequences are identical across platforms and
/// standard-library versions (std::normal_distribution is not).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; one draw per call, no caching.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Normal truncated to [lo, hi] by rejection.
  double truncated_normal(double mean, double sd, double lo, double hi) {
    for (;;) {
      double x = normal(mean, sd);
      if (x >= lo && x <= hi) return x;
    }
  }

  /// Binomial(n, p) as a sum of Bernoulli draws; n is small everywhere here.
  int binomial(int n, double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;
    int k = 0;
    for (int i = 0; i < n; ++i)
      if (uniform() < p) ++k;
    return k;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
  std::uint64_t state_;
};

}  // namespace mllab
