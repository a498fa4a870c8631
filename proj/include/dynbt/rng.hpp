#ifndef DYNBT_RNG_HPP
#define DYNBT_RNG_HPP

#include <cstdint>

namespace dynbt {

// xoshiro256++ seeded through SplitMix64. Fixed algorithms so that a seed
// reproduces the same stream on every platform; all simulation entry points
// take an explicit generator, and parallel callers must provide independent
// streams (e.g. one Rng per repetition derived via Rng::fork).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();
  // Uniform double strictly inside (0, 1).
  double uniform_open();
  double uniform(double lo, double hi);

  // Standard normal via the AS241 inverse-CDF applied to uniform_open().
  double normal();

  // Binomial(n, p) by CDF inversion; consumes exactly one uniform draw.
  long binomial(long n, double p);

  // Independent child stream: deterministic function of (seed path, salt).
  Rng fork(std::uint64_t salt) const;

 private:
  std::uint64_t state_[4];
};

// AS241: quantile of the standard normal at p in (0, 1).
double normal_quantile(double p);

// SplitMix64 step, exposed for deterministic seed derivation.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace dynbt

#endif  // DYNBT_RNG_HPP
