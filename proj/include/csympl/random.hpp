#ifndef CSYMPL_RANDOM_HPP
#define CSYMPL_RANDOM_HPP

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace csympl
{

// Portable random source: std::mt19937_64 (bit-exact across standard libraries) with the
// uniform and normal transforms implemented here, since the <random> distributions are
// implementation-defined. Reports produced from a seed are reproducible on any platform.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
  {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  // Standard normal via Box-Muller.
  double normal();

  std::complex<double> complex_normal() { return {normal(), normal()}; }

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// splitmix64 finalizer; used to derive independent per-case seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> salt);

}  // namespace csympl

#endif
