#ifndef JFCS_RNG_HPP
#define JFCS_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace jfcs {

/// One SplitMix64 step; used for seed scrambling.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic per-subsystem random stream.
///
/// A master seed plus a stream name ("placement", "fading", ...) yields an
/// independent generator, so changing how one subsystem consumes randomness
/// does not perturb the others. Distribution sampling is implemented here
/// (not via std:: distributions) so sequences depend only on the mt19937_64
/// output and IEEE-754 arithmetic.
class RngStream {
 public:
  RngStream() = default;
  RngStream(std::uint64_t master_seed, std::string_view name);

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1).
  double uniform();
  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller (pairs cached).
  double normal();
  /// Circularly-symmetric complex Gaussian with unit total variance.
  std::complex<double> cgauss();

 private:
  std::mt19937_64 gen_{0x9e3779b97f4a7c15ull};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace jfcs

#endif
