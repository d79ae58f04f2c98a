#include "jfcs/rng.hpp"

#include <cmath>
#include <numbers>

namespace jfcs {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::string_view name) {
  std::uint64_t state = master_seed ^ fnv1a64(name);
  splitmix64(state);
  const std::uint64_t seed = splitmix64(state);
  gen_.seed(seed);
}

double RngStream::uniform() {
  // 53 high bits -> double in [0, 1)
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

std::complex<double> RngStream::cgauss() {
  // Re and Im each N(0, 1/2) so E|z|^2 = 1.
  const double s = std::numbers::sqrt2 / 2.0;
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

}  // namespace jfcs
