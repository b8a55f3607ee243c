#include "kpd/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace kpd {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t derive_subseed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t s = root;
  std::uint64_t a = splitmix64(s);
  s ^= stream * 0xda942042e4dd58b5ull;
  std::uint64_t b = splitmix64(s);
  return a ^ (b + 0x9e3779b97f4a7c15ull);
}

double Rng::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) {
  return a + (b - a) * uniform();
}

std::int64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be >= 0");
  std::int64_t total = 0;
  // Knuth's product method per chunk; exp(-500) is comfortably normal.
  while (mean > 500.0) {
    total += poisson(500.0);
    mean -= 500.0;
  }
  const double limit = std::exp(-mean);
  double p = 1.0;
  std::int64_t k = 0;
  do {
    ++k;
    p *= uniform();
  } while (p > limit);
  return total + k - 1;
}

}  // namespace kpd
