#pragma once

#include <cstdint>
#include <random>

namespace kpd {

// Deterministic, platform-stable randomness: the std::mt19937_64 stream is
// specified bit-for-bit, uniforms take the top 53 bits, and Poisson counts
// come from a product-of-uniforms loop (chunked so exp stays normal). No
// std::*_distribution is used anywhere, so outputs never depend on the
// standard library implementation.
std::uint64_t splitmix64(std::uint64_t& state);

// Counter-based subseed: hash the root with a stream index. Streams with
// distinct indices give independent-for-practical-purposes engines.
std::uint64_t derive_subseed(std::uint64_t root, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform();                    // [0, 1)
  double uniform(double a, double b);  // [a, b)
  std::int64_t poisson(double mean);
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace kpd
