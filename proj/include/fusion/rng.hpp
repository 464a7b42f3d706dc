#pragma once

#include <cstdint>
#include <random>

namespace fusion {

// Deterministic random stream. Every draw consumes exactly one engine step
// (uniforms come from the top 53 bits, normals go through the inverse CDF),
// so a seed pins down the whole sequence independently of the standard
// library's distribution implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  // Uniform on the open interval (0, 1).
  double uniform() {
    const std::uint64_t bits = eng_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1p-53;
  }

  // Standard normal via the inverse CDF.
  double normal();

 private:
  std::mt19937_64 eng_;
};

}  // namespace fusion
