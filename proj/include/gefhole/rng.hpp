#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace gefhole {

std::uint64_t splitmix64(std::uint64_t x);

/// Reproducible random stream. Children are derived from (seed, stream id)
/// by counter-based splitting, so the values a child produces do not depend
/// on how many draws its parent or siblings made.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  RandomStream split(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  double uniform();  // [0, 1)
  double normal();   // mean 0, variance 1
  /// Standard complex Gaussian, E|xi|^2 = 1.
  std::complex<double> complex_gaussian();
  std::uint64_t next_u64() { return engine_(); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace gefhole
