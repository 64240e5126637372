#include "gefhole/rng.hpp"

#include <cmath>

namespace gefhole {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t engine_key(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream ^ 0x5851f42d4c957f2dULL));
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(engine_key(seed, stream)) {}

RandomStream RandomStream::split(std::uint64_t index) const {
  return RandomStream(seed_, splitmix64(stream_ * 0x2545f4914f6cdd1dULL + index + 1));
}

double RandomStream::uniform() { return uniform_(engine_); }

double RandomStream::normal() { return normal_(engine_); }

std::complex<double> RandomStream::complex_gaussian() {
  const double s = std::sqrt(0.5);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {s * re, s * im};
}

}  // namespace gefhole
