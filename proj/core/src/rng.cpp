#include "gridcell/rng.hpp"

#include <cmath>
#include <numbers>

namespace gridcell {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kEngineSalt = 0xD1B54A32D192ED03ULL;
}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed)
    : key_(seed), engine_(mix64(seed ^ kEngineSalt)) {}

RandomStream RandomStream::substream(std::uint64_t index) const {
  return RandomStream(mix64(key_ ^ mix64(index + kGolden)));
}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open01() {
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

double RandomStream::normal() {
  const double u1 = uniform_open01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double RandomStream::exponential(double rate) {
  return -std::log(uniform_open01()) / rate;
}

std::uint64_t RandomStream::poisson(double mean) {
  // Sum of independent Poisson chunks equals a Poisson of the summed mean,
  // so large means are reduced to a regime where exp(-mean) cannot underflow.
  constexpr double kChunk = 30.0;
  std::uint64_t total = 0;
  while (mean > kChunk) {
    total += poisson(kChunk);
    mean -= kChunk;
  }
  const double limit = std::exp(-mean);
  std::uint64_t count = 0;
  double prod = uniform01();
  while (prod > limit) {
    ++count;
    prod *= uniform01();
  }
  return total + count;
}

}  // namespace gridcell
