#pragma once

#include <cstdint>
#include <random>

namespace gridcell {

/// SplitMix64 finalizer; bijective 64-bit mixing.
std::uint64_t mix64(std::uint64_t x);

/// Seeded random stream with deterministic hierarchical splitting.
///
/// A stream is identified by a 64-bit key. `substream(i)` derives a child
/// key from (parent key, i) only, so the draw sequence of a child never
/// depends on how much the parent or any sibling has been consumed. All
/// replication- and block-level parallelism in this project derives one
/// substream per task from a master seed, which keeps outputs independent
/// of scheduling.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Child stream addressed by `index`; independent of this stream's state.
  RandomStream substream(std::uint64_t index) const;

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform01();
  /// Uniform on (0, 1); safe as a log() or inverse-CDF argument.
  double uniform_open01();

  /// Standard normal via Box-Muller (two uniforms per draw, no cache).
  double normal();

  /// Exponential with the given rate, strictly positive.
  double exponential(double rate);

  /// Poisson count with the given mean (exact; chunked inversion by
  /// multiplication, valid for arbitrary means).
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace gridcell
