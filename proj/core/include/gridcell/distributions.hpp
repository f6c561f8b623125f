#pragma once

#include "gridcell/rng.hpp"

namespace gridcell {

enum class ArrivalKind { Deterministic, Exponential, TruncatedGaussian };

/// One-dimensional inter-arrival distribution of a renewal street process.
///
/// TruncatedGaussian is a normal law with location mu and scale sigma
/// conditioned on being nonnegative. sigma = 0 is rejected; the rigid
/// lattice limit is modeled by Deterministic instead.
struct InterArrivalSpec {
  ArrivalKind kind = ArrivalKind::Deterministic;
  double mu = 0.0;     // Deterministic value / TruncatedGaussian location
  double sigma = 0.0;  // TruncatedGaussian scale
  double rate = 0.0;   // Exponential rate

  static InterArrivalSpec deterministic(double mu);
  static InterArrivalSpec exponential(double rate);
  static InterArrivalSpec truncated_gaussian(double mu, double sigma);

  friend bool operator==(const InterArrivalSpec&,
                         const InterArrivalSpec&) = default;
};

/// Throws ConfigError unless the spec's parameters are valid and the law
/// puts positive mass on (0, inf).
void validate_spec(const InterArrivalSpec& spec);

/// E[I]. Closed form for Deterministic/Exponential; adaptive quadrature
/// (relative error <= 1e-10) for TruncatedGaussian.
double mean_interarrival(const InterArrivalSpec& spec);

/// One draw from L(I); strictly positive except for the TruncatedGaussian
/// boundary atom-free value 0 (probability zero).
double sample_interarrival(const InterArrivalSpec& spec, RandomStream& rng);

/// One draw from the length-biased law L(I*) with density x g(x) / E[I].
double sample_length_biased(const InterArrivalSpec& spec, RandomStream& rng);

/// The law of s*I: gaps scaled by a positive factor.
InterArrivalSpec scale_spec(const InterArrivalSpec& spec, double factor);

}  // namespace gridcell
