#pragma once

#include <vector>

#include "gridcell/distributions.hpp"
#include "gridcell/rng.hpp"

namespace gridcell {

enum class RenewalFlavor { Stationary, Palm };

/// A renewal process realization restricted to the window [-W, W].
struct RenewalRealization {
  std::vector<double> points;  // strictly increasing, all within [-W, W]
  double window_half_width = 0.0;
  RenewalFlavor flavor = RenewalFlavor::Stationary;
};

/// Stationary renewal process on [-W, W]: the gap covering the origin is
/// length-biased and split by an independent uniform mark; both sides are
/// then extended with iid inter-arrivals until the first point strictly
/// beyond the window, and out-of-window points are dropped.
RenewalRealization sample_stationary_renewal(const InterArrivalSpec& spec,
                                             double window_half_width,
                                             RandomStream& rng);

/// Palm version: a point at 0 plus iid partial sums on each side,
/// truncated to [-W, W].
RenewalRealization sample_palm_renewal(const InterArrivalSpec& spec,
                                       double window_half_width,
                                       RandomStream& rng);

}  // namespace gridcell
