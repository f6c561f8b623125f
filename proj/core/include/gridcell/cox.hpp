#pragma once

#include <span>
#include <vector>

#include "gridcell/geometry.hpp"
#include "gridcell/rng.hpp"
#include "gridcell/streets.hpp"

namespace gridcell {

/// Poisson point process with linear intensity lambda on a street system.
struct PointPattern {
  std::vector<Point> points;
  double lambda = 0.0;
};

/// Per segment of length L, a Poisson(lambda*L) number of points placed
/// uniformly and independently on the segment. The origin itself is never
/// part of the pattern; the typical-cell construction adds it separately.
PointPattern sample_cox(std::span<const Segment> carrier, double lambda,
                        RandomStream& rng);

}  // namespace gridcell
