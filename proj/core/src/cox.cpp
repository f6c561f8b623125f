#include "gridcell/cox.hpp"

#include <cmath>

#include "gridcell/errors.hpp"

namespace gridcell {

PointPattern sample_cox(std::span<const Segment> carrier, double lambda,
                        RandomStream& rng) {
  if (!(std::isfinite(lambda) && lambda > 0.0))
    throw ConfigError("sample_cox requires lambda > 0");
  PointPattern pattern;
  pattern.lambda = lambda;
  for (const Segment& seg : carrier) {
    const double len = seg.length();
    const std::uint64_t count = rng.poisson(lambda * len);
    for (std::uint64_t i = 0; i < count; ++i) {
      const double t = rng.uniform01();
      pattern.points.push_back(Point{seg.a.x + t * (seg.b.x - seg.a.x),
                                     seg.a.y + t * (seg.b.y - seg.a.y)});
    }
  }
  return pattern;
}

}  // namespace gridcell
