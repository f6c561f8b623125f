#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gridcell/cox.hpp"
#include "gridcell/geometry.hpp"

namespace gridcell {

/// Absolute tolerance for point-on-line classification; all coordinates
/// are O(window), so double precision leaves ample headroom.
inline constexpr double kGeomEps = 1e-12;

/// The Voronoi cell of the origin, a convex polygon containing the origin
/// strictly in its interior.
struct ConvexCell {
  std::vector<Point> vertices;  // counter-clockwise ring
  /// True iff no point outside the window can cut the cell
  /// (circumradius <= W/3), i.e. the window intersection is not active.
  bool bounded_certificate = false;
  double circumradius = 0.0;

  bool contains(Point p, double eps = kGeomEps) const;
  double area() const;
};

/// Cell of the origin with respect to {o} union pattern: the window square
/// clipped by the perpendicular bisector half-plane of every pattern point.
/// A pattern point duplicating the origin is invalid Cox output.
ConvexCell voronoi_cell_at_origin(const PointPattern& pattern,
                                  double window_half_width);

/// Parameter sub-interval [t0, t1] of the segment a + t*(b - a), t in
/// [0, 1], lying inside the cell; nullopt when the intersection is empty
/// or degenerate.
std::optional<std::pair<double, double>> clip_segment_to_cell(
    const ConvexCell& cell, Point a, Point b);

}  // namespace gridcell
