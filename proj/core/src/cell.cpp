#include "gridcell/cell.hpp"

#include <algorithm>
#include <cmath>

#include "gridcell/errors.hpp"

namespace gridcell {

namespace {

double max_norm(const std::vector<Point>& vs) {
  double r = 0.0;
  for (Point v : vs) r = std::max(r, norm(v));
  return r;
}

/// Clips a counter-clockwise convex polygon by the half-plane
/// {p : p . n <= c}; the origin (n . o = 0 < c) always stays inside.
std::vector<Point> clip_half_plane(const std::vector<Point>& poly, Point n,
                                   double c) {
  std::vector<Point> out;
  out.reserve(poly.size() + 1);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point cur = poly[i];
    const Point nxt = poly[(i + 1) % poly.size()];
    const double s_cur = c - (cur.x * n.x + cur.y * n.y);
    const double s_nxt = c - (nxt.x * n.x + nxt.y * n.y);
    if (s_cur >= 0.0) out.push_back(cur);
    if ((s_cur > 0.0 && s_nxt < 0.0) || (s_cur < 0.0 && s_nxt > 0.0)) {
      const double t = s_cur / (s_cur - s_nxt);
      out.push_back(
          Point{cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
    }
  }
  // Collapse vertices that coincide up to the geometric tolerance.
  std::vector<Point> dedup;
  dedup.reserve(out.size());
  for (const Point& p : out) {
    if (dedup.empty() || distance(dedup.back(), p) > kGeomEps)
      dedup.push_back(p);
  }
  while (dedup.size() > 1 && distance(dedup.front(), dedup.back()) <= kGeomEps)
    dedup.pop_back();
  return dedup;
}

}  // namespace

bool ConvexCell::contains(Point p, double eps) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Point a = vertices[i];
    const Point b = vertices[(i + 1) % vertices.size()];
    const double len = distance(a, b);
    if (len <= eps) continue;
    const double cross =
        (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross / len < -eps) return false;
  }
  return true;
}

double ConvexCell::area() const {
  double twice = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Point a = vertices[i];
    const Point b = vertices[(i + 1) % vertices.size()];
    twice += a.x * b.y - a.y * b.x;
  }
  return 0.5 * twice;
}

ConvexCell voronoi_cell_at_origin(const PointPattern& pattern,
                                  double window_half_width) {
  const double w = window_half_width;
  if (!(std::isfinite(w) && w > 0.0))
    throw ConfigError("voronoi_cell_at_origin requires a positive window");

  std::vector<Point> poly{Point{-w, -w}, Point{w, -w}, Point{w, w},
                          Point{-w, w}};

  std::vector<Point> sites = pattern.points;
  std::sort(sites.begin(), sites.end(),
            [](Point a, Point b) { return norm(a) < norm(b); });

  double radius = max_norm(poly);
  for (const Point& site : sites) {
    const double d = norm(site);
    if (d <= kGeomEps)
      throw ConfigError(
          "voronoi_cell_at_origin: pattern point duplicates the origin");
    // Near sites clip most area first; once the bisector distance exceeds
    // the current circumradius no later site can cut the polygon.
    if (0.5 * d > radius) break;
    poly = clip_half_plane(poly, site, 0.5 * d * d);
    radius = max_norm(poly);
  }

  ConvexCell cell;
  cell.vertices = std::move(poly);
  cell.circumradius = radius;
  cell.bounded_certificate = radius <= w / 3.0;
  return cell;
}

std::optional<std::pair<double, double>> clip_segment_to_cell(
    const ConvexCell& cell, Point a, Point b) {
  double t0 = 0.0, t1 = 1.0;
  const std::size_t m = cell.vertices.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point p = cell.vertices[i];
    const Point q = cell.vertices[(i + 1) % m];
    const double len = distance(p, q);
    if (len <= kGeomEps) continue;
    // Signed distance to the polygon edge, positive on the inside.
    const double sa =
        ((q.x - p.x) * (a.y - p.y) - (q.y - p.y) * (a.x - p.x)) / len;
    const double sb =
        ((q.x - p.x) * (b.y - p.y) - (q.y - p.y) * (b.x - p.x)) / len;
    if (sa < -kGeomEps && sb < -kGeomEps) return std::nullopt;
    if (sa >= -kGeomEps && sb >= -kGeomEps) continue;
    const double t = sa / (sa - sb);
    if (sa < sb) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 >= t1) return std::nullopt;
  }
  return std::make_pair(t0, t1);
}

}  // namespace gridcell
