#include "gridcell/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "gridcell/errors.hpp"

namespace gridcell {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Line {
  double coord = 0.0;  // fixed coordinate
  double lo = 0.0;     // extent along the line
  double hi = 0.0;
  std::vector<double> cuts;
};

bool point_less(Point a, Point b) {
  return a.x != b.x ? a.x < b.x : a.y < b.y;
}

bool point_equal(Point a, Point b) { return a.x == b.x && a.y == b.y; }

}  // namespace

double StreetGraph::total_edge_length() const {
  double sum = 0.0;
  for (const Edge& e : edges) sum += e.length;
  return sum;
}

StreetGraph build_graph(std::span<const Segment> street_segments,
                        std::span<const Point> forced_nodes) {
  std::vector<Line> horizontal, vertical;
  for (const Segment& seg : street_segments) {
    if (seg.orientation == Orientation::Horizontal)
      horizontal.push_back({seg.a.y, seg.a.x, seg.b.x, {}});
    else
      vertical.push_back({seg.a.x, seg.a.y, seg.b.y, {}});
  }
  std::sort(vertical.begin(), vertical.end(),
            [](const Line& a, const Line& b) { return a.coord < b.coord; });

  // Crossings are exact coordinate pairs: x from the vertical line, y from
  // the horizontal one; no epsilon is involved for axis-aligned systems.
  for (Line& h : horizontal) {
    auto first = std::lower_bound(
        vertical.begin(), vertical.end(), h.lo,
        [](const Line& l, double x) { return l.coord < x; });
    for (auto it = first; it != vertical.end() && it->coord <= h.hi; ++it) {
      if (h.coord >= it->lo && h.coord <= it->hi) {
        h.cuts.push_back(it->coord);
        it->cuts.push_back(h.coord);
      }
    }
  }

  std::vector<Point> markers{Point{0.0, 0.0}};
  markers.insert(markers.end(), forced_nodes.begin(), forced_nodes.end());
  bool origin_found = false;
  for (std::size_t k = 0; k < markers.size(); ++k) {
    const Point m = markers[k];
    bool found = false;
    for (Line& h : horizontal)
      if (h.coord == m.y && h.lo <= m.x && m.x <= h.hi) {
        h.cuts.push_back(m.x);
        found = true;
      }
    for (Line& v : vertical)
      if (v.coord == m.x && v.lo <= m.y && m.y <= v.hi) {
        v.cuts.push_back(m.y);
        found = true;
      }
    if (k == 0) origin_found = found;
  }
  if (!origin_found)
    throw ConfigError("build_graph: origin does not lie on the street system");

  StreetGraph graph;
  // Node interning: collect every cut point, then sort-unique once.
  for (Line& line : horizontal) {
    line.cuts.push_back(line.lo);
    line.cuts.push_back(line.hi);
    std::sort(line.cuts.begin(), line.cuts.end());
    line.cuts.erase(std::unique(line.cuts.begin(), line.cuts.end()),
                    line.cuts.end());
    for (double c : line.cuts) graph.nodes.push_back(Point{c, line.coord});
  }
  for (Line& line : vertical) {
    line.cuts.push_back(line.lo);
    line.cuts.push_back(line.hi);
    std::sort(line.cuts.begin(), line.cuts.end());
    line.cuts.erase(std::unique(line.cuts.begin(), line.cuts.end()),
                    line.cuts.end());
    for (double c : line.cuts) graph.nodes.push_back(Point{line.coord, c});
  }
  std::sort(graph.nodes.begin(), graph.nodes.end(), point_less);
  graph.nodes.erase(
      std::unique(graph.nodes.begin(), graph.nodes.end(), point_equal),
      graph.nodes.end());

  const auto node_id = [&graph](Point p) {
    const auto it = std::lower_bound(graph.nodes.begin(), graph.nodes.end(),
                                     p, point_less);
    return static_cast<std::int32_t>(it - graph.nodes.begin());
  };
  for (const Line& line : horizontal) {
    for (std::size_t i = 1; i < line.cuts.size(); ++i) {
      graph.edges.push_back({node_id(Point{line.cuts[i - 1], line.coord}),
                             node_id(Point{line.cuts[i], line.coord}),
                             line.cuts[i] - line.cuts[i - 1]});
    }
  }
  for (const Line& line : vertical) {
    for (std::size_t i = 1; i < line.cuts.size(); ++i) {
      graph.edges.push_back({node_id(Point{line.coord, line.cuts[i - 1]}),
                             node_id(Point{line.coord, line.cuts[i]}),
                             line.cuts[i] - line.cuts[i - 1]});
    }
  }
  graph.origin_node = node_id(Point{0.0, 0.0});
  return graph;
}

StreetGraph build_graph(const ManhattanGrid& grid) {
  if (!origin_on_streets(grid))
    throw ConfigError("build_graph: origin does not lie on the street system");
  const auto segs =
      segments(grid, Rect::centered_square(grid.window_half_width));
  return build_graph(segs);
}

StreetGraph build_graph(const NestedManhattanGrid& grid) {
  if (!origin_on_streets(grid))
    throw ConfigError("build_graph: origin does not lie on the street system");
  const auto segs =
      segments(grid, Rect::centered_square(grid.window_half_width));
  return build_graph(segs);
}

std::vector<double> node_distances(const StreetGraph& graph) {
  const std::size_t n = graph.nodes.size();
  // CSR adjacency.
  std::vector<std::int32_t> degree(n, 0);
  for (const auto& e : graph.edges) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    offset[i + 1] = offset[i] + static_cast<std::size_t>(degree[i]);
  std::vector<std::pair<std::int32_t, double>> adj(offset[n]);
  std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
  for (const auto& e : graph.edges) {
    adj[fill[static_cast<std::size_t>(e.u)]++] = {e.v, e.length};
    adj[fill[static_cast<std::size_t>(e.v)]++] = {e.u, e.length};
  }

  std::vector<double> dist(n, kInf);
  using Entry = std::pair<double, std::int32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[static_cast<std::size_t>(graph.origin_node)] = 0.0;
  queue.push({0.0, graph.origin_node});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (std::size_t k = offset[static_cast<std::size_t>(u)];
         k < offset[static_cast<std::size_t>(u) + 1]; ++k) {
      const auto [v, len] = adj[k];
      const double nd = d + len;
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        queue.push({nd, v});
      }
    }
  }
  return dist;
}

int CellLevelProfiles::count(double r) const {
  const auto [lo, hi] =
      std::equal_range(node_dists.begin(), node_dists.end(), r);
  int c = static_cast<int>(hi - lo);
  for (const EdgeDistanceProfile& p : profiles) {
    // Apex of the tent profile, clamped into the piece.
    const double apex =
        std::clamp(0.5 * (p.d_v + p.length - p.d_u), 0.0, p.length);
    // Ascending branch on [0, apex): l(s) = d_u + s.
    const double s_up = r - p.d_u;
    if (s_up >= 0.0 && s_up < apex && !(s_up == 0.0 && p.u_is_node)) ++c;
    // Descending branch on [apex, length): l(s) = d_v + length - s.
    const double s_dn = p.d_v + p.length - r;
    if (s_dn >= apex && s_dn < p.length && !(s_dn == 0.0 && p.u_is_node)) ++c;
  }
  return c;
}

double CellLevelProfiles::street_length() const {
  double sum = 0.0;
  for (const EdgeDistanceProfile& p : profiles) sum += p.length;
  return sum;
}

CellLevelProfiles cell_level_profiles(const StreetGraph& graph,
                                      std::span<const double> distances,
                                      const ConvexCell& cell) {
  CellLevelProfiles out;

  Rect bbox{kInf, kInf, -kInf, -kInf};
  for (const Point& v : cell.vertices) {
    bbox.x0 = std::min(bbox.x0, v.x);
    bbox.y0 = std::min(bbox.y0, v.y);
    bbox.x1 = std::max(bbox.x1, v.x);
    bbox.y1 = std::max(bbox.y1, v.y);
  }

  for (const auto& e : graph.edges) {
    const Point a = graph.nodes[static_cast<std::size_t>(e.u)];
    const Point b = graph.nodes[static_cast<std::size_t>(e.v)];
    const double d_u = distances[static_cast<std::size_t>(e.u)];
    const double d_v = distances[static_cast<std::size_t>(e.v)];
    if (!std::isfinite(d_u) || !std::isfinite(d_v)) continue;
    if (std::max(a.x, b.x) < bbox.x0 - kGeomEps ||
        std::min(a.x, b.x) > bbox.x1 + kGeomEps ||
        std::max(a.y, b.y) < bbox.y0 - kGeomEps ||
        std::min(a.y, b.y) > bbox.y1 + kGeomEps)
      continue;
    const auto span = clip_segment_to_cell(cell, a, b);
    if (!span) continue;
    const auto [t0, t1] = *span;
    const double piece = (t1 - t0) * e.length;
    if (piece <= kGeomEps) continue;
    EdgeDistanceProfile p;
    p.d_u = d_u + t0 * e.length;
    p.d_v = d_v + (1.0 - t1) * e.length;
    p.length = piece;
    p.u_is_node = (t0 == 0.0);
    p.v_is_node = (t1 == 1.0);
    out.profiles.push_back(p);
  }

  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    if (!std::isfinite(distances[i])) continue;
    if (cell.contains(graph.nodes[i])) out.node_dists.push_back(distances[i]);
  }
  std::sort(out.node_dists.begin(), out.node_dists.end());
  return out;
}

int count_level_points(const StreetGraph& graph,
                       std::span<const double> distances,
                       const ConvexCell& cell, double r) {
  return cell_level_profiles(graph, distances, cell).count(r);
}

}  // namespace gridcell
