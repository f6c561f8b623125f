#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gridcell/cell.hpp"
#include "gridcell/geometry.hpp"
#include "gridcell/streets.hpp"

namespace gridcell {

/// 1-skeleton of a street system within the window: nodes at street
/// crossings, T-junctions, window-boundary intersections and the origin;
/// edges are the street pieces between consecutive nodes along a line.
struct StreetGraph {
  struct Edge {
    std::int32_t u = -1;
    std::int32_t v = -1;
    double length = 0.0;
  };

  std::vector<Point> nodes;
  std::vector<Edge> edges;
  std::int32_t origin_node = -1;

  double total_edge_length() const;
};

/// Builds the street graph from maximal street segments. The origin must
/// lie on some segment (Palm flavor upstream); otherwise a construction
/// error is thrown. `forced_nodes` become graph nodes on every segment
/// passing through them (exact coordinate match on the carrying line).
StreetGraph build_graph(std::span<const Segment> street_segments,
                        std::span<const Point> forced_nodes = {});
StreetGraph build_graph(const ManhattanGrid& grid);
StreetGraph build_graph(const NestedManhattanGrid& grid);

/// Single-source shortest-path distances from the origin node along edge
/// lengths; +infinity for nodes unreachable within the window.
std::vector<double> node_distances(const StreetGraph& graph);

/// Shortest-path length restricted to one cell-clipped edge piece,
/// s -> min(d_u + s, d_v + length - s) for s in [0, length].
struct EdgeDistanceProfile {
  double d_u = 0.0;
  double d_v = 0.0;
  double length = 0.0;
  bool u_is_node = false;  // piece starts at a graph node (not a cell cut)
  bool v_is_node = false;
};

/// All edge pieces of the street system inside the cell, plus the in-cell
/// node distances; evaluates N_r = #{y in cell ^ streets : l(y) = r}.
struct CellLevelProfiles {
  std::vector<EdgeDistanceProfile> profiles;
  std::vector<double> node_dists;  // sorted, nodes inside the cell

  /// Number of street points inside the cell at path distance exactly r.
  /// Solutions at breakpoints follow a half-open convention along each
  /// piece and are counted once.
  int count(double r) const;

  /// Total street length inside the cell.
  double street_length() const;
};

CellLevelProfiles cell_level_profiles(const StreetGraph& graph,
                                      std::span<const double> distances,
                                      const ConvexCell& cell);

/// Convenience one-shot form; prefer cell_level_profiles + count when
/// evaluating many r values on one realization.
int count_level_points(const StreetGraph& graph,
                       std::span<const double> distances,
                       const ConvexCell& cell, double r);

}  // namespace gridcell
