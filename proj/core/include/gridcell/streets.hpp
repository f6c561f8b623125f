#pragma once

#include <optional>
#include <vector>

#include "gridcell/distributions.hpp"
#include "gridcell/geometry.hpp"
#include "gridcell/renewal.hpp"
#include "gridcell/rng.hpp"

namespace gridcell {

/// Union of horizontal lines at renewal y-coordinates and vertical lines at
/// renewal x-coordinates, clipped to the square window [-W, W]^2.
struct ManhattanGrid {
  RenewalRealization vertical_xs;    // x-coordinates of vertical lines
  RenewalRealization horizontal_ys;  // y-coordinates of horizontal lines
  double window_half_width = 0.0;
};

/// Side-street Manhattan grid clipped to one block of the main grid.
/// Coordinates are absolute; streets span the block rectangle only.
struct SideBlock {
  Rect rect;
  std::vector<double> vertical_xs;    // within [rect.x0, rect.x1]
  std::vector<double> horizontal_ys;  // within [rect.y0, rect.y1]
};

/// Main Manhattan grid plus one independent side grid per block; blocks
/// tile the window region delimited by main-grid lines.
struct NestedManhattanGrid {
  ManhattanGrid main;
  std::vector<SideBlock> side_blocks;
  InterArrivalSpec side_spec_h;
  InterArrivalSpec side_spec_v;
  double window_half_width = 0.0;
};

enum class Orientation { Horizontal, Vertical };
enum class Provenance { Main, Side };

/// Maximal axis-aligned street piece; carrier for Cox sampling and the
/// street graph.
struct Segment {
  Point a;
  Point b;
  Orientation orientation = Orientation::Horizontal;
  Provenance provenance = Provenance::Main;

  double length() const { return (b.x - a.x) + (b.y - a.y); }
};

/// Expected street length per unit area, by street class.
struct Intensities {
  double gamma_h = 0.0;    // horizontal main streets
  double gamma_v = 0.0;    // vertical main streets
  double gamma = 0.0;      // gamma_h + gamma_v
  double gamma_1 = 0.0;    // side streets (0 without side specs)
  double gamma_bar = 0.0;  // gamma + gamma_1
};

Intensities intensities(
    const InterArrivalSpec& spec_h, const InterArrivalSpec& spec_v,
    const std::optional<InterArrivalSpec>& side_spec_h = std::nullopt,
    const std::optional<InterArrivalSpec>& side_spec_v = std::nullopt);

/// Stationary Manhattan grid: two independent stationary renewal processes.
ManhattanGrid sample_manhattan(const InterArrivalSpec& spec_h,
                               const InterArrivalSpec& spec_v,
                               double window_half_width, RandomStream& rng);

enum class PalmAxis { OnHorizontal, OnVertical };

struct PalmManhattanGrid {
  ManhattanGrid grid;
  PalmAxis chosen = PalmAxis::OnHorizontal;
};

/// Palm version of the Manhattan grid: with probability gamma_h/gamma the
/// origin lies on a horizontal street (Palm y-process, stationary
/// x-process); otherwise the roles are reversed.
PalmManhattanGrid sample_manhattan_palm(const InterArrivalSpec& spec_h,
                                        const InterArrivalSpec& spec_v,
                                        double window_half_width,
                                        RandomStream& rng);

/// Stationary nested grid: stationary main grid; every block (boundary
/// blocks included, clipped by the window) carries an independent
/// stationary side grid drawn from a per-block substream.
NestedManhattanGrid sample_nested(const InterArrivalSpec& main_spec_h,
                                  const InterArrivalSpec& main_spec_v,
                                  const InterArrivalSpec& side_spec_h,
                                  const InterArrivalSpec& side_spec_v,
                                  double window_half_width, RandomStream& rng);

enum class NestedPalmBranch { MainPalm, SidePalm };

struct PalmNestedGrid {
  NestedManhattanGrid grid;
  NestedPalmBranch branch = NestedPalmBranch::MainPalm;
};

/// Palm version of the nested grid: with probability gamma/gamma_bar the
/// main grid is Palm and all side grids stationary; otherwise the main grid
/// is stationary and the block containing the origin receives a Palm side
/// grid.
PalmNestedGrid sample_nested_palm(const InterArrivalSpec& main_spec_h,
                                  const InterArrivalSpec& main_spec_v,
                                  const InterArrivalSpec& side_spec_h,
                                  const InterArrivalSpec& side_spec_v,
                                  double window_half_width, RandomStream& rng);

/// Maximal axis-aligned sub-segments of the street system within `clip`
/// (which must lie inside the window). Collinear overlaps are merged, so
/// the summed length equals the street length |S intersect clip| exactly.
std::vector<Segment> segments(const ManhattanGrid& grid, const Rect& clip);
std::vector<Segment> segments(const NestedManhattanGrid& grid,
                              const Rect& clip);

/// True if (0, 0) lies on the street system (exact coordinate membership).
bool origin_on_streets(const ManhattanGrid& grid);
bool origin_on_streets(const NestedManhattanGrid& grid);

}  // namespace gridcell
