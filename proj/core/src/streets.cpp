#include "gridcell/streets.hpp"

#include <algorithm>
#include <cmath>

#include "gridcell/errors.hpp"

namespace gridcell {

namespace {

/// Axis-parallel street piece prior to overlap merging.
struct Piece {
  double coord;  // fixed coordinate of the carrying line
  double lo, hi; // extent along the line
  bool main;
};

void emit_merged(std::vector<Piece>& pieces, Orientation orientation,
                 std::vector<Segment>* out) {
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    if (a.coord != b.coord) return a.coord < b.coord;
    return a.lo < b.lo;
  });
  std::size_t i = 0;
  while (i < pieces.size()) {
    Piece cur = pieces[i];
    std::size_t j = i + 1;
    // Collinear pieces that overlap or touch collapse into one maximal
    // segment, so coincident streets are never double counted.
    while (j < pieces.size() && pieces[j].coord == cur.coord &&
           pieces[j].lo <= cur.hi) {
      cur.hi = std::max(cur.hi, pieces[j].hi);
      cur.main = cur.main || pieces[j].main;
      ++j;
    }
    if (cur.hi > cur.lo) {
      Segment seg;
      seg.orientation = orientation;
      seg.provenance = cur.main ? Provenance::Main : Provenance::Side;
      if (orientation == Orientation::Horizontal) {
        seg.a = Point{cur.lo, cur.coord};
        seg.b = Point{cur.hi, cur.coord};
      } else {
        seg.a = Point{cur.coord, cur.lo};
        seg.b = Point{cur.coord, cur.hi};
      }
      out->push_back(seg);
    }
    i = j;
  }
}

/// Interval breakpoints delimiting blocks along one axis.
std::vector<double> block_breaks(const std::vector<double>& coords, double w) {
  std::vector<double> breaks;
  breaks.reserve(coords.size() + 2);
  breaks.push_back(-w);
  for (double c : coords)
    if (c > -w && c < w) breaks.push_back(c);
  breaks.push_back(w);
  return breaks;
}

std::vector<double> shifted_into(const RenewalRealization& r, double center,
                                 double lo, double hi) {
  std::vector<double> out;
  out.reserve(r.points.size());
  for (double p : r.points) {
    const double q = p + center;
    if (q >= lo && q <= hi) out.push_back(q);
  }
  return out;
}

SideBlock stationary_side_block(const Rect& rect,
                                const InterArrivalSpec& side_spec_h,
                                const InterArrivalSpec& side_spec_v,
                                RandomStream rng) {
  SideBlock block;
  block.rect = rect;
  auto rng_v = rng.substream(0);
  auto rng_h = rng.substream(1);
  // A stationary process restricted to the block has the law of a window
  // realization translated to the block center.
  const double cx = 0.5 * (rect.x0 + rect.x1);
  const double cy = 0.5 * (rect.y0 + rect.y1);
  const auto xs =
      sample_stationary_renewal(side_spec_v, 0.5 * rect.width(), rng_v);
  const auto ys =
      sample_stationary_renewal(side_spec_h, 0.5 * rect.height(), rng_h);
  block.vertical_xs = shifted_into(xs, cx, rect.x0, rect.x1);
  block.horizontal_ys = shifted_into(ys, cy, rect.y0, rect.y1);
  return block;
}

/// Palm side grid for the block containing the origin: Palm Manhattan grid
/// seen from the origin, clipped to the block.
SideBlock palm_side_block(const Rect& rect,
                          const InterArrivalSpec& side_spec_h,
                          const InterArrivalSpec& side_spec_v,
                          RandomStream rng) {
  SideBlock block;
  block.rect = rect;
  const double cover = std::max(
      std::max(std::abs(rect.x0), std::abs(rect.x1)),
      std::max(std::abs(rect.y0), std::abs(rect.y1)));
  auto palm = sample_manhattan_palm(side_spec_h, side_spec_v, cover, rng);
  for (double x : palm.grid.vertical_xs.points)
    if (x >= rect.x0 && x <= rect.x1) block.vertical_xs.push_back(x);
  for (double y : palm.grid.horizontal_ys.points)
    if (y >= rect.y0 && y <= rect.y1) block.horizontal_ys.push_back(y);
  return block;
}

bool block_contains_origin(const Rect& rect) {
  // Half-open on the upper side so a coordinate coinciding with a main
  // street resolves deterministically.
  return rect.x0 <= 0.0 && 0.0 < rect.x1 && rect.y0 <= 0.0 && 0.0 < rect.y1;
}

template <typename PalmBlockAt>
std::vector<SideBlock> build_side_blocks(const ManhattanGrid& main, double w,
                                         const InterArrivalSpec& side_spec_h,
                                         const InterArrivalSpec& side_spec_v,
                                         RandomStream& block_root,
                                         PalmBlockAt&& palm_at) {
  const auto xb = block_breaks(main.vertical_xs.points, w);
  const auto yb = block_breaks(main.horizontal_ys.points, w);
  const std::size_t nx = xb.size() - 1;
  std::vector<SideBlock> blocks;
  blocks.reserve(nx * (yb.size() - 1));
  for (std::size_t iy = 0; iy + 1 < yb.size(); ++iy) {
    for (std::size_t ix = 0; ix + 1 < xb.size(); ++ix) {
      const Rect rect{xb[ix], yb[iy], xb[ix + 1], yb[iy + 1]};
      if (rect.degenerate()) continue;
      const std::uint64_t index = iy * nx + ix;
      auto rng_block = block_root.substream(index);
      if (palm_at(rect)) {
        blocks.push_back(
            palm_side_block(rect, side_spec_h, side_spec_v, rng_block));
      } else {
        blocks.push_back(
            stationary_side_block(rect, side_spec_h, side_spec_v, rng_block));
      }
    }
  }
  return blocks;
}

bool contains_exact(const std::vector<double>& sorted, double value) {
  return std::binary_search(sorted.begin(), sorted.end(), value);
}

}  // namespace

Intensities intensities(const InterArrivalSpec& spec_h,
                        const InterArrivalSpec& spec_v,
                        const std::optional<InterArrivalSpec>& side_spec_h,
                        const std::optional<InterArrivalSpec>& side_spec_v) {
  if (side_spec_h.has_value() != side_spec_v.has_value())
    throw ConfigError("nested model needs both side specs or neither");
  Intensities out;
  out.gamma_h = 1.0 / mean_interarrival(spec_h);
  out.gamma_v = 1.0 / mean_interarrival(spec_v);
  out.gamma = out.gamma_h + out.gamma_v;
  if (side_spec_h) {
    out.gamma_1 = 1.0 / mean_interarrival(*side_spec_h) +
                  1.0 / mean_interarrival(*side_spec_v);
  }
  out.gamma_bar = out.gamma + out.gamma_1;
  return out;
}

ManhattanGrid sample_manhattan(const InterArrivalSpec& spec_h,
                               const InterArrivalSpec& spec_v,
                               double window_half_width, RandomStream& rng) {
  auto rng_v = rng.substream(0);
  auto rng_h = rng.substream(1);
  ManhattanGrid grid;
  grid.window_half_width = window_half_width;
  grid.vertical_xs = sample_stationary_renewal(spec_v, window_half_width, rng_v);
  grid.horizontal_ys =
      sample_stationary_renewal(spec_h, window_half_width, rng_h);
  return grid;
}

PalmManhattanGrid sample_manhattan_palm(const InterArrivalSpec& spec_h,
                                        const InterArrivalSpec& spec_v,
                                        double window_half_width,
                                        RandomStream& rng) {
  const Intensities inten = intensities(spec_h, spec_v);
  const double u = rng.uniform01();
  auto rng_v = rng.substream(0);
  auto rng_h = rng.substream(1);

  PalmManhattanGrid out;
  out.grid.window_half_width = window_half_width;
  if (u <= inten.gamma_h / inten.gamma) {
    out.chosen = PalmAxis::OnHorizontal;
    out.grid.vertical_xs =
        sample_stationary_renewal(spec_v, window_half_width, rng_v);
    out.grid.horizontal_ys =
        sample_palm_renewal(spec_h, window_half_width, rng_h);
  } else {
    out.chosen = PalmAxis::OnVertical;
    out.grid.vertical_xs = sample_palm_renewal(spec_v, window_half_width, rng_v);
    out.grid.horizontal_ys =
        sample_stationary_renewal(spec_h, window_half_width, rng_h);
  }
  return out;
}

NestedManhattanGrid sample_nested(const InterArrivalSpec& main_spec_h,
                                  const InterArrivalSpec& main_spec_v,
                                  const InterArrivalSpec& side_spec_h,
                                  const InterArrivalSpec& side_spec_v,
                                  double window_half_width, RandomStream& rng) {
  auto rng_main = rng.substream(0);
  auto rng_blocks = rng.substream(1);
  NestedManhattanGrid grid;
  grid.window_half_width = window_half_width;
  grid.side_spec_h = side_spec_h;
  grid.side_spec_v = side_spec_v;
  grid.main =
      sample_manhattan(main_spec_h, main_spec_v, window_half_width, rng_main);
  grid.side_blocks =
      build_side_blocks(grid.main, window_half_width, side_spec_h, side_spec_v,
                        rng_blocks, [](const Rect&) { return false; });
  return grid;
}

PalmNestedGrid sample_nested_palm(const InterArrivalSpec& main_spec_h,
                                  const InterArrivalSpec& main_spec_v,
                                  const InterArrivalSpec& side_spec_h,
                                  const InterArrivalSpec& side_spec_v,
                                  double window_half_width, RandomStream& rng) {
  const Intensities inten =
      intensities(main_spec_h, main_spec_v, side_spec_h, side_spec_v);
  const double u = rng.uniform01();
  auto rng_main = rng.substream(0);
  auto rng_blocks = rng.substream(1);

  PalmNestedGrid out;
  out.grid.window_half_width = window_half_width;
  out.grid.side_spec_h = side_spec_h;
  out.grid.side_spec_v = side_spec_v;

  if (u <= inten.gamma / inten.gamma_bar) {
    out.branch = NestedPalmBranch::MainPalm;
    out.grid.main = sample_manhattan_palm(main_spec_h, main_spec_v,
                                          window_half_width, rng_main)
                        .grid;
    out.grid.side_blocks = build_side_blocks(
        out.grid.main, window_half_width, side_spec_h, side_spec_v, rng_blocks,
        [](const Rect&) { return false; });
  } else {
    out.branch = NestedPalmBranch::SidePalm;
    out.grid.main = sample_manhattan(main_spec_h, main_spec_v,
                                     window_half_width, rng_main);
    out.grid.side_blocks = build_side_blocks(
        out.grid.main, window_half_width, side_spec_h, side_spec_v, rng_blocks,
        [](const Rect& rect) { return block_contains_origin(rect); });
  }
  return out;
}

std::vector<Segment> segments(const ManhattanGrid& grid, const Rect& clip) {
  std::vector<Piece> horizontal, vertical;
  for (double y : grid.horizontal_ys.points)
    if (y >= clip.y0 && y <= clip.y1)
      horizontal.push_back({y, clip.x0, clip.x1, true});
  for (double x : grid.vertical_xs.points)
    if (x >= clip.x0 && x <= clip.x1)
      vertical.push_back({x, clip.y0, clip.y1, true});
  std::vector<Segment> out;
  out.reserve(horizontal.size() + vertical.size());
  emit_merged(horizontal, Orientation::Horizontal, &out);
  emit_merged(vertical, Orientation::Vertical, &out);
  return out;
}

std::vector<Segment> segments(const NestedManhattanGrid& grid,
                              const Rect& clip) {
  std::vector<Piece> horizontal, vertical;
  for (double y : grid.main.horizontal_ys.points)
    if (y >= clip.y0 && y <= clip.y1)
      horizontal.push_back({y, clip.x0, clip.x1, true});
  for (double x : grid.main.vertical_xs.points)
    if (x >= clip.x0 && x <= clip.x1)
      vertical.push_back({x, clip.y0, clip.y1, true});

  for (const SideBlock& block : grid.side_blocks) {
    const Rect sub = block.rect.intersect(clip);
    if (sub.x1 < sub.x0 || sub.y1 < sub.y0) continue;
    for (double y : block.horizontal_ys)
      if (y >= sub.y0 && y <= sub.y1 && sub.x1 > sub.x0)
        horizontal.push_back({y, sub.x0, sub.x1, false});
    for (double x : block.vertical_xs)
      if (x >= sub.x0 && x <= sub.x1 && sub.y1 > sub.y0)
        vertical.push_back({x, sub.y0, sub.y1, false});
  }

  std::vector<Segment> out;
  out.reserve(horizontal.size() + vertical.size());
  emit_merged(horizontal, Orientation::Horizontal, &out);
  emit_merged(vertical, Orientation::Vertical, &out);
  return out;
}

bool origin_on_streets(const ManhattanGrid& grid) {
  return contains_exact(grid.horizontal_ys.points, 0.0) ||
         contains_exact(grid.vertical_xs.points, 0.0);
}

bool origin_on_streets(const NestedManhattanGrid& grid) {
  if (origin_on_streets(grid.main)) return true;
  for (const SideBlock& block : grid.side_blocks) {
    const bool x_spans = block.rect.x0 <= 0.0 && 0.0 <= block.rect.x1;
    const bool y_spans = block.rect.y0 <= 0.0 && 0.0 <= block.rect.y1;
    if (y_spans && std::binary_search(block.vertical_xs.begin(),
                                      block.vertical_xs.end(), 0.0))
      return true;
    if (x_spans && std::binary_search(block.horizontal_ys.begin(),
                                      block.horizontal_ys.end(), 0.0))
      return true;
  }
  return false;
}

}  // namespace gridcell
