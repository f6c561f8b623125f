#include "gridcell/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>

#include "gridcell/cell.hpp"
#include "gridcell/cox.hpp"
#include "gridcell/errors.hpp"
#include "gridcell/estimator.hpp"
#include "gridcell/graph.hpp"
#include "gridcell/stats.hpp"
#include "gridcell/streets.hpp"

namespace gridcell {

namespace {

constexpr double kKsAlpha = 0.01;

std::string format_pair(double observed, double bound) {
  std::ostringstream os;
  os << "observed " << observed << ", bound " << bound;
  return os.str();
}

ValidationCheck check_close(std::string name, double observed, double expected,
                            double rel_tol) {
  ValidationCheck c;
  c.name = std::move(name);
  c.observed = observed;
  c.bound = rel_tol;
  c.passed = std::abs(observed - expected) <= rel_tol * std::abs(expected);
  std::ostringstream os;
  os << "observed " << observed << ", expected " << expected << " +- "
     << rel_tol * 100.0 << "%";
  c.detail = os.str();
  return c;
}

ValidationCheck check_below(std::string name, double observed, double bound) {
  ValidationCheck c;
  c.name = std::move(name);
  c.observed = observed;
  c.bound = bound;
  c.passed = observed < bound;
  c.detail = format_pair(observed, bound);
  return c;
}

ValidationCheck check_true(std::string name, bool condition,
                           std::string detail) {
  ValidationCheck c;
  c.name = std::move(name);
  c.passed = condition;
  c.observed = condition ? 1.0 : 0.0;
  c.bound = 1.0;
  c.detail = std::move(detail);
  return c;
}

ValidationCheck ks_check(std::string name, std::vector<double> a,
                         std::vector<double> b) {
  const double critical = stats::ks_critical_value(a.size(), b.size(), kKsAlpha);
  const double d = stats::ks_statistic(std::move(a), std::move(b));
  return check_below(std::move(name), d, critical);
}

Point length_uniform_point(std::span<const Segment> segs, RandomStream& rng) {
  double total = 0.0;
  for (const Segment& s : segs) total += s.length();
  double target = rng.uniform01() * total;
  for (const Segment& s : segs) {
    const double len = s.length();
    if (target <= len || &s == &segs.back()) {
      const double t = len > 0.0 ? std::clamp(target / len, 0.0, 1.0) : 0.0;
      return Point{s.a.x + t * (s.b.x - s.a.x), s.a.y + t * (s.b.y - s.a.y)};
    }
    target -= len;
  }
  return Point{0.0, 0.0};
}

/// Distance resolution of the recentring functionals. Deterministic specs
/// put atoms in the gap laws; the Palm and the recentred construction
/// reach them through different summation orders, so raw doubles would
/// land the same atom a few ulps apart and inflate the KS statistic.
double quantize(double x) { return std::round(x * 1e9) * 1e-9; }

/// Distances from `o` to the nearest line strictly above/below/right/left,
/// ignoring lines through `o` itself and censoring at `censor`.
struct DirectionalGaps {
  double up, down, right, left;
};

DirectionalGaps directional_gaps(std::span<const double> xs,
                                 std::span<const double> ys, Point o,
                                 double censor) {
  DirectionalGaps g{censor, censor, censor, censor};
  for (double y : ys) {
    const double d = y - o.y;
    if (d > kGeomEps) g.up = std::min(g.up, d);
    if (-d > kGeomEps) g.down = std::min(g.down, -d);
  }
  for (double x : xs) {
    const double d = x - o.x;
    if (d > kGeomEps) g.right = std::min(g.right, d);
    if (-d > kGeomEps) g.left = std::min(g.left, -d);
  }
  g.up = quantize(g.up);
  g.down = quantize(g.down);
  g.right = quantize(g.right);
  g.left = quantize(g.left);
  return g;
}

double point_segment_distance(Point p, const Segment& s) {
  const double dx = s.b.x - s.a.x;
  const double dy = s.b.y - s.a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0
                 ? ((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2
                 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, Point{s.a.x + t * dx, s.a.y + t * dy});
}

/// Distance to the nearest street not passing through `o`.
double nearest_other_street(std::span<const Segment> segs, Point o,
                            double censor) {
  double best = censor;
  for (const Segment& s : segs) {
    const double d = point_segment_distance(o, s);
    if (d > kGeomEps) best = std::min(best, d);
  }
  return quantize(best);
}

/// Indices sampled with probability proportional to `weights`, with
/// replacement; realizes length-weighted selection of pool realizations.
std::vector<std::size_t> weighted_indices(std::span<const double> weights,
                                          std::size_t count,
                                          RandomStream& rng) {
  std::vector<double> cumulative(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    total += weights[i];
    cumulative[i] = total;
  }
  std::vector<std::size_t> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double target = rng.uniform01() * total;
    out[k] = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), target) -
        cumulative.begin());
    if (out[k] >= weights.size()) out[k] = weights.size() - 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// renewal suite

ValidationReport suite_renewal(std::uint64_t seed, int /*threads*/) {
  ValidationReport report;
  report.suite = "renewal";
  RandomStream root(seed);

  {  // Stationary intensity = 1/E[I], empirical over many realizations.
    const struct {
      const char* name;
      InterArrivalSpec spec;
    } cases[] = {
        {"exponential", InterArrivalSpec::exponential(1.0)},
        {"truncated_gaussian", InterArrivalSpec::truncated_gaussian(1.0, 0.25)},
        {"deterministic", InterArrivalSpec::deterministic(1.0)},
    };
    int case_id = 0;
    for (const auto& c : cases) {
      auto rng = root.substream(10 + static_cast<std::uint64_t>(case_id++));
      const double w = 50.0;
      const int reps = 1000;
      std::uint64_t count = 0;
      for (int i = 0; i < reps; ++i) {
        auto r = rng.substream(static_cast<std::uint64_t>(i));
        count += sample_stationary_renewal(c.spec, w, r).points.size();
      }
      const double per_unit =
          static_cast<double>(count) / (2.0 * w * static_cast<double>(reps));
      report.checks.push_back(check_close(
          std::string("renewal.intensity.") + c.name, per_unit,
          1.0 / mean_interarrival(c.spec), 0.01));
    }
  }

  {  // Waiting-time paradox: the gap covering the origin has mean
     // E[I^2]/E[I]; for Exponential(1) that is exactly 2.
    auto rng = root.substream(20);
    const auto spec = InterArrivalSpec::exponential(1.0);
    const double w = 30.0;
    const int reps = 100000;
    double sum = 0.0;
    int used = 0;
    for (int i = 0; i < reps; ++i) {
      auto r = rng.substream(static_cast<std::uint64_t>(i));
      const auto real = sample_stationary_renewal(spec, w, r);
      double below = -std::numeric_limits<double>::infinity();
      double above = std::numeric_limits<double>::infinity();
      for (double p : real.points) {
        if (p <= 0.0) below = std::max(below, p);
        if (p > 0.0) above = std::min(above, p);
      }
      if (std::isfinite(below) && std::isfinite(above)) {
        sum += above - below;
        ++used;
      }
    }
    report.checks.push_back(check_close("renewal.waiting_time_paradox",
                                        sum / used, 2.0, 0.01));
  }

  {  // Palm gaps are iid with law L(I).
    auto rng_palm = root.substream(30);
    auto rng_direct = root.substream(31);
    const auto spec = InterArrivalSpec::truncated_gaussian(1.0, 0.25);
    const int n = 10000;
    std::vector<double> palm_gaps, direct;
    palm_gaps.reserve(static_cast<std::size_t>(n));
    direct.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      auto r = rng_palm.substream(static_cast<std::uint64_t>(i));
      const auto real = sample_palm_renewal(spec, 25.0, r);
      const auto it =
          std::upper_bound(real.points.begin(), real.points.end(), 0.0);
      if (it != real.points.end()) palm_gaps.push_back(*it);
      direct.push_back(sample_interarrival(spec, rng_direct));
    }
    report.checks.push_back(
        ks_check("renewal.palm_gap_law", std::move(palm_gaps),
                 std::move(direct)));
  }

  {  // Stationarity: forward recurrence time has the same law at any probe.
    auto rng = root.substream(40);
    const auto spec = InterArrivalSpec::exponential(1.0);
    const double w = 20.0;
    const double probe = 0.37 * w;
    const int n = 10000;
    std::vector<double> at_zero, at_probe;
    for (int i = 0; i < n; ++i) {
      auto r = rng.substream(static_cast<std::uint64_t>(i));
      const auto real = sample_stationary_renewal(spec, w, r);
      auto forward = [&real](double t) {
        const auto it =
            std::upper_bound(real.points.begin(), real.points.end(), t);
        return it != real.points.end()
                   ? *it - t
                   : std::numeric_limits<double>::quiet_NaN();
      };
      const double f0 = forward(0.0);
      const double fp = forward(probe);
      if (std::isfinite(f0)) at_zero.push_back(f0);
      if (std::isfinite(fp)) at_probe.push_back(fp);
    }
    report.checks.push_back(ks_check("renewal.stationarity_probe",
                                     std::move(at_zero), std::move(at_probe)));
  }

  return report;
}

// ---------------------------------------------------------------------------
// palm suite (recentring tests for the Palm street theorems)

void plain_recentring_checks(const std::string& label,
                             const InterArrivalSpec& spec_h,
                             const InterArrivalSpec& spec_v,
                             RandomStream root, ValidationReport* report) {
  const double censor = 4.0;
  const double pool_window = 2.0 * censor;
  const int n = 10000;

  // Palm-sampler side, functionals evaluated at the origin.
  std::vector<DirectionalGaps> palm_gaps;
  palm_gaps.reserve(static_cast<std::size_t>(n));
  auto rng_palm = root.substream(0);
  for (int i = 0; i < n; ++i) {
    auto r = rng_palm.substream(static_cast<std::uint64_t>(i));
    const auto palm = sample_manhattan_palm(spec_h, spec_v, censor, r);
    palm_gaps.push_back(directional_gaps(palm.grid.vertical_xs.points,
                                         palm.grid.horizontal_ys.points,
                                         Point{0.0, 0.0}, censor));
  }

  // Stationary side: a pool of realizations, selected with probability
  // proportional to street length in the central box, then recentred at a
  // length-uniform point.
  auto rng_pool = root.substream(1);
  auto rng_pick = root.substream(2);
  const Rect box = Rect::centered_square(pool_window - censor);
  std::vector<ManhattanGrid> pool;
  std::vector<double> lengths;
  pool.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto r = rng_pool.substream(static_cast<std::uint64_t>(i));
    pool.push_back(sample_manhattan(spec_h, spec_v, pool_window, r));
    double len = 0.0;
    for (const Segment& s : segments(pool.back(), box)) len += s.length();
    lengths.push_back(len);
  }
  std::vector<DirectionalGaps> recentred;
  recentred.reserve(static_cast<std::size_t>(n));
  for (std::size_t index :
       weighted_indices(lengths, static_cast<std::size_t>(n), rng_pick)) {
    const auto& grid = pool[index];
    const auto segs = segments(grid, box);
    const Point p = length_uniform_point(segs, rng_pick);
    recentred.push_back(directional_gaps(grid.vertical_xs.points,
                                         grid.horizontal_ys.points, p,
                                         censor));
  }

  const struct {
    const char* name;
    double DirectionalGaps::* member;
  } marginals[] = {{"up", &DirectionalGaps::up},
                   {"down", &DirectionalGaps::down},
                   {"right", &DirectionalGaps::right},
                   {"left", &DirectionalGaps::left}};
  for (const auto& m : marginals) {
    std::vector<double> a, b;
    a.reserve(palm_gaps.size());
    b.reserve(recentred.size());
    for (const auto& g : palm_gaps) a.push_back(g.*(m.member));
    for (const auto& g : recentred) b.push_back(g.*(m.member));
    report->checks.push_back(ks_check(
        "palm.recentring." + label + "." + m.name, std::move(a), std::move(b)));
  }
}

void nested_recentring_checks(const std::string& label,
                              const InterArrivalSpec& main_h,
                              const InterArrivalSpec& main_v,
                              const InterArrivalSpec& side_h,
                              const InterArrivalSpec& side_v,
                              RandomStream root, ValidationReport* report) {
  const double censor = 4.0;
  const double pool_window = 2.0 * censor;
  const int n = 10000;

  std::vector<double> palm_main, palm_other;
  auto rng_palm = root.substream(0);
  for (int i = 0; i < n; ++i) {
    auto r = rng_palm.substream(static_cast<std::uint64_t>(i));
    const auto palm =
        sample_nested_palm(main_h, main_v, side_h, side_v, censor, r);
    const auto gaps = directional_gaps(palm.grid.main.vertical_xs.points,
                                       palm.grid.main.horizontal_ys.points,
                                       Point{0.0, 0.0}, censor);
    double d_main = std::min(std::min(gaps.up, gaps.down),
                             std::min(gaps.right, gaps.left));
    if (origin_on_streets(palm.grid.main)) d_main = 0.0;
    palm_main.push_back(d_main);
    const auto segs =
        segments(palm.grid, Rect::centered_square(censor));
    palm_other.push_back(nearest_other_street(segs, Point{0.0, 0.0}, censor));
  }

  auto rng_pool = root.substream(1);
  auto rng_pick = root.substream(2);
  const Rect box = Rect::centered_square(pool_window - censor);
  std::vector<NestedManhattanGrid> pool;
  std::vector<double> lengths;
  pool.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto r = rng_pool.substream(static_cast<std::uint64_t>(i));
    pool.push_back(
        sample_nested(main_h, main_v, side_h, side_v, pool_window, r));
    double len = 0.0;
    for (const Segment& s : segments(pool.back(), box)) len += s.length();
    lengths.push_back(len);
  }
  std::vector<double> stat_main, stat_other;
  stat_main.reserve(static_cast<std::size_t>(n));
  for (std::size_t index :
       weighted_indices(lengths, static_cast<std::size_t>(n), rng_pick)) {
    const auto& grid = pool[index];
    const auto segs_box = segments(grid, box);
    const Point p = length_uniform_point(segs_box, rng_pick);
    const auto gaps = directional_gaps(grid.main.vertical_xs.points,
                                       grid.main.horizontal_ys.points, p,
                                       censor);
    double d_main = std::min(std::min(gaps.up, gaps.down),
                             std::min(gaps.right, gaps.left));
    // A probe exactly on a main street has main-distance zero.
    for (double x : grid.main.vertical_xs.points)
      if (std::abs(x - p.x) <= kGeomEps) d_main = 0.0;
    for (double y : grid.main.horizontal_ys.points)
      if (std::abs(y - p.y) <= kGeomEps) d_main = 0.0;
    stat_main.push_back(d_main);
    const auto segs_local =
        segments(grid, Rect{p.x - censor, p.y - censor, p.x + censor,
                            p.y + censor});
    stat_other.push_back(nearest_other_street(segs_local, p, censor));
  }

  report->checks.push_back(ks_check("palm.nested." + label + ".main_distance",
                                    std::move(palm_main),
                                    std::move(stat_main)));
  report->checks.push_back(ks_check("palm.nested." + label + ".other_street",
                                    std::move(palm_other),
                                    std::move(stat_other)));
}

ValidationReport suite_palm(std::uint64_t seed, int /*threads*/) {
  ValidationReport report;
  report.suite = "palm";
  RandomStream root(seed);

  plain_recentring_checks("symmetric",
                          InterArrivalSpec::truncated_gaussian(1.0, 0.25),
                          InterArrivalSpec::truncated_gaussian(1.0, 0.25),
                          root.substream(0), &report);
  plain_recentring_checks("asymmetric", InterArrivalSpec::exponential(1.0),
                          InterArrivalSpec::deterministic(1.0),
                          root.substream(1), &report);
  nested_recentring_checks("symmetric",
                           InterArrivalSpec::truncated_gaussian(4.0, 0.4),
                           InterArrivalSpec::truncated_gaussian(4.0, 0.4),
                           InterArrivalSpec::truncated_gaussian(1.0, 0.1),
                           InterArrivalSpec::truncated_gaussian(1.0, 0.1),
                           root.substream(2), &report);

  {  // Mixture weights of the Palm branch choices.
    auto rng = root.substream(3);
    const auto h = InterArrivalSpec::deterministic(1.0);
    const auto v = InterArrivalSpec::deterministic(10.0);
    const int n = 100000;
    int on_horizontal = 0;
    for (int i = 0; i < n; ++i) {
      auto r = rng.substream(static_cast<std::uint64_t>(i));
      if (sample_manhattan_palm(h, v, 1.0, r).chosen == PalmAxis::OnHorizontal)
        ++on_horizontal;
    }
    report.checks.push_back(check_close(
        "palm.mixture_weight.ratio10",
        static_cast<double>(on_horizontal) / static_cast<double>(n),
        10.0 / 11.0, 0.01));
  }

  {  // Nested branch weight gamma/gamma_bar for Det(10) main, Det(1) side.
    auto rng = root.substream(4);
    const auto main_spec = InterArrivalSpec::deterministic(10.0);
    const auto side_spec = InterArrivalSpec::deterministic(1.0);
    const int n = 1000000;
    int main_branch = 0;
    for (int i = 0; i < n; ++i) {
      auto r = rng.substream(static_cast<std::uint64_t>(i));
      const auto palm = sample_nested_palm(main_spec, main_spec, side_spec,
                                           side_spec, 1.0, r);
      if (palm.branch == NestedPalmBranch::MainPalm) ++main_branch;
    }
    report.checks.push_back(check_close(
        "palm.nested_branch_weight",
        static_cast<double>(main_branch) / static_cast<double>(n),
        0.2 / 2.2, 0.01));
  }

  return report;
}

// ---------------------------------------------------------------------------
// cox suite

ValidationReport suite_cox(std::uint64_t seed, int /*threads*/) {
  ValidationReport report;
  report.suite = "cox";
  RandomStream root(seed);

  {  // Poisson count moments on a single segment.
    auto rng = root.substream(0);
    const Segment seg{Point{0.0, 0.0}, Point{10.0, 0.0},
                      Orientation::Horizontal, Provenance::Main};
    const double lambda = 0.5;
    const int n = 100000;
    std::vector<double> counts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      counts[static_cast<std::size_t>(i)] = static_cast<double>(
          sample_cox(std::span(&seg, 1), lambda, rng).points.size());
    report.checks.push_back(
        check_close("cox.count_mean", stats::mean(counts), 5.0, 0.01));
    report.checks.push_back(check_close(
        "cox.count_variance", stats::sample_variance(counts), 5.0, 0.03));
  }

  {  // Campbell: expected total count is lambda * |S|.
    auto rng_grid = root.substream(1);
    auto rng_cox = root.substream(2);
    const auto spec = InterArrivalSpec::deterministic(1.0);
    const auto grid = sample_manhattan(spec, spec, 10.0, rng_grid);
    const auto segs = segments(grid, Rect::centered_square(10.0));
    double total_len = 0.0;
    for (const Segment& s : segs) total_len += s.length();
    const double lambda = 0.02;
    const int n = 10000;
    std::uint64_t total = 0;
    for (int i = 0; i < n; ++i)
      total += sample_cox(segs, lambda, rng_cox).points.size();
    report.checks.push_back(check_close(
        "cox.campbell_total_count",
        static_cast<double>(total) / static_cast<double>(n),
        lambda * total_len, 0.01));
  }

  {  // Counts in disjoint segment families are uncorrelated.
    auto rng = root.substream(3);
    std::vector<Segment> segs;
    for (int k = 0; k < 10; ++k)
      segs.push_back(Segment{Point{0.0, static_cast<double>(k)},
                             Point{5.0, static_cast<double>(k)},
                             Orientation::Horizontal, Provenance::Main});
    const int n = 10000;
    std::vector<double> first(static_cast<std::size_t>(n)),
        second(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      // Split the carrier so the two halves are sampled in one call.
      const auto pattern = sample_cox(segs, 0.4, rng);
      int a = 0, b = 0;
      for (const Point& p : pattern.points)
        (p.y <= 4.0 ? a : b) += 1;
      first[static_cast<std::size_t>(i)] = a;
      second[static_cast<std::size_t>(i)] = b;
    }
    const double ma = stats::mean(first);
    const double mb = stats::mean(second);
    double cov = 0.0;
    for (int i = 0; i < n; ++i)
      cov += (first[static_cast<std::size_t>(i)] - ma) *
             (second[static_cast<std::size_t>(i)] - mb);
    cov /= static_cast<double>(n - 1);
    const double corr =
        cov / std::sqrt(stats::sample_variance(first) *
                        stats::sample_variance(second));
    report.checks.push_back(
        check_below("cox.disjoint_independence", std::abs(corr), 0.03));
  }

  return report;
}

// ---------------------------------------------------------------------------
// cell suite

ValidationReport suite_cell(std::uint64_t seed, int /*threads*/) {
  ValidationReport report;
  report.suite = "cell";
  RandomStream root(seed);

  const auto spec = InterArrivalSpec::truncated_gaussian(1.0, 0.25);
  const double w = 20.0;
  const double lambda = 0.05;

  {  // Probe oracle: every point of the cell is closest to the origin.
    auto rng = root.substream(0);
    int instances_ok = 0;
    const int instances = 20;
    for (int k = 0; k < instances; ++k) {
      auto r = rng.substream(static_cast<std::uint64_t>(k));
      auto street_rng = r.substream(0);
      auto cox_rng = r.substream(1);
      auto probe_rng = r.substream(2);
      const auto palm = sample_manhattan_palm(spec, spec, w, street_rng);
      const auto segs = segments(palm.grid, Rect::centered_square(w));
      const auto pattern = sample_cox(segs, lambda, cox_rng);
      const auto cell = voronoi_cell_at_origin(pattern, w);
      bool ok = true;
      int probes = 0;
      while (probes < 200) {
        const Point p{(probe_rng.uniform01() * 2.0 - 1.0) * cell.circumradius,
                      (probe_rng.uniform01() * 2.0 - 1.0) * cell.circumradius};
        if (!cell.contains(p)) continue;
        ++probes;
        const double d0 = norm(p);
        for (const Point& y : pattern.points)
          if (distance(p, y) < d0 - 1e-9) ok = false;
      }
      if (ok) ++instances_ok;
    }
    report.checks.push_back(check_true(
        "cell.nearest_neighbor_probes", instances_ok == instances,
        format_pair(instances_ok, instances)));
  }

  {  // Shoelace area against a rasterized brute-force cell.
    auto rng = root.substream(1);
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      auto r = rng.substream(static_cast<std::uint64_t>(k));
      auto street_rng = r.substream(0);
      auto cox_rng = r.substream(1);
      const auto palm = sample_manhattan_palm(spec, spec, w, street_rng);
      const auto segs = segments(palm.grid, Rect::centered_square(w));
      const auto pattern = sample_cox(segs, lambda, cox_rng);
      const auto cell = voronoi_cell_at_origin(pattern, w);

      Rect bbox{0.0, 0.0, 0.0, 0.0};
      for (const Point& v : cell.vertices) {
        bbox.x0 = std::min(bbox.x0, v.x);
        bbox.y0 = std::min(bbox.y0, v.y);
        bbox.x1 = std::max(bbox.x1, v.x);
        bbox.y1 = std::max(bbox.y1, v.y);
      }
      std::vector<Point> near_sites;
      const double reach =
          2.5 * std::max({std::abs(bbox.x0), std::abs(bbox.x1),
                          std::abs(bbox.y0), std::abs(bbox.y1)});
      for (const Point& y : pattern.points)
        if (norm(y) <= reach) near_sites.push_back(y);

      const int grid_n = 1000;
      const double hx = (bbox.x1 - bbox.x0) / grid_n;
      const double hy = (bbox.y1 - bbox.y0) / grid_n;
      std::int64_t inside = 0;
      for (int i = 0; i < grid_n; ++i) {
        const double px = bbox.x0 + (i + 0.5) * hx;
        for (int j = 0; j < grid_n; ++j) {
          const double py = bbox.y0 + (j + 0.5) * hy;
          const double d0 = px * px + py * py;
          bool origin_nearest = true;
          for (const Point& y : near_sites) {
            const double dx = px - y.x, dy = py - y.y;
            if (dx * dx + dy * dy < d0) {
              origin_nearest = false;
              break;
            }
          }
          if (origin_nearest) ++inside;
        }
      }
      const double raster_area = static_cast<double>(inside) * hx * hy;
      worst = std::max(worst,
                       std::abs(raster_area - cell.area()) / cell.area());
    }
    report.checks.push_back(check_below("cell.area_vs_raster", worst, 0.005));
  }

  {  // Clipping order invariance: shuffled site order, same polygon.
    auto rng = root.substream(2);
    auto street_rng = rng.substream(0);
    auto cox_rng = rng.substream(1);
    const auto palm = sample_manhattan_palm(spec, spec, w, street_rng);
    const auto segs = segments(palm.grid, Rect::centered_square(w));
    auto pattern = sample_cox(segs, lambda, cox_rng);
    const auto reference = voronoi_cell_at_origin(pattern, w);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      for (std::size_t i = pattern.points.size(); i > 1; --i) {
        const std::size_t j =
            static_cast<std::size_t>(rng.next_u64() % i);
        std::swap(pattern.points[i - 1], pattern.points[j]);
      }
      const auto shuffled = voronoi_cell_at_origin(pattern, w);
      if (shuffled.vertices.size() != reference.vertices.size()) {
        worst = std::numeric_limits<double>::infinity();
        break;
      }
      for (const Point& v : shuffled.vertices) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const Point& u : reference.vertices)
          nearest = std::min(nearest, distance(u, v));
        worst = std::max(worst, nearest);
      }
    }
    report.checks.push_back(
        check_below("cell.clip_order_invariance", worst, 1e-12));
  }

  return report;
}

// ---------------------------------------------------------------------------
// graph suite

ValidationReport suite_graph(std::uint64_t seed, int /*threads*/) {
  ValidationReport report;
  report.suite = "graph";
  RandomStream root(seed);

  {  // Edge-length bookkeeping on a random nested Palm grid.
    auto rng = root.substream(0);
    const auto main_spec = InterArrivalSpec::truncated_gaussian(4.0, 0.4);
    const auto side_spec = InterArrivalSpec::truncated_gaussian(1.0, 0.1);
    const auto palm = sample_nested_palm(main_spec, main_spec, side_spec,
                                         side_spec, 6.0, rng);
    const auto segs = segments(palm.grid, Rect::centered_square(6.0));
    double seg_len = 0.0;
    for (const Segment& s : segs) seg_len += s.length();
    const auto graph = build_graph(segs);
    report.checks.push_back(check_below(
        "graph.length_bookkeeping",
        std::abs(graph.total_edge_length() - seg_len) / seg_len, 1e-9));
  }

  {  // Path distances dominate both the Euclidean and L1 lower bounds.
    auto rng = root.substream(1);
    const auto spec = InterArrivalSpec::truncated_gaussian(1.0, 0.25);
    const auto palm = sample_manhattan_palm(spec, spec, 10.0, rng);
    const auto graph = build_graph(palm.grid);
    const auto dists = node_distances(graph);
    bool ok = true;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
      if (!std::isfinite(dists[i])) continue;
      const Point p = graph.nodes[i];
      const double l1 = std::abs(p.x) + std::abs(p.y);
      if (dists[i] < l1 - 1e-9 || dists[i] < norm(p) - 1e-9) ok = false;
    }
    report.checks.push_back(
        check_true("graph.metric_lower_bounds", ok, "L1 and Euclidean"));
  }

  {  // On the unit lattice with the origin at a crossing, exactly four
     // street points sit at every distance r < 1/2.
    auto rng = root.substream(2);
    const auto spec = InterArrivalSpec::deterministic(1.0);
    auto rng_v = rng.substream(0);
    auto rng_h = rng.substream(1);
    ManhattanGrid grid;
    grid.window_half_width = 6.0;
    grid.vertical_xs = sample_palm_renewal(spec, 6.0, rng_v);
    grid.horizontal_ys = sample_palm_renewal(spec, 6.0, rng_h);
    const auto graph = build_graph(grid);
    const auto dists = node_distances(graph);
    ConvexCell cell;
    cell.vertices = {Point{-2.0, -2.0}, Point{2.0, -2.0}, Point{2.0, 2.0},
                     Point{-2.0, 2.0}};
    cell.circumradius = 2.0 * std::numbers::sqrt2;
    cell.bounded_certificate = true;
    const auto profiles = cell_level_profiles(graph, dists, cell);
    bool ok = true;
    for (double r : {0.1, 0.25, 0.4, 0.49})
      if (profiles.count(r) != 4) ok = false;
    report.checks.push_back(
        check_true("graph.lattice_crossing_count", ok, "N_r = 4 for r < 1/2"));
  }

  {  // Co-area identity: solution r-intervals tile the in-cell street length.
    auto rng = root.substream(3);
    const auto spec = InterArrivalSpec::truncated_gaussian(1.0, 0.25);
    auto street_rng = rng.substream(0);
    auto cox_rng = rng.substream(1);
    const auto palm = sample_manhattan_palm(spec, spec, 20.0, street_rng);
    const auto segs = segments(palm.grid, Rect::centered_square(20.0));
    const auto pattern = sample_cox(segs, 0.05, cox_rng);
    const auto cell = voronoi_cell_at_origin(pattern, 20.0);
    const auto graph = build_graph(segs);
    const auto dists = node_distances(graph);
    const auto profiles = cell_level_profiles(graph, dists, cell);
    double interval_total = 0.0;
    for (const auto& p : profiles.profiles) {
      const double apex =
          std::clamp(0.5 * (p.d_v + p.length - p.d_u), 0.0, p.length);
      interval_total += apex + (p.length - apex);
    }
    report.checks.push_back(check_below(
        "graph.coarea_identity",
        std::abs(interval_total - profiles.street_length()) /
            profiles.street_length(),
        1e-9));
  }

  {  // Shortest paths may leave the cell: distances on the full window
     // must not exceed distances restricted to the cell region.
    std::vector<Segment> full;
    full.push_back(Segment{Point{-5.0, 0.0}, Point{5.0, 0.0},
                           Orientation::Horizontal, Provenance::Main});
    full.push_back(Segment{Point{-5.0, 0.4}, Point{5.0, 0.4},
                           Orientation::Horizontal, Provenance::Main});
    full.push_back(Segment{Point{-4.0, -1.0}, Point{-4.0, 1.0},
                           Orientation::Vertical, Provenance::Main});
    // Probe node on the parallel street right above the origin.
    full.push_back(Segment{Point{0.1, 0.3}, Point{0.1, 0.5},
                           Orientation::Vertical, Provenance::Side});
    const auto graph = build_graph(full);
    const auto dists = node_distances(graph);
    double full_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < graph.nodes.size(); ++i)
      if (graph.nodes[i].x == 0.1 && graph.nodes[i].y == 0.4)
        full_distance = dists[i];
    // Restricted to the cell-sized box there is no vertical connection.
    std::vector<Segment> restricted;
    restricted.push_back(Segment{Point{-1.0, 0.0}, Point{1.0, 0.0},
                                 Orientation::Horizontal, Provenance::Main});
    restricted.push_back(Segment{Point{-1.0, 0.4}, Point{1.0, 0.4},
                                 Orientation::Horizontal, Provenance::Main});
    restricted.push_back(Segment{Point{0.1, 0.3}, Point{0.1, 0.5},
                                 Orientation::Vertical, Provenance::Side});
    const auto graph_r = build_graph(restricted);
    const auto dists_r = node_distances(graph_r);
    double restricted_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < graph_r.nodes.size(); ++i)
      if (graph_r.nodes[i].x == 0.1 && graph_r.nodes[i].y == 0.4)
        restricted_distance = dists_r[i];
    const bool ok = std::abs(full_distance - 8.5) < 1e-9 &&
                    !std::isfinite(restricted_distance);
    report.checks.push_back(check_true(
        "graph.full_window_paths", ok,
        "path exits the cell: full-window distance 8.5, in-cell unreachable"));
  }

  return report;
}

// ---------------------------------------------------------------------------
// estimator suite

ValidationReport suite_estimator(std::uint64_t seed, int threads) {
  ValidationReport report;
  report.suite = "estimator";
  RandomStream root(seed);
  EstimatorOptions options;
  options.threads = threads;

  const auto lattice = InterArrivalSpec::deterministic(1.0);

  {  // Lattice-limit phases at modest n using 3-sigma bands.
    ExperimentConfig config;
    config.streets.horizontal = lattice;
    config.streets.vertical = lattice;
    config.lambda = 0.02;
    config.n = 1000;
    for (int j = 1; j <= 100; ++j) config.r_grid.push_back(0.025 * j);
    config.master_seed = root.substream(0).key();
    const auto est = estimate_spl_density(config, options);
    auto at = [&](double r) {
      std::size_t best = 0;
      for (std::size_t j = 0; j < est.r_grid.size(); ++j)
        if (std::abs(est.r_grid[j] - r) < std::abs(est.r_grid[best] - r))
          best = j;
      return best;
    };
    const std::size_t j1 = at(0.25);
    report.checks.push_back(check_below(
        "estimator.lattice_phase1",
        std::abs(est.f_hat[j1] - lattice_oracle_density(0.25, 0.02, 1.0)),
        3.0 * est.stderrs[j1] + 1e-12));
    const std::size_t j2 = at(1.5);
    report.checks.push_back(check_below(
        "estimator.lattice_phase2",
        std::abs(est.f_hat[j2] - lattice_oracle_density(1.5, 0.02, 1.0)),
        3.0 * est.stderrs[j2] + 1e-12));
    report.checks.push_back(check_below(
        "estimator.rejection_rate", est.rejection_rate, 0.001 + 1e-12));
  }

  {  // Total mass approaches one once the grid passes the cell scale.
    ExperimentConfig config;
    config.streets.horizontal = lattice;
    config.streets.vertical = lattice;
    config.lambda = 0.1;
    config.n = 500;
    for (int j = 1; j <= 150; ++j) config.r_grid.push_back(0.08 * j);
    config.master_seed = root.substream(1).key();
    const auto est = estimate_spl_density(config, options);
    const double mass = stats::trapezoid(est.r_grid, est.f_hat);
    const double se_mass = stats::trapezoid(est.r_grid, est.stderrs);
    report.checks.push_back(
        check_below("estimator.total_mass_upper", mass,
                    1.0 + 3.0 * se_mass));
    report.checks.push_back(check_true("estimator.total_mass_lower",
                                       mass > 0.85, format_pair(mass, 0.85)));
  }

  {  // Linearity in lambda near r = 0 at a fixed street seed set.
    ExperimentConfig config;
    config.streets.horizontal = lattice;
    config.streets.vertical = lattice;
    config.lambda = 0.02;
    config.n = 600;
    for (int j = 1; j <= 8; ++j) config.r_grid.push_back(0.01 * j);
    config.master_seed = root.substream(2).key();
    const auto base = estimate_spl_density(config, options);
    ExperimentConfig doubled = config;
    doubled.lambda = 0.04;
    const auto twice = estimate_spl_density(doubled, options);
    double base_avg = 0.0, twice_avg = 0.0, se = 0.0;
    for (std::size_t j = 0; j < base.r_grid.size(); ++j) {
      base_avg += base.f_hat[j];
      twice_avg += twice.f_hat[j];
      se += base.stderrs[j] + twice.stderrs[j];
    }
    report.checks.push_back(check_below(
        "estimator.lambda_linearity", std::abs(twice_avg - 2.0 * base_avg),
        3.0 * se));
  }

  {  // Scheduling independence: 1 worker and 2 workers, identical output.
    ExperimentConfig config;
    config.streets.horizontal = lattice;
    config.streets.vertical = lattice;
    config.lambda = 0.05;
    config.n = 64;
    for (int j = 1; j <= 40; ++j) config.r_grid.push_back(0.1 * j);
    config.master_seed = root.substream(3).key();
    EstimatorOptions one;
    one.threads = 1;
    EstimatorOptions two;
    two.threads = 2;
    const auto a = estimate_spl_density(config, one);
    const auto b = estimate_spl_density(config, two);
    bool identical = a.f_hat == b.f_hat && a.rejection_rate == b.rejection_rate;
    for (std::size_t j = 0; identical && j < a.stderrs.size(); ++j)
      identical = a.stderrs[j] == b.stderrs[j] ||
                  (std::isnan(a.stderrs[j]) && std::isnan(b.stderrs[j]));
    report.checks.push_back(check_true("estimator.thread_determinism",
                                       identical, "1 vs 2 worker threads"));
  }

  return report;
}

}  // namespace

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed; });
}

const std::vector<std::string>& validation_suite_names() {
  static const std::vector<std::string> names{"renewal", "palm",  "cox",
                                              "cell",    "graph", "estimator"};
  return names;
}

ValidationReport run_validation_suite(const std::string& suite,
                                      std::uint64_t seed, int threads) {
  if (suite == "renewal") return suite_renewal(seed, threads);
  if (suite == "palm") return suite_palm(seed, threads);
  if (suite == "cox") return suite_cox(seed, threads);
  if (suite == "cell") return suite_cell(seed, threads);
  if (suite == "graph") return suite_graph(seed, threads);
  if (suite == "estimator") return suite_estimator(seed, threads);
  throw ConfigError("unknown validation suite '" + suite + "'");
}

}  // namespace gridcell
