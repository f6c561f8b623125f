#include "gridcell/renewal.hpp"

#include <algorithm>
#include <cmath>

#include "gridcell/errors.hpp"

namespace gridcell {

namespace {

// Per-realization hard cap; a valid spec stays far below it, a degenerate
// one becomes a diagnosable error instead of a hang.
constexpr std::size_t kMaxPoints = 100'000'000;

void check_window(double window_half_width) {
  if (!(std::isfinite(window_half_width) && window_half_width > 0.0))
    throw ConfigError("renewal sampling requires window_half_width > 0");
}

void check_projected_count(const InterArrivalSpec& spec, double w) {
  const double projected = 2.0 * w / mean_interarrival(spec);
  if (projected > 1.1 * static_cast<double>(kMaxPoints))
    throw RunawayError(
        "renewal realization would exceed the point cap; "
        "inter-arrival mean is too small for this window");
}

[[noreturn]] void runaway() {
  throw RunawayError("renewal realization exceeded the hard point cap");
}

/// Appends start, start + I_1, start + I_1 + I_2, ... while <= w.
void extend_up(const InterArrivalSpec& spec, double w, double start,
               RandomStream& rng, std::vector<double>* out) {
  double p = start;
  while (p <= w) {
    out->push_back(p);
    if (out->size() > kMaxPoints) runaway();
    p += sample_interarrival(spec, rng);
  }
}

/// Appends start, start - I_1, ... while >= -w, in descending order.
void extend_down(const InterArrivalSpec& spec, double w, double start,
                 RandomStream& rng, std::vector<double>* out) {
  double p = start;
  while (p >= -w) {
    out->push_back(p);
    if (out->size() > kMaxPoints) runaway();
    p -= sample_interarrival(spec, rng);
  }
}

}  // namespace

RenewalRealization sample_stationary_renewal(const InterArrivalSpec& spec,
                                             double window_half_width,
                                             RandomStream& rng) {
  check_window(window_half_width);
  validate_spec(spec);
  check_projected_count(spec, window_half_width);

  const double covering_gap = sample_length_biased(spec, rng);
  const double mark = rng.uniform01();

  RenewalRealization out;
  out.window_half_width = window_half_width;
  out.flavor = RenewalFlavor::Stationary;

  // The covering gap splits as (mark*I*, (1-mark)*I*) around the origin.
  std::vector<double> down;
  extend_down(spec, window_half_width, (mark - 1.0) * covering_gap, rng,
              &down);
  std::reverse(down.begin(), down.end());
  out.points = std::move(down);
  extend_up(spec, window_half_width, mark * covering_gap, rng, &out.points);
  return out;
}

RenewalRealization sample_palm_renewal(const InterArrivalSpec& spec,
                                       double window_half_width,
                                       RandomStream& rng) {
  check_window(window_half_width);
  validate_spec(spec);
  check_projected_count(spec, window_half_width);

  RenewalRealization out;
  out.window_half_width = window_half_width;
  out.flavor = RenewalFlavor::Palm;

  std::vector<double> down;
  double p = -sample_interarrival(spec, rng);
  while (p >= -window_half_width) {
    down.push_back(p);
    if (down.size() > kMaxPoints) runaway();
    p -= sample_interarrival(spec, rng);
  }
  std::reverse(down.begin(), down.end());
  out.points = std::move(down);
  out.points.push_back(0.0);
  extend_up(spec, window_half_width, sample_interarrival(spec, rng), rng,
            &out.points);
  return out;
}

}  // namespace gridcell
