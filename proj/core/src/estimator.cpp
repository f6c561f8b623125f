#include "gridcell/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "gridcell/cell.hpp"
#include "gridcell/cox.hpp"
#include "gridcell/errors.hpp"
#include "gridcell/graph.hpp"
#include "gridcell/stats.hpp"

namespace gridcell {

namespace {

constexpr int kMaxAttemptsPerReplication = 12;
constexpr double kMaxRejectionRate = 0.05;

Intensities model_intensities(const StreetModelConfig& streets) {
  if (streets.nested) {
    if (!streets.side_horizontal || !streets.side_vertical)
      throw ConfigError("nested street model requires side specs");
    return intensities(streets.horizontal, streets.vertical,
                       streets.side_horizontal, streets.side_vertical);
  }
  return intensities(streets.horizontal, streets.vertical);
}

/// Attempt loop shared by the estimator and simulate_typical_cell: draws
/// Palm streets, Cox points and the cell, doubling the window from a
/// fresh substream until the adequacy certificate holds.
CellRealization realize_cell(const ExperimentConfig& config,
                             double base_window,
                             const RandomStream& replication_root) {
  const double r_max = config.r_grid.back();
  int rejections = 0;
  for (int attempt = 0; attempt < kMaxAttemptsPerReplication; ++attempt) {
    auto stream = replication_root.substream(
        static_cast<std::uint64_t>(attempt));
    const double w = base_window * std::ldexp(1.0, attempt);
    auto street_rng = stream.substream(0);
    auto cox_rng = stream.substream(1);

    CellRealization real;
    real.window_half_width = w;
    if (config.streets.nested) {
      real.nested_grid = sample_nested_palm(
                             config.streets.horizontal, config.streets.vertical,
                             *config.streets.side_horizontal,
                             *config.streets.side_vertical, w, street_rng)
                             .grid;
      real.street_segments =
          segments(*real.nested_grid, Rect::centered_square(w));
    } else {
      real.plain_grid = sample_manhattan_palm(config.streets.horizontal,
                                              config.streets.vertical, w,
                                              street_rng)
                            .grid;
      real.street_segments =
          segments(*real.plain_grid, Rect::centered_square(w));
    }

    real.pattern = sample_cox(real.street_segments, config.lambda, cox_rng);
    real.cell = voronoi_cell_at_origin(real.pattern, w);
    if (!real.cell.bounded_certificate ||
        r_max > w - real.cell.circumradius) {
      ++rejections;
      continue;
    }

    real.graph = build_graph(real.street_segments);
    real.distances = node_distances(real.graph);
    real.rejections = rejections;
    return real;
  }
  throw RejectionRateError(
      "replication failed the window certificate after repeated window "
      "doubling; increase window_half_width");
}

/// One accepted replication: counts per r-grid point plus the number of
/// certificate rejections it took.
struct ReplicationOutcome {
  std::vector<std::uint32_t> counts;
  int rejections = 0;
};

ReplicationOutcome run_replication(const ExperimentConfig& config,
                                   double base_window,
                                   const RandomStream& replication_root) {
  const CellRealization real =
      realize_cell(config, base_window, replication_root);
  const auto profiles =
      cell_level_profiles(real.graph, real.distances, real.cell);
  ReplicationOutcome outcome;
  outcome.rejections = real.rejections;
  outcome.counts.resize(config.r_grid.size());
  for (std::size_t j = 0; j < config.r_grid.size(); ++j) {
    outcome.counts[j] =
        static_cast<std::uint32_t>(profiles.count(config.r_grid[j]));
  }
  return outcome;
}

std::vector<double> tail_weights(std::span<const double> grid,
                                 double threshold) {
  std::vector<double> weights(grid.size(), 0.0);
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    if (grid[j] < threshold) continue;
    const double h = grid[j + 1] - grid[j];
    weights[j] += 0.5 * h;
    weights[j + 1] += 0.5 * h;
  }
  return weights;
}

}  // namespace

void validate_config(const ExperimentConfig& config) {
  validate_spec(config.streets.horizontal);
  validate_spec(config.streets.vertical);
  if (config.streets.nested) {
    if (!config.streets.side_horizontal || !config.streets.side_vertical)
      throw ConfigError("nested street model requires both side specs");
    validate_spec(*config.streets.side_horizontal);
    validate_spec(*config.streets.side_vertical);
  }
  if (!(std::isfinite(config.lambda) && config.lambda > 0.0))
    throw ConfigError("lambda must be positive");
  if (config.n < 1) throw ConfigError("replication count must be >= 1");
  if (config.r_grid.empty()) throw ConfigError("r_grid must be nonempty");
  double prev = 0.0;
  for (double r : config.r_grid) {
    if (!(std::isfinite(r) && r > prev))
      throw ConfigError("r_grid must be strictly increasing and positive");
    prev = r;
  }
  if (config.window_half_width) {
    const double w = *config.window_half_width;
    if (!(std::isfinite(w) && w > 0.0))
      throw ConfigError("window_half_width must be positive");
    const Intensities inten = model_intensities(config.streets);
    const double cell_scale =
        1.0 / std::sqrt(config.lambda * inten.gamma_bar);
    if (w < config.r_grid.back() + cell_scale)
      throw ConfigError(
          "explicit window_half_width leaves no room for the r grid plus "
          "the expected cell radius");
  }
}

double auto_window(const ExperimentConfig& config) {
  const Intensities inten = model_intensities(config.streets);
  const double cell_scale = 10.0 / std::sqrt(config.lambda * inten.gamma_bar);
  const double mean_gap =
      std::max(mean_interarrival(config.streets.horizontal),
               mean_interarrival(config.streets.vertical));
  return std::max(config.r_grid.back(), cell_scale) + 2.0 * mean_gap;
}

DensityEstimate estimate_spl_density(const ExperimentConfig& config,
                                     const EstimatorOptions& options) {
  validate_config(config);
  const double base_window = config.window_half_width
                                 ? *config.window_half_width
                                 : auto_window(config);
  const std::size_t m = config.r_grid.size();
  const int n = config.n;

  std::vector<std::uint64_t> sum(m, 0), sumsq(m, 0);
  std::vector<std::uint32_t> counts;
  if (options.collect_counts)
    counts.assign(static_cast<std::size_t>(n) * m, 0);
  std::uint64_t rejections = 0;

  const int threads =
      std::clamp(options.threads, 1, std::max(1, n));
  std::atomic<int> next{0};
  std::mutex merge_mutex;
  std::exception_ptr failure;

  auto worker = [&]() {
    std::vector<std::uint64_t> local_sum(m, 0), local_sumsq(m, 0);
    std::uint64_t local_rejections = 0;
    const RandomStream root(config.master_seed);
    try {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) break;
        const auto outcome = run_replication(
            config, base_window,
            root.substream(static_cast<std::uint64_t>(i)));
        local_rejections += static_cast<std::uint64_t>(outcome.rejections);
        for (std::size_t j = 0; j < m; ++j) {
          const std::uint64_t c = outcome.counts[j];
          local_sum[j] += c;
          local_sumsq[j] += c * c;
        }
        if (options.collect_counts) {
          std::copy(outcome.counts.begin(), outcome.counts.end(),
                    counts.begin() + static_cast<std::size_t>(i) * m);
        }
      }
    } catch (...) {
      std::lock_guard lock(merge_mutex);
      if (!failure) failure = std::current_exception();
      return;
    }
    // Integer accumulators merge commutatively, so the totals are
    // independent of scheduling.
    std::lock_guard lock(merge_mutex);
    for (std::size_t j = 0; j < m; ++j) {
      sum[j] += local_sum[j];
      sumsq[j] += local_sumsq[j];
    }
    rejections += local_rejections;
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  DensityEstimate out;
  out.r_grid = config.r_grid;
  out.lambda = config.lambda;
  out.n_used = n;
  out.window_half_width = base_window;
  out.rejection_rate =
      static_cast<double>(rejections) /
      static_cast<double>(static_cast<std::uint64_t>(n) + rejections);
  out.f_hat.resize(m);
  out.stderrs.resize(m);
  const double dn = static_cast<double>(n);
  for (std::size_t j = 0; j < m; ++j) {
    const double s = static_cast<double>(sum[j]);
    out.f_hat[j] = config.lambda * s / dn;
    if (n > 1) {
      const double variance =
          (static_cast<double>(sumsq[j]) - s * s / dn) / (dn - 1.0);
      out.stderrs[j] =
          config.lambda * std::sqrt(std::max(variance, 0.0) / dn);
    } else {
      out.stderrs[j] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  out.replication_counts = std::move(counts);

  if (out.rejection_rate > kMaxRejectionRate) {
    std::ostringstream msg;
    msg << "certificate rejection rate " << out.rejection_rate
        << " exceeds " << kMaxRejectionRate
        << "; rerun with window_half_width > " << 2.0 * base_window;
    throw RejectionRateError(msg.str());
  }
  return out;
}

double lattice_oracle_density(double r, double lambda, double mesh) {
  if (!(lambda > 0.0) || !(mesh > 0.0))
    throw ConfigError("lattice_oracle_density requires positive parameters");
  if (!(r >= 0.0) || r >= 2.0 * mesh)
    throw std::out_of_range(
        "lattice_oracle_density is defined on 0 <= r < 2*mesh");
  const double ratio = r / mesh;
  if (ratio < 1.0) return 2.0 * lambda + 4.0 * lambda * ratio;
  return 12.0 * lambda * ratio - 6.0 * lambda;
}

ValueWithError linear_functional(const DensityEstimate& estimate,
                                 std::span<const double> weights) {
  const std::size_t m = estimate.r_grid.size();
  if (weights.size() != m)
    throw std::invalid_argument("linear_functional: weight size mismatch");
  const std::size_t n = static_cast<std::size_t>(estimate.n_used);
  if (estimate.replication_counts.size() != n * m)
    throw std::invalid_argument(
        "linear_functional: estimate lacks replication counts");
  std::vector<double> values(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const std::uint32_t* row = &estimate.replication_counts[i * m];
    for (std::size_t j = 0; j < m; ++j)
      acc += weights[j] * static_cast<double>(row[j]);
    values[i] = estimate.lambda * acc;
  }
  ValueWithError out;
  out.value = stats::mean(values);
  out.se = stats::standard_error(values);
  return out;
}

ValueWithError jump_estimate(const DensityEstimate& estimate, double mesh,
                             double delta) {
  const auto nearest = [&](double target) {
    std::size_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < estimate.r_grid.size(); ++j) {
      const double err = std::abs(estimate.r_grid[j] - target);
      if (err < best_err) {
        best_err = err;
        best = j;
      }
    }
    return best;
  };
  std::vector<double> weights(estimate.r_grid.size(), 0.0);
  weights[nearest(2.0 * mesh - delta)] += 1.0;
  weights[nearest(2.0 * mesh + delta)] -= 1.0;
  return linear_functional(estimate, weights);
}

ValueWithError tail_mass(const DensityEstimate& estimate, double threshold) {
  return linear_functional(estimate,
                           tail_weights(estimate.r_grid, threshold));
}

double density_median(const DensityEstimate& estimate) {
  double mass = 0.0;
  for (std::size_t j = 1; j < estimate.r_grid.size(); ++j) {
    mass += 0.5 * (estimate.f_hat[j] + estimate.f_hat[j - 1]) *
            (estimate.r_grid[j] - estimate.r_grid[j - 1]);
    if (mass >= 0.5) return estimate.r_grid[j];
  }
  throw std::runtime_error(
      "density_median: cumulative mass below 1/2 on the r grid; "
      "extend r_max");
}

CellRealization simulate_typical_cell(const ExperimentConfig& config,
                                      std::uint64_t replication_index) {
  validate_config(config);
  const double base_window = config.window_half_width
                                 ? *config.window_half_width
                                 : auto_window(config);
  const RandomStream root(config.master_seed);
  return realize_cell(config, base_window, root.substream(replication_index));
}

AsymmetryResult asymmetry_experiment(const ExperimentConfig& symmetric_base,
                                     double ratio,
                                     const EstimatorOptions& options) {
  if (!(ratio >= 1.0))
    throw ConfigError("asymmetry_experiment requires ratio >= 1");
  if (symmetric_base.streets.nested)
    throw ConfigError("asymmetry_experiment runs on plain Manhattan grids");
  if (!(symmetric_base.streets.horizontal == symmetric_base.streets.vertical))
    throw ConfigError("asymmetry_experiment needs a symmetric base config");

  EstimatorOptions with_counts = options;
  with_counts.collect_counts = true;

  // Matched total intensity: gamma_h' = gamma * rho/(1+rho),
  // gamma_v' = gamma/(1+rho).
  ExperimentConfig asym = symmetric_base;
  asym.streets.horizontal = scale_spec(symmetric_base.streets.horizontal,
                                       (1.0 + ratio) / (2.0 * ratio));
  asym.streets.vertical =
      scale_spec(symmetric_base.streets.vertical, (1.0 + ratio) / 2.0);
  asym.window_half_width = std::nullopt;

  const RandomStream seed_root(symmetric_base.master_seed);
  ExperimentConfig sym = symmetric_base;
  sym.master_seed = seed_root.substream(1).key();
  asym.master_seed = seed_root.substream(2).key();

  AsymmetryResult result;
  result.symmetric = estimate_spl_density(sym, with_counts);
  result.asymmetric = estimate_spl_density(asym, with_counts);
  result.tail_threshold = 3.0 * density_median(result.symmetric);
  result.tail_symmetric = tail_mass(result.symmetric, result.tail_threshold);
  result.tail_asymmetric = tail_mass(result.asymmetric, result.tail_threshold);

  // Mixture-weight sanity: frequency of the Palm origin on a horizontal
  // street under the asymmetric model.
  auto freq_rng = seed_root.substream(3);
  const int draws = 100000;
  int on_horizontal = 0;
  for (int i = 0; i < draws; ++i) {
    auto r = freq_rng.substream(static_cast<std::uint64_t>(i));
    const auto palm = sample_manhattan_palm(asym.streets.horizontal,
                                            asym.streets.vertical, 1.0, r);
    if (palm.chosen == PalmAxis::OnHorizontal) ++on_horizontal;
  }
  result.palm_horizontal_frequency =
      static_cast<double>(on_horizontal) / static_cast<double>(draws);
  return result;
}

}  // namespace gridcell
