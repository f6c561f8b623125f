#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gridcell/cell.hpp"
#include "gridcell/cox.hpp"
#include "gridcell/distributions.hpp"
#include "gridcell/graph.hpp"
#include "gridcell/streets.hpp"

namespace gridcell {

/// Street model of an experiment: plain or nested Manhattan grid.
struct StreetModelConfig {
  bool nested = false;
  InterArrivalSpec horizontal;
  InterArrivalSpec vertical;
  std::optional<InterArrivalSpec> side_horizontal;
  std::optional<InterArrivalSpec> side_vertical;
};

struct ExperimentConfig {
  StreetModelConfig streets;
  double lambda = 0.0;
  int n = 1;                   // replication count
  std::vector<double> r_grid;  // strictly increasing, positive
  std::optional<double> window_half_width;  // nullopt: auto rule
  std::uint64_t master_seed = 0;
};

/// Shortest-path-length density estimate over the r grid.
struct DensityEstimate {
  std::vector<double> r_grid;
  std::vector<double> f_hat;
  std::vector<double> stderrs;  // NaN when n < 2
  int n_used = 0;
  double rejection_rate = 0.0;
  double window_half_width = 0.0;  // base window of accepted replications
  double lambda = 0.0;
  /// Per-replication level counts N_{i,r}, row-major n x r_grid.size();
  /// empty unless requested via EstimatorOptions.
  std::vector<std::uint32_t> replication_counts;
};

struct EstimatorOptions {
  int threads = 1;
  bool collect_counts = false;
};

/// Throws ConfigError on invalid parameters, including an explicit window
/// too small for the requested r grid.
void validate_config(const ExperimentConfig& config);

/// Window rule used when no explicit half-width is given: keeps both the
/// SPL horizon and the typical cell well inside the certificate region.
double auto_window(const ExperimentConfig& config);

/// Monte Carlo estimator of the typical shortest-path-length density:
/// per replication, a Palm street system, a Cox pattern, the typical cell
/// at the origin and its level counts; f_hat(r) = lambda/n * sum_i N_{i,r}.
/// Replications failing the window certificate are resampled from a
/// reserved substream with doubled window; the rejection rate is reported
/// and rates above 5% raise RejectionRateError. Output is identical for
/// any thread count.
DensityEstimate estimate_spl_density(const ExperimentConfig& config,
                                     const EstimatorOptions& options = {});

/// One accepted replication with all intermediate artifacts, as used by
/// the estimator and dumped by the CLI.
struct CellRealization {
  std::optional<ManhattanGrid> plain_grid;
  std::optional<NestedManhattanGrid> nested_grid;
  std::vector<Segment> street_segments;
  PointPattern pattern;
  ConvexCell cell;
  StreetGraph graph;
  std::vector<double> distances;
  double window_half_width = 0.0;
  int rejections = 0;
};

/// Runs the replication pipeline for one index of the config's master
/// seed; identical to what the estimator aggregates.
CellRealization simulate_typical_cell(const ExperimentConfig& config,
                                      std::uint64_t replication_index = 0);

/// Closed-form density of the rigid lattice with mesh L in the regime
/// gamma/lambda >> 1: two linear phases on [0, L) and [L, 2L). Out of
/// range r throws std::out_of_range.
double lattice_oracle_density(double r, double lambda, double mesh);

struct ValueWithError {
  double value = 0.0;
  double se = 0.0;
};

/// Mean and standard error across replications of the linear functional
/// sum_j weights[j] * lambda * N_{i,j}; requires collected counts.
ValueWithError linear_functional(const DensityEstimate& estimate,
                                 std::span<const double> weights);

/// f_hat(2L - delta) - f_hat(2L + delta) at the nearest grid points,
/// with its across-replication standard error.
ValueWithError jump_estimate(const DensityEstimate& estimate, double mesh,
                             double delta);

/// Trapezoid tail mass of f_hat on grid intervals at or beyond the
/// threshold, with its standard error.
ValueWithError tail_mass(const DensityEstimate& estimate, double threshold);

/// Smallest grid point where the cumulative trapezoid mass reaches 1/2.
double density_median(const DensityEstimate& estimate);

struct AsymmetryResult {
  DensityEstimate asymmetric;
  DensityEstimate symmetric;
  double tail_threshold = 0.0;  // 3 x symmetric median
  ValueWithError tail_asymmetric;
  ValueWithError tail_symmetric;
  /// Observed frequency of the Palm origin lying on a horizontal street
  /// under the asymmetric model.
  double palm_horizontal_frequency = 0.0;
};

/// Runs the estimator for a horizontal/vertical intensity ratio `ratio`
/// and for the matched symmetric baseline (same total gamma and lambda),
/// and reports tail masses beyond 3x the symmetric median.
AsymmetryResult asymmetry_experiment(const ExperimentConfig& symmetric_base,
                                     double ratio,
                                     const EstimatorOptions& options = {});

}  // namespace gridcell
