#pragma once

#include <span>
#include <vector>

namespace gridcell::stats {

double mean(std::span<const double> xs);

/// Unbiased sample variance (n-1 denominator); 0 for fewer than two values.
double sample_variance(std::span<const double> xs);

/// Standard error of the mean.
double standard_error(std::span<const double> xs);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Asymptotic two-sample KS critical value at significance alpha
/// (supported: 0.05, 0.01, 0.001).
double ks_critical_value(std::size_t n_a, std::size_t n_b, double alpha);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares of y against x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Composite trapezoid integral of samples y over (possibly uneven) grid x.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace gridcell::stats
