#include "gridcell/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gridcell/errors.hpp"

namespace gridcell {

namespace {

constexpr double kQuadratureTol = 1e-12;
constexpr std::size_t kTableKnots = 1u << 16;
// Below this truncated mass the rejection sampler from the untruncated
// Gaussian is replaced by tabulated inverse-CDF sampling.
constexpr double kRejectionMassFloor = 0.05;
constexpr double kMinPositiveMass = 1e-12;

double std_normal_cdf(double t) {
  return 0.5 * std::erfc(-t / std::numbers::sqrt2);
}

double std_normal_pdf(double t) {
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

/// Mass of N(mu, sigma^2) on [0, inf).
double positive_mass(double mu, double sigma) {
  return std_normal_cdf(mu / sigma);
}

/// Density of the truncated Gaussian on [0, inf).
double truncated_gaussian_pdf(double x, double mu, double sigma, double mass) {
  if (x < 0.0) return 0.0;
  return std_normal_pdf((x - mu) / sigma) / (sigma * mass);
}

template <typename F>
double integrate(F&& f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, lo, hi, 15, kQuadratureTol);
}

/// Tabulated inverse CDF of an unnormalized density on [0, upper]:
/// cumulative trapezoid over kTableKnots equidistant knots, inverted by
/// binary search with linear interpolation (monotone by construction).
class InverseCdfTable {
 public:
  template <typename Density>
  InverseCdfTable(Density&& density, double upper) : step_(0.0) {
    step_ = upper / static_cast<double>(kTableKnots - 1);
    cum_.resize(kTableKnots);
    double prev = density(0.0);
    cum_[0] = 0.0;
    for (std::size_t i = 1; i < kTableKnots; ++i) {
      const double cur = density(step_ * static_cast<double>(i));
      cum_[i] = cum_[i - 1] + 0.5 * step_ * (prev + cur);
      prev = cur;
    }
    if (!(cum_.back() > 0.0))
      throw ConfigError("inverse-CDF table: density has no mass on support");
  }

  double sample(RandomStream& rng) const {
    const double target = rng.uniform_open01() * cum_.back();
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
    const std::size_t j = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(it - cum_.begin(),
                                 static_cast<std::ptrdiff_t>(cum_.size()) - 1));
    const double lo = cum_[j - 1];
    const double hi = cum_[j];
    const double frac = hi > lo ? (target - lo) / (hi - lo) : 0.0;
    return step_ * (static_cast<double>(j - 1) + frac);
  }

 private:
  double step_;
  std::vector<double> cum_;
};

enum class TableFlavor { Plain, LengthBiased };

/// Tables are immutable and cost ~0.5 MB each to build; share per spec.
std::shared_ptr<const InverseCdfTable> truncated_gaussian_table(
    double mu, double sigma, TableFlavor flavor) {
  using Key = std::tuple<double, double, TableFlavor>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const InverseCdfTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{mu, sigma, flavor}];
  if (!slot) {
    const double mass = positive_mass(mu, sigma);
    const double upper = mu + 10.0 * sigma;
    if (flavor == TableFlavor::LengthBiased) {
      slot = std::make_shared<InverseCdfTable>(
          [&](double x) { return x * truncated_gaussian_pdf(x, mu, sigma, mass); },
          upper);
    } else {
      slot = std::make_shared<InverseCdfTable>(
          [&](double x) { return truncated_gaussian_pdf(x, mu, sigma, mass); },
          upper);
    }
  }
  return slot;
}

}  // namespace

InterArrivalSpec InterArrivalSpec::deterministic(double mu) {
  InterArrivalSpec spec;
  spec.kind = ArrivalKind::Deterministic;
  spec.mu = mu;
  validate_spec(spec);
  return spec;
}

InterArrivalSpec InterArrivalSpec::exponential(double rate) {
  InterArrivalSpec spec;
  spec.kind = ArrivalKind::Exponential;
  spec.rate = rate;
  validate_spec(spec);
  return spec;
}

InterArrivalSpec InterArrivalSpec::truncated_gaussian(double mu, double sigma) {
  InterArrivalSpec spec;
  spec.kind = ArrivalKind::TruncatedGaussian;
  spec.mu = mu;
  spec.sigma = sigma;
  validate_spec(spec);
  return spec;
}

void validate_spec(const InterArrivalSpec& spec) {
  switch (spec.kind) {
    case ArrivalKind::Deterministic:
      if (!(std::isfinite(spec.mu) && spec.mu > 0.0))
        throw ConfigError("deterministic inter-arrival requires mu > 0");
      return;
    case ArrivalKind::Exponential:
      if (!(std::isfinite(spec.rate) && spec.rate > 0.0))
        throw ConfigError("exponential inter-arrival requires rate > 0");
      return;
    case ArrivalKind::TruncatedGaussian:
      if (!(std::isfinite(spec.mu) && std::isfinite(spec.sigma) &&
            spec.sigma > 0.0))
        throw ConfigError("truncated Gaussian requires sigma > 0");
      if (positive_mass(spec.mu, spec.sigma) < kMinPositiveMass)
        throw ConfigError(
            "truncated Gaussian has no numerically resolvable mass on (0, inf)");
      return;
  }
  throw ConfigError("unknown inter-arrival kind");
}

double mean_interarrival(const InterArrivalSpec& spec) {
  validate_spec(spec);
  switch (spec.kind) {
    case ArrivalKind::Deterministic:
      return spec.mu;
    case ArrivalKind::Exponential:
      return 1.0 / spec.rate;
    case ArrivalKind::TruncatedGaussian: {
      const double mass = positive_mass(spec.mu, spec.sigma);
      const double upper = std::max(spec.mu, 0.0) + 13.5 * spec.sigma;
      return integrate(
          [&](double x) {
            return x * truncated_gaussian_pdf(x, spec.mu, spec.sigma, mass);
          },
          0.0, upper);
    }
  }
  throw ConfigError("unknown inter-arrival kind");
}

double sample_interarrival(const InterArrivalSpec& spec, RandomStream& rng) {
  switch (spec.kind) {
    case ArrivalKind::Deterministic:
      return spec.mu;
    case ArrivalKind::Exponential:
      return rng.exponential(spec.rate);
    case ArrivalKind::TruncatedGaussian: {
      if (positive_mass(spec.mu, spec.sigma) >= kRejectionMassFloor) {
        double x;
        do {
          x = spec.mu + spec.sigma * rng.normal();
        } while (x < 0.0);
        return x;
      }
      return truncated_gaussian_table(spec.mu, spec.sigma, TableFlavor::Plain)
          ->sample(rng);
    }
  }
  throw ConfigError("unknown inter-arrival kind");
}

double sample_length_biased(const InterArrivalSpec& spec, RandomStream& rng) {
  switch (spec.kind) {
    case ArrivalKind::Deterministic:
      // Length-biasing a point mass is the identity.
      return spec.mu;
    case ArrivalKind::Exponential:
      // x g(x) / E[I] is the Erlang(2, rate) density.
      return rng.exponential(spec.rate) + rng.exponential(spec.rate);
    case ArrivalKind::TruncatedGaussian:
      return truncated_gaussian_table(spec.mu, spec.sigma,
                                      TableFlavor::LengthBiased)
          ->sample(rng);
  }
  throw ConfigError("unknown inter-arrival kind");
}

InterArrivalSpec scale_spec(const InterArrivalSpec& spec, double factor) {
  if (!(std::isfinite(factor) && factor > 0.0))
    throw ConfigError("scale_spec requires a positive factor");
  InterArrivalSpec scaled = spec;
  switch (spec.kind) {
    case ArrivalKind::Deterministic:
      scaled.mu *= factor;
      break;
    case ArrivalKind::Exponential:
      scaled.rate /= factor;
      break;
    case ArrivalKind::TruncatedGaussian:
      scaled.mu *= factor;
      scaled.sigma *= factor;
      break;
  }
  validate_spec(scaled);
  return scaled;
}

}  // namespace gridcell
