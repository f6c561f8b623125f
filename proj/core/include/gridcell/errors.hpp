#pragma once

#include <stdexcept>
#include <string>

namespace gridcell {

/// Invalid distribution/model/configuration parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A sampler exceeded its hard point cap; signals a mis-specified model
/// instead of hanging.
class RunawayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too many replications failed the window-adequacy certificate.
class RejectionRateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gridcell
