#pragma once

#include <string>

#include "gridcell/estimator.hpp"

namespace gridcell {

/// Parses the experiment config JSON document:
/// {"streets": {"type": "manhattan"|"nested", "horizontal": spec,
///   "vertical": spec, "side_horizontal": spec?, "side_vertical": spec?},
///  "lambda": f, "window_half_width": f|"auto", "r_max": f,
///  "r_points": int}
/// where spec is {"kind": "deterministic"|"exponential"|
/// "truncated_gaussian", "mu": f, "sigma": f, "rate": f} with the fields
/// of its kind. r_max defaults to 4x the larger main inter-arrival mean,
/// r_points to 400; the grid is r_j = r_max * j / r_points.
/// Replication count and master seed are CLI flags, not config fields.
ExperimentConfig parse_config_text(const std::string& json_text);

/// Reads and parses a config file; errors carry file/field diagnostics.
ExperimentConfig load_config_file(const std::string& path);

/// Inverse of parse_config_text: parse(serialize(parse(text))) is
/// parse(text).
std::string serialize_config(const ExperimentConfig& config);

}  // namespace gridcell
