#include "gridcell/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gridcell/errors.hpp"

namespace gridcell {

namespace {

using nlohmann::json;

InterArrivalSpec spec_from_json(const json& j, const std::string& field) {
  if (!j.is_object())
    throw ConfigError("config field '" + field + "' must be an object");
  const std::string kind = j.value("kind", std::string{});
  try {
    if (kind == "deterministic")
      return InterArrivalSpec::deterministic(j.at("mu").get<double>());
    if (kind == "exponential")
      return InterArrivalSpec::exponential(j.at("rate").get<double>());
    if (kind == "truncated_gaussian")
      return InterArrivalSpec::truncated_gaussian(j.at("mu").get<double>(),
                                                  j.at("sigma").get<double>());
  } catch (const json::exception& e) {
    throw ConfigError("config field '" + field + "': " + e.what());
  }
  throw ConfigError("config field '" + field +
                    "': unknown inter-arrival kind '" + kind + "'");
}

json spec_to_json(const InterArrivalSpec& spec) {
  switch (spec.kind) {
    case ArrivalKind::Deterministic:
      return json{{"kind", "deterministic"}, {"mu", spec.mu}};
    case ArrivalKind::Exponential:
      return json{{"kind", "exponential"}, {"rate", spec.rate}};
    case ArrivalKind::TruncatedGaussian:
      return json{{"kind", "truncated_gaussian"},
                  {"mu", spec.mu},
                  {"sigma", spec.sigma}};
  }
  throw ConfigError("unknown inter-arrival kind");
}

std::vector<double> make_r_grid(double r_max, int r_points) {
  if (!(r_max > 0.0)) throw ConfigError("config field 'r_max' must be > 0");
  if (r_points < 1) throw ConfigError("config field 'r_points' must be >= 1");
  std::vector<double> grid(static_cast<std::size_t>(r_points));
  for (int j = 1; j <= r_points; ++j) {
    grid[static_cast<std::size_t>(j - 1)] =
        j == r_points ? r_max
                      : r_max * static_cast<double>(j) /
                            static_cast<double>(r_points);
  }
  return grid;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  ExperimentConfig config;
  try {
    const json& streets = doc.at("streets");
    const std::string type = streets.value("type", std::string{"manhattan"});
    if (type != "manhattan" && type != "nested")
      throw ConfigError("config field 'streets.type' must be 'manhattan' or "
                        "'nested'");
    config.streets.nested = type == "nested";
    config.streets.horizontal =
        spec_from_json(streets.at("horizontal"), "streets.horizontal");
    config.streets.vertical =
        spec_from_json(streets.at("vertical"), "streets.vertical");
    if (config.streets.nested) {
      config.streets.side_horizontal = spec_from_json(
          streets.at("side_horizontal"), "streets.side_horizontal");
      config.streets.side_vertical = spec_from_json(
          streets.at("side_vertical"), "streets.side_vertical");
    }
    config.lambda = doc.at("lambda").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (doc.contains("window_half_width")) {
    const json& w = doc["window_half_width"];
    if (w.is_string()) {
      if (w.get<std::string>() != "auto")
        throw ConfigError(
            "config field 'window_half_width' must be a number or \"auto\"");
    } else if (w.is_number()) {
      config.window_half_width = w.get<double>();
    } else {
      throw ConfigError(
          "config field 'window_half_width' must be a number or \"auto\"");
    }
  }

  const double default_r_max =
      4.0 * std::max(mean_interarrival(config.streets.horizontal),
                     mean_interarrival(config.streets.vertical));
  const double r_max = doc.value("r_max", default_r_max);
  const int r_points = doc.value("r_points", 400);
  config.r_grid = make_r_grid(r_max, r_points);

  validate_config(config);
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config_text(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize_config(const ExperimentConfig& config) {
  json streets{{"type", config.streets.nested ? "nested" : "manhattan"},
               {"horizontal", spec_to_json(config.streets.horizontal)},
               {"vertical", spec_to_json(config.streets.vertical)}};
  if (config.streets.nested) {
    streets["side_horizontal"] = spec_to_json(*config.streets.side_horizontal);
    streets["side_vertical"] = spec_to_json(*config.streets.side_vertical);
  }
  json doc{{"streets", std::move(streets)},
           {"lambda", config.lambda},
           {"r_max", config.r_grid.back()},
           {"r_points", static_cast<int>(config.r_grid.size())}};
  if (config.window_half_width)
    doc["window_half_width"] = *config.window_half_width;
  else
    doc["window_half_width"] = "auto";
  return doc.dump(2);
}

}  // namespace gridcell
