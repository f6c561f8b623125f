#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gridcell/config.hpp"
#include "gridcell/errors.hpp"
#include "gridcell/estimator.hpp"
#include "gridcell/renewal.hpp"
#include "gridcell/validate.hpp"
#include "gridcell/version.hpp"

namespace gridcell::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Deterministic decimal formatting: 17 significant digits round-trip a
/// double exactly.
std::string format_double(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

void write_manifest(const fs::path& path, const ExperimentConfig& config,
                    const std::string& command, std::uint64_t seed, int n,
                    int threads, double rejection_rate, double duration) {
  json manifest{{"tool", "gridcell"},
                {"version", kVersion},
                {"command", command},
                {"config", json::parse(serialize_config(config))},
                {"master_seed", seed},
                {"n", n},
                {"threads", threads},
                {"rejection_rate", rejection_rate},
                {"duration_seconds", duration}};
  write_file(path, manifest.dump(2) + "\n");
}

std::string density_csv(const DensityEstimate& est) {
  std::string out = "r,f_hat,stderr,n\n";
  for (std::size_t j = 0; j < est.r_grid.size(); ++j) {
    out += format_double(est.r_grid[j]);
    out += ',';
    out += format_double(est.f_hat[j]);
    out += ',';
    // A single replication has no spread estimate; the field is left
    // empty as the documented sentinel.
    if (std::isfinite(est.stderrs[j])) out += format_double(est.stderrs[j]);
    out += ',';
    out += std::to_string(est.n_used);
    out += '\n';
  }
  return out;
}

json streets_json(const CellRealization& real) {
  json doc;
  const auto coords = [](const std::vector<double>& xs) {
    return json(xs);
  };
  if (real.plain_grid) {
    doc["vertical_xs"] = coords(real.plain_grid->vertical_xs.points);
    doc["horizontal_ys"] = coords(real.plain_grid->horizontal_ys.points);
    doc["blocks"] = json::array();
  } else {
    doc["vertical_xs"] = coords(real.nested_grid->main.vertical_xs.points);
    doc["horizontal_ys"] = coords(real.nested_grid->main.horizontal_ys.points);
    json blocks = json::array();
    for (const SideBlock& b : real.nested_grid->side_blocks) {
      blocks.push_back(json{{"rect",
                             {b.rect.x0, b.rect.y0, b.rect.x1, b.rect.y1}},
                            {"vertical_xs", coords(b.vertical_xs)},
                            {"horizontal_ys", coords(b.horizontal_ys)}});
    }
    doc["blocks"] = std::move(blocks);
  }
  return doc;
}

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  int threads = 1;
};

int cmd_renewal(const CommonFlags& flags, const std::string& direction,
                const std::string& flavor, double window, int count,
                const std::string& out_path) {
  const ExperimentConfig config = load_config_file(flags.config_path);
  const InterArrivalSpec spec = direction == "vertical"
                                    ? config.streets.vertical
                                    : config.streets.horizontal;
  std::string out;
  const RandomStream root(flags.seed);
  for (int i = 0; i < count; ++i) {
    auto rng = root.substream(static_cast<std::uint64_t>(i));
    const RenewalRealization real =
        flavor == "palm" ? sample_palm_renewal(spec, window, rng)
                         : sample_stationary_renewal(spec, window, rng);
    if (i > 0) out += '\n';
    for (double p : real.points) {
      out += format_double(p);
      out += '\n';
    }
  }
  if (out_path.empty()) {
    std::cout << out;
  } else {
    write_file(out_path, out);
  }
  return 0;
}

int cmd_simulate_cell(const CommonFlags& flags, const std::string& out_dir) {
  Stopwatch watch;
  ExperimentConfig config = load_config_file(flags.config_path);
  config.master_seed = flags.seed;
  config.n = 1;
  const CellRealization real = simulate_typical_cell(config, 0);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  write_file(dir / "streets.json", streets_json(real).dump(2) + "\n");

  std::string points = "x,y\n";
  for (const Point& p : real.pattern.points)
    points += format_double(p.x) + "," + format_double(p.y) + "\n";
  write_file(dir / "points.csv", points);

  std::string ring = "x,y\n";
  for (const Point& v : real.cell.vertices)
    ring += format_double(v.x) + "," + format_double(v.y) + "\n";
  if (!real.cell.vertices.empty()) {
    const Point& first = real.cell.vertices.front();
    ring += format_double(first.x) + "," + format_double(first.y) + "\n";
  }
  write_file(dir / "cell.csv", ring);

  std::string nodes = "id,x,y,dist\n";
  for (std::size_t i = 0; i < real.graph.nodes.size(); ++i) {
    nodes += std::to_string(i) + "," +
             format_double(real.graph.nodes[i].x) + "," +
             format_double(real.graph.nodes[i].y) + "," +
             format_double(real.distances[i]) + "\n";
  }
  write_file(dir / "nodes.csv", nodes);

  std::string edges = "u,v,length\n";
  for (const auto& e : real.graph.edges)
    edges += std::to_string(e.u) + "," + std::to_string(e.v) + "," +
             format_double(e.length) + "\n";
  write_file(dir / "edges.csv", edges);

  const double rate =
      static_cast<double>(real.rejections) /
      static_cast<double>(1 + real.rejections);
  write_manifest(dir / "manifest.json", config, "simulate-cell", flags.seed,
                 1, 1, rate, watch.seconds());
  return 0;
}

int cmd_estimate_spl(const CommonFlags& flags, int n,
                     const std::string& out_path) {
  Stopwatch watch;
  ExperimentConfig config = load_config_file(flags.config_path);
  config.master_seed = flags.seed;
  config.n = n;
  EstimatorOptions options;
  options.threads = flags.threads;
  const DensityEstimate est = estimate_spl_density(config, options);
  write_file(out_path, density_csv(est));
  write_manifest(out_path + ".manifest.json", config, "estimate-spl",
                 flags.seed, n, flags.threads, est.rejection_rate,
                 watch.seconds());
  return 0;
}

int cmd_validate(const std::string& suite, std::uint64_t seed, int threads) {
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = validation_suite_names();
  } else {
    suites.push_back(suite);
  }
  bool all_passed = true;
  for (const std::string& name : suites) {
    const ValidationReport report = run_validation_suite(name, seed, threads);
    for (const ValidationCheck& check : report.checks) {
      std::cout << (check.passed ? "PASS" : "FAIL") << '\t' << check.name
                << '\t' << check.detail << '\n';
      all_passed = all_passed && check.passed;
    }
  }
  std::cout << (all_passed ? "OK" : "FAILED") << '\n';
  return all_passed ? 0 : 2;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Typical Voronoi cells of Cox processes on Manhattan-type "
               "street systems"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* renewal = app.add_subcommand(
      "renewal", "Dump renewal realizations, one coordinate per line");
  std::string direction = "horizontal";
  std::string flavor = "stationary";
  double window = 10.0;
  int count = 1;
  std::string renewal_out;
  renewal->add_option("--config", flags.config_path, "Experiment config JSON")
      ->required();
  renewal->add_option("--seed", flags.seed, "Master seed")->required();
  renewal->add_option("--direction", direction, "horizontal|vertical")
      ->check(CLI::IsMember({"horizontal", "vertical"}));
  renewal->add_option("--flavor", flavor, "stationary|palm")
      ->check(CLI::IsMember({"stationary", "palm"}));
  renewal->add_option("--w", window, "Window half-width");
  renewal->add_option("--n", count, "Number of realizations")
      ->check(CLI::PositiveNumber);
  renewal->add_option("--out", renewal_out, "Output path (default stdout)");

  auto* simulate = app.add_subcommand(
      "simulate-cell", "One Palm realization: streets, points, cell, graph");
  std::string out_dir;
  simulate->add_option("--config", flags.config_path, "Experiment config JSON")
      ->required();
  simulate->add_option("--seed", flags.seed, "Master seed")->required();
  simulate->add_option("--out", out_dir, "Output directory")->required();

  auto* estimate = app.add_subcommand(
      "estimate-spl", "Estimate the shortest-path-length density");
  int n = 1;
  std::string out_path;
  estimate->add_option("--config", flags.config_path, "Experiment config JSON")
      ->required();
  estimate->add_option("--seed", flags.seed, "Master seed")->required();
  estimate->add_option("--n", n, "Replication count")
      ->required()
      ->check(CLI::PositiveNumber);
  estimate->add_option("--out", out_path, "Output CSV path")->required();
  estimate->add_option("--threads", flags.threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand(
      "validate", "Run module invariant suites and report pass/fail");
  std::string suite = "all";
  validate->add_option("suite", suite, "renewal|palm|cox|cell|graph|"
                                       "estimator|all");
  validate->add_option("--seed", flags.seed, "Master seed");
  validate->add_option("--threads", flags.threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (renewal->parsed())
      return cmd_renewal(flags, direction, flavor, window, count, renewal_out);
    if (simulate->parsed()) return cmd_simulate_cell(flags, out_dir);
    if (estimate->parsed()) return cmd_estimate_spl(flags, n, out_path);
    if (validate->parsed())
      return cmd_validate(suite, flags.seed, flags.threads);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}

}  // namespace gridcell::cli
