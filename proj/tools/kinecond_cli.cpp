// kinecond: kinetostatic conditioning of planar n-revolute manipulators.
//
// Exit codes: 0 success, 2 input or configuration error, 3 numerical
// degeneracy (conditioning length or model rotation undefined).

#include "kinecond/conditioning.hpp"
#include "kinecond/errors.hpp"
#include "kinecond/io.hpp"
#include "kinecond/isocontour.hpp"
#include "kinecond/optimize.hpp"
#include "kinecond/planar_geom.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

using kinecond::io::json;

struct Options {
  bool radians = false;
  std::string manipulator;
  std::string posture;
  std::string set;
  std::string out;
  std::string manifest;
  std::vector<std::size_t> permutation;  // 1-based on the command line
  std::optional<std::size_t> resolution;
  std::vector<double> levels;
  std::optional<double> z_max;
  double theta1 = 0.0;
  bool no_wrap = false;
  std::size_t threads = 0;
  std::size_t n = 3;
  std::optional<double> phase;
};

double to_radians(const Options& o, double v) { return o.radians ? v : kinecond::deg2rad(v); }

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw kinecond::InvalidArgument("cannot write " + path);
  out << text;
}

kinecond::PointSet2 load_model_set(const Options& o, std::size_t n) {
  kinecond::PointSet2 s = o.set.empty() ? kinecond::default_model_set(n)
                                        : kinecond::io::point_set_from_json(kinecond::io::read_json_file(o.set));
  if (s.size() != n) {
    throw kinecond::InvalidArgument("model set has " + std::to_string(s.size()) + " points for " +
                                    std::to_string(n) + " joints");
  }
  if (!o.permutation.empty()) {
    std::vector<std::size_t> perm;
    for (std::size_t p : o.permutation) {
      if (p == 0) throw kinecond::InvalidArgument("--permutation is 1-based");
      perm.push_back(p - 1);
    }
    s = kinecond::relabel(s, perm);
  }
  return s;
}

void warn_if_rescaled(const kinecond::PointSet2& s) {
  if (kinecond::normalize_model_set(s).rescaled) {
    std::cerr << "warning: model set rescaled to sum k k^T = n 1 about its centroid\n";
  }
}

int run_analyze(const Options& o) {
  const auto m = kinecond::io::manipulator_from_json(kinecond::io::read_json_file(o.manipulator));
  const auto p = kinecond::io::posture_from_json(kinecond::io::read_json_file(o.posture));
  const auto s = load_model_set(o, m.joint_count());
  const auto r = kinecond::z_value(m, p, s);
  if (r.model_rescaled) std::cerr << "warning: model set rescaled to sum k k^T = n 1 about its centroid\n";
  write_output(o.out, kinecond::io::dump(kinecond::io::to_json(r)));
  return kExitOk;
}

int run_optimize(const Options& o) {
  const auto m = kinecond::io::manipulator_from_json(kinecond::io::read_json_file(o.manipulator));
  const auto s = load_model_set(o, m.joint_count());
  warn_if_rescaled(s);
  kinecond::OptimizationConfig cfg;
  if (o.resolution) {
    if (*o.resolution == 0) throw kinecond::ConfigError("--resolution must be positive");
    cfg.grid_resolution = kinecond::kTwoPi / static_cast<double>(*o.resolution);
  }
  cfg.theta1 = to_radians(o, o.theta1);
  cfg.threads = o.threads;
  const auto opt = kinecond::optimum_posture(m, s, cfg);
  write_output(o.out, kinecond::io::dump(kinecond::io::to_json(opt)));
  return kExitOk;
}

kinecond::ZGrid grid_for(const Options& o, const kinecond::Manipulator& m, const kinecond::PointSet2& s) {
  kinecond::GridOptions g;
  g.theta1 = to_radians(o, o.theta1);
  g.threads = o.threads;
  return kinecond::evaluate_grid(m, s, o.resolution.value_or(360), g);
}

int run_isocontour(const Options& o) {
  const auto m = kinecond::io::manipulator_from_json(kinecond::io::read_json_file(o.manipulator));
  const auto s = load_model_set(o, m.joint_count());
  warn_if_rescaled(s);
  if (o.levels.empty()) throw kinecond::ConfigError("--levels needs at least one value");
  if (o.resolution && *o.resolution < 8) throw kinecond::ConfigError("--resolution must be at least 8");
  const auto grid = grid_for(o, m, s);
  const auto contours = kinecond::extract_isocontours(grid, o.levels, {.wrap = !o.no_wrap});

  std::ostringstream csv;
  kinecond::write_grid_csv(csv, grid);
  const std::string contour_text = kinecond::io::dump(kinecond::io::to_json(contours));
  if (o.out.empty()) {
    std::cout << csv.str();
    std::cerr << contour_text;
  } else {
    write_output(o.out + ".csv", csv.str());
    write_output(o.out + ".contours.json", contour_text);
  }
  return kExitOk;
}

int run_trivial_set(const Options& o) {
  const double phase = o.phase ? to_radians(o, *o.phase) : kinecond::default_trivial_phase(o.n);
  const auto s = kinecond::trivial_set(o.n, phase);
  write_output(o.out, kinecond::io::dump(kinecond::io::to_json(s)));
  return kExitOk;
}

int run_workspace_area(const Options& o) {
  const auto m = kinecond::io::manipulator_from_json(kinecond::io::read_json_file(o.manipulator));
  const auto s = load_model_set(o, m.joint_count());
  warn_if_rescaled(s);
  if (!o.z_max) throw kinecond::ConfigError("--z-max is required");
  if (o.resolution && *o.resolution < 8) throw kinecond::ConfigError("--resolution must be at least 8");
  const auto grid = grid_for(o, m, s);
  const auto w = kinecond::workspace_area(grid, *o.z_max);
  write_output(o.out, kinecond::io::dump(kinecond::io::to_json(w)));
  return kExitOk;
}

void write_manifest(const Options& o, const std::string& command) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

  json inputs = json::object();
  if (!o.manipulator.empty()) inputs["manipulator"] = o.manipulator;
  if (!o.posture.empty()) inputs["posture"] = o.posture;
  if (!o.set.empty()) inputs["set"] = o.set;
  json overrides = json::object();
  overrides["angle_unit"] = o.radians ? "rad" : "deg";
  if (o.resolution) overrides["resolution"] = *o.resolution;
  if (!o.levels.empty()) overrides["levels"] = o.levels;
  if (o.z_max) overrides["z_max"] = *o.z_max;
  overrides["theta1"] = o.theta1;
  overrides["wrap"] = !o.no_wrap;
  if (!o.permutation.empty()) overrides["permutation"] = o.permutation;

  const json manifest = {{"command", command},   {"inputs", inputs},     {"output", o.out},
                         {"overrides", overrides}, {"tool_version", kVersion}, {"timestamp", stamp}};
  write_output(o.manifest, kinecond::io::dump(manifest));
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Kinetostatic conditioning of planar n-revolute manipulators"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* unit = app.add_option_group("angle unit", "unit of angles given on the command line");
  unit->add_flag("--degrees", [&o](std::int64_t) { o.radians = false; }, "angles in degrees (default)");
  unit->add_flag("--radians", [&o](std::int64_t) { o.radians = true; }, "angles in radians");
  unit->require_option(0, 1);
  app.fallthrough();

  auto add_model_options = [&o](CLI::App* cmd) {
    cmd->add_option("--manipulator", o.manipulator, "manipulator JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--set", o.set, "model point set JSON (default: regular polygon of radius sqrt 2)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--permutation", o.permutation, "model point for each joint, 1-based, e.g. 2,1,3")
        ->delimiter(',');
    cmd->add_option("--out", o.out, "output path (stdout if omitted)");
    cmd->add_option("--manifest", o.manifest, "write a run manifest JSON");
    cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  };

  auto* analyze = app.add_subcommand("analyze", "conditioning of one posture");
  add_model_options(analyze);
  analyze->add_option("--posture", o.posture, "posture JSON")->required()->check(CLI::ExistingFile);

  auto* optimize = app.add_subcommand("optimize", "globally optimum posture and characteristic length");
  add_model_options(optimize);
  optimize->add_option("--resolution", o.resolution, "grid samples per conditioning joint");
  optimize->add_option("--theta1", o.theta1, "fixed first joint angle");

  auto* iso = app.add_subcommand("isocontour", "z grid over (theta2, theta3) and its isocontours");
  add_model_options(iso);
  iso->add_option("--resolution", o.resolution, "grid samples per axis (default 360)");
  iso->add_option("--levels", o.levels, "contour levels, e.g. 0.1,0.25")->delimiter(',')->required();
  iso->add_flag("--no-wrap", o.no_wrap, "flat [0, 2pi) window instead of a torus");
  iso->add_option("--theta1", o.theta1, "fixed first joint angle");

  auto* trivial = app.add_subcommand("trivial-set", "regular-polygon isotropic model set");
  trivial->add_option("--n", o.n, "number of points (>= 3)");
  trivial->add_option("--phase", o.phase, "angle of the first point");
  trivial->add_option("--out", o.out, "output path (stdout if omitted)");
  trivial->add_option("--manifest", o.manifest, "write a run manifest JSON");

  auto* area = app.add_subcommand("workspace-area", "fraction of the joint torus with z <= z_M");
  add_model_options(area);
  area->add_option("--resolution", o.resolution, "grid samples per axis (default 360)");
  area->add_option("--z-max", o.z_max, "threshold z_M")->required();
  area->add_option("--theta1", o.theta1, "fixed first joint angle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  std::string command;
  try {
    int rc = kExitOk;
    if (analyze->parsed()) {
      command = "analyze";
      rc = run_analyze(o);
    } else if (optimize->parsed()) {
      command = "optimize";
      rc = run_optimize(o);
    } else if (iso->parsed()) {
      command = "isocontour";
      rc = run_isocontour(o);
    } else if (trivial->parsed()) {
      command = "trivial-set";
      rc = run_trivial_set(o);
    } else if (area->parsed()) {
      command = "workspace-area";
      rc = run_workspace_area(o);
    }
    if (!o.manifest.empty()) write_manifest(o, command);
    return rc;
  } catch (const kinecond::NumericalDegeneracy& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
