#pragma once

// JSON and file formats shared by the library and the CLI.
//
//   point set        {"points": [[x, y], ...]}
//   manipulator      {"link_lengths": [a1, ..., an]}
//   posture          {"theta_deg": [...]} or {"theta_rad": [...]}, exactly one
//   conditioning     {"z", "l_P", "alpha_opt_rad", "kappa", "d_rms"}
//                    (kappa is null when the normalized Jacobian is singular)
//   optimum posture  {"theta_rad", "theta_deg", "z_min", "l_P", "alpha_opt_rad",
//                     "is_global", "all_local_minima": [{"theta_rad", "z"}]}
//   contours         [{"level", "closed", "points": [[theta2, theta3], ...]}]
//   workspace        {"z_M", "area_fraction", "cell_count"}
//
// All parse errors throw InvalidArgument.

#include "kinecond/conditioning.hpp"
#include "kinecond/isocontour.hpp"
#include "kinecond/kinematics.hpp"
#include "kinecond/optimize.hpp"
#include "kinecond/planar_geom.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace kinecond::io {

using json = nlohmann::json;

json to_json(const PointSet2& s);
PointSet2 point_set_from_json(const json& j);

json to_json(const Manipulator& m);
Manipulator manipulator_from_json(const json& j);

/// Always written as theta_rad.
json to_json(const Posture& p);
Posture posture_from_json(const json& j);

json to_json(const ConditioningResult& r);
ConditioningResult conditioning_result_from_json(const json& j);

json to_json(const OptimumPosture& o);
OptimumPosture optimum_posture_from_json(const json& j);

json to_json(const Contour& c);
json to_json(const std::vector<Contour>& contours);
std::vector<Contour> contours_from_json(const json& j);

json to_json(const WorkspaceMeasure& w);
WorkspaceMeasure workspace_measure_from_json(const json& j);

/// Throws InvalidArgument naming the path if it cannot be read or parsed.
json read_json_file(const std::filesystem::path& path);

/// Pretty-printed with two-space indent and a trailing newline.
std::string dump(const json& j);

}  // namespace kinecond::io
