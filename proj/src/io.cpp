#include "kinecond/io.hpp"

#include "kinecond/errors.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace kinecond::io {
namespace {

template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

const json& require(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidArgument(std::string(what) + " JSON is missing \"" + key + "\"");
  }
  return j.at(key);
}

std::vector<double> number_array(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidArgument(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw InvalidArgument(std::string(what) + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json angles_json(std::span<const double> angles, bool degrees) {
  json a = json::array();
  for (double t : angles) a.push_back(degrees ? rad2deg(t) : t);
  return a;
}

}  // namespace

json to_json(const PointSet2& s) {
  json pts = json::array();
  for (const auto& p : s) pts.push_back({p.x(), p.y()});
  return {{"points", pts}};
}

PointSet2 point_set_from_json(const json& j) {
  return guarded("point set", [&] {
    const json& pts = require(j, "points", "point set");
    if (!pts.is_array()) throw InvalidArgument("\"points\" must be an array of [x, y] pairs");
    std::vector<Point2> out;
    for (const auto& p : pts) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw InvalidArgument("\"points\" must be an array of [x, y] pairs");
      }
      out.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return PointSet2(std::move(out));
  });
}

json to_json(const Manipulator& m) {
  return {{"link_lengths", std::vector<double>(m.link_lengths().begin(), m.link_lengths().end())}};
}

Manipulator manipulator_from_json(const json& j) {
  return guarded("manipulator", [&] {
    return Manipulator(number_array(require(j, "link_lengths", "manipulator"), "\"link_lengths\""));
  });
}

json to_json(const Posture& p) { return {{"theta_rad", angles_json(p.theta(), false)}}; }

Posture posture_from_json(const json& j) {
  return guarded("posture", [&] {
    if (!j.is_object()) throw InvalidArgument("posture JSON must be an object");
    const bool deg = j.contains("theta_deg");
    const bool rad = j.contains("theta_rad");
    if (deg == rad) throw InvalidArgument("posture JSON needs exactly one of \"theta_deg\" or \"theta_rad\"");
    if (deg) {
      const auto t = number_array(j.at("theta_deg"), "\"theta_deg\"");
      return Posture::from_degrees(t);
    }
    return Posture(number_array(j.at("theta_rad"), "\"theta_rad\""));
  });
}

json to_json(const ConditioningResult& r) {
  return {{"z", r.z},
          {"l_P", r.l_P},
          {"alpha_opt_rad", r.alpha_opt},
          {"kappa", finite_or_null(r.kappa)},
          {"d_rms", r.d_rms}};
}

ConditioningResult conditioning_result_from_json(const json& j) {
  return guarded("conditioning result", [&] {
    ConditioningResult r;
    r.z = require(j, "z", "conditioning result").get<double>();
    r.l_P = require(j, "l_P", "conditioning result").get<double>();
    r.alpha_opt = require(j, "alpha_opt_rad", "conditioning result").get<double>();
    r.kappa = number_or_inf(require(j, "kappa", "conditioning result"));
    r.d_rms = require(j, "d_rms", "conditioning result").get<double>();
    r.lambda = 1.0 / r.l_P;
    return r;
  });
}

json to_json(const OptimumPosture& o) {
  json minima = json::array();
  for (const auto& m : o.all_local_minima) {
    minima.push_back({{"theta_rad", angles_json(m.theta.theta(), false)}, {"z", m.z}});
  }
  return {{"theta_rad", angles_json(o.theta.theta(), false)},
          {"theta_deg", angles_json(o.theta.theta(), true)},
          {"z_min", o.z_min},
          {"l_P", o.l_P},
          {"alpha_opt_rad", o.alpha_opt},
          {"is_global", o.is_global},
          {"all_local_minima", minima}};
}

OptimumPosture optimum_posture_from_json(const json& j) {
  return guarded("optimum posture", [&] {
    OptimumPosture o;
    o.theta = Posture(number_array(require(j, "theta_rad", "optimum posture"), "\"theta_rad\""));
    o.z_min = require(j, "z_min", "optimum posture").get<double>();
    o.l_P = require(j, "l_P", "optimum posture").get<double>();
    o.alpha_opt = require(j, "alpha_opt_rad", "optimum posture").get<double>();
    o.is_global = require(j, "is_global", "optimum posture").get<bool>();
    for (const auto& m : require(j, "all_local_minima", "optimum posture")) {
      o.all_local_minima.push_back(
          {Posture(number_array(require(m, "theta_rad", "local minimum"), "\"theta_rad\"")),
           require(m, "z", "local minimum").get<double>()});
    }
    return o;
  });
}

json to_json(const Contour& c) {
  json pts = json::array();
  for (const auto& p : c.points) pts.push_back({p.x(), p.y()});
  return {{"level", c.level}, {"closed", c.closed}, {"points", pts}};
}

json to_json(const std::vector<Contour>& contours) {
  json arr = json::array();
  for (const auto& c : contours) arr.push_back(to_json(c));
  return arr;
}

std::vector<Contour> contours_from_json(const json& j) {
  return guarded("contours", [&] {
    if (!j.is_array()) throw InvalidArgument("contours JSON must be an array");
    std::vector<Contour> out;
    for (const auto& item : j) {
      Contour c;
      c.level = require(item, "level", "contour").get<double>();
      c.closed = require(item, "closed", "contour").get<bool>();
      for (const auto& p : require(item, "points", "contour")) {
        c.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      }
      out.push_back(std::move(c));
    }
    return out;
  });
}

json to_json(const WorkspaceMeasure& w) {
  return {{"z_M", w.z_M}, {"area_fraction", w.area_fraction}, {"cell_count", w.cell_count}};
}

WorkspaceMeasure workspace_measure_from_json(const json& j) {
  return guarded("workspace measure", [&] {
    WorkspaceMeasure w;
    w.z_M = require(j, "z_M", "workspace measure").get<double>();
    w.area_fraction = require(j, "area_fraction", "workspace measure").get<double>();
    w.cell_count = require(j, "cell_count", "workspace measure").get<std::size_t>();
    return w;
  });
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("malformed JSON in " + path.string() + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace kinecond::io
