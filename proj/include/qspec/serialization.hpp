#pragma once

// JSON encodings:
//   Quaternion            [w, x, y, z]
//   ImaginaryUnit         [x, y, z]
//   QMatrix               {"n": n, "entries": [[w,x,y,z], ...]}   (row-major)
//   PowerSeriesFunction   {"coefficients": [[w,x,y,z], ...], "radius": r}
//                         (radius omitted or null for polynomials)
//   SSpectrum             {"spheres": [{"s0", "s1", "mult"}], "tol": r}
//   Contour               {"plane": [x,y,z], "clearance": r, "circles": [
//                            {"center": [x, y], "radius": r, "samples": N,
//                             "cluster": c, "enclosed": [[sphere, side], ...]}]}

#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>  // nlohmann/json, vendored

#include "qspec/errors.hpp"
#include "qspec/qmatrix.hpp"
#include "qspec/quaternion.hpp"
#include "qspec/s_calculus.hpp"
#include "qspec/slice_regular.hpp"

namespace qspec {

using Json = nlohmann::json;

namespace detail {

inline double require_number(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace detail

inline void to_json(Json& j, const Quaternion& q) { j = Json::array({q.w, q.x, q.y, q.z}); }

inline void from_json(const Json& j, Quaternion& q) {
  if (!j.is_array() || j.size() != 4) throw ParseError("quaternion must be an array [w, x, y, z]");
  q = {detail::require_number(j[0], "w"), detail::require_number(j[1], "x"), detail::require_number(j[2], "y"),
       detail::require_number(j[3], "z")};
}

inline void to_json(Json& j, const ImaginaryUnit& u) { j = Json::array({u.x(), u.y(), u.z()}); }

inline void from_json(const Json& j, ImaginaryUnit& u) {
  if (!j.is_array() || j.size() != 3) throw ParseError("imaginary unit must be an array [x, y, z]");
  const double x = detail::require_number(j[0], "x");
  const double y = detail::require_number(j[1], "y");
  const double z = detail::require_number(j[2], "z");
  if (std::abs(std::hypot(std::hypot(x, y), z) - 1.0) > 1e-12) throw ParseError("imaginary unit must have norm 1");
  u = ImaginaryUnit::from_vector(x, y, z);
}

inline void to_json(Json& j, const QMatrix& m) {
  Json entries = Json::array();
  for (const auto& q : m.entries()) entries.push_back(q);
  j = Json{{"n", m.size()}, {"entries", std::move(entries)}};
}

inline void from_json(const Json& j, QMatrix& m) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries")) {
    throw ParseError("matrix must be an object with \"n\" and \"entries\"");
  }
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) throw ParseError("\"n\" must be a positive integer");
  const auto n = j["n"].get<std::size_t>();
  const Json& entries = j["entries"];
  if (!entries.is_array() || entries.size() != n * n) throw ParseError("\"entries\" must hold n*n quaternions");
  std::vector<Quaternion> data;
  data.reserve(n * n);
  for (const auto& e : entries) data.push_back(e.get<Quaternion>());
  m = QMatrix::from_row_major(n, std::move(data));
}

inline void to_json(Json& j, const PowerSeriesFunction& f) {
  j = Json{{"coefficients", f.coefficients}};
  if (std::isfinite(f.radius)) j["radius"] = f.radius;
  else j["radius"] = nullptr;
  if (f.truncated) j["truncated"] = true;
  if (!f.label.empty()) j["label"] = f.label;
}

inline void from_json(const Json& j, PowerSeriesFunction& f) {
  if (!j.is_object() || !j.contains("coefficients") || !j["coefficients"].is_array() || j["coefficients"].empty()) {
    throw ParseError("series must be an object with a non-empty \"coefficients\" array");
  }
  f = PowerSeriesFunction{};
  for (const auto& c : j["coefficients"]) f.coefficients.push_back(c.get<Quaternion>());
  if (j.contains("radius") && !j["radius"].is_null()) {
    f.radius = detail::require_number(j["radius"], "radius");
    if (!(f.radius > 0.0)) throw ParseError("\"radius\" must be positive");
    f.truncated = j.value("truncated", true);
  }
  f.label = j.value("label", std::string{});
}

inline void to_json(Json& j, const SSpectrum& s) {
  Json spheres = Json::array();
  for (const auto& sp : s.spheres) spheres.push_back({{"s0", sp.s0}, {"s1", sp.s1}, {"mult", sp.multiplicity}});
  j = Json{{"spheres", std::move(spheres)}, {"tol", s.tol}};
}

inline void from_json(const Json& j, SSpectrum& s) {
  if (!j.is_object() || !j.contains("spheres") || !j["spheres"].is_array()) {
    throw ParseError("spectrum must be an object with a \"spheres\" array");
  }
  s = SSpectrum{};
  for (const auto& e : j["spheres"]) {
    SpectralSphere sp;
    sp.s0 = detail::require_number(e.at("s0"), "s0");
    sp.s1 = detail::require_number(e.at("s1"), "s1");
    if (sp.s1 < 0.0) throw ParseError("s1 must be nonnegative");
    sp.multiplicity = e.value("mult", 1);
    s.spheres.push_back(sp);
  }
  s.tol = j.contains("tol") ? detail::require_number(j["tol"], "tol") : 0.0;
}

inline void to_json(Json& j, const Contour& c) {
  Json circles = Json::array();
  for (const auto& cc : c.circles) {
    Json enclosed = Json::array();
    for (const auto& e : cc.enclosed) enclosed.push_back(Json::array({e.sphere, e.side}));
    circles.push_back({{"center", Json::array({cc.circle.center_x, cc.circle.center_y})},
                       {"radius", cc.circle.radius},
                       {"samples", cc.circle.samples},
                       {"cluster", cc.cluster},
                       {"enclosed", std::move(enclosed)}});
  }
  j = Json{{"plane", c.plane}, {"clearance", c.clearance}, {"circles", std::move(circles)}};
}

/// Reads a matrix, series, ... from JSON text; every failure becomes ParseError.
template <class T>
T parse_json(const std::string& text) {
  try {
    return Json::parse(text).get<T>();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
}

}  // namespace qspec
