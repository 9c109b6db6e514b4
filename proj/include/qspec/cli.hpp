#pragma once

/**
 * @file cli.hpp
 * @brief Batch jobs behind the `qspec` command line tool.
 *
 * Each run_* function takes a JobConfig and returns a Report whose body is a
 * JSON document. Numeric fields depend only on the inputs and seeds; the
 * single non-deterministic field is "wall_time_s".
 *
 * Exit codes: 0 all checks pass, 1 numerical failure, 2 input error.
 */

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qspec/errors.hpp"
#include "qspec/qmatrix.hpp"
#include "qspec/random.hpp"
#include "qspec/s_calculus.hpp"
#include "qspec/serialization.hpp"
#include "qspec/slice_regular.hpp"

namespace qspec::cli {

enum class Command { spectrum, resolvent, apply, project, verify };

inline const char* command_name(Command c) {
  switch (c) {
    case Command::spectrum: return "spectrum";
    case Command::resolvent: return "resolvent";
    case Command::apply: return "apply";
    case Command::project: return "project";
    case Command::verify: return "verify";
  }
  return "?";
}

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kInputError = 2 };

/// Quadrature node cap, overridable through QSPEC_MAX_NODES.
inline std::size_t default_max_nodes() {
  if (const char* env = std::getenv("QSPEC_MAX_NODES")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v >= 2) return static_cast<std::size_t>(v);
  }
  return 8192;
}

struct JobConfig {
  Command command = Command::spectrum;
  std::string input_path;     // matrix JSON; empty when random_n is set
  std::string function_path;  // series JSON for apply
  std::string point;          // quaternion JSON for resolvent, e.g. "[0,0,2,0]"
  ImaginaryUnit plane = ImaginaryUnit::i();
  std::optional<double> spectral_tol;
  std::optional<double> clearance;
  double quadrature_tol = 1e-10;
  double check_tol = 1e-9;
  std::size_t max_nodes = default_max_nodes();
  bool verify_plane = false;
  std::vector<std::size_t> select;
  std::optional<std::size_t> random_n;
  std::uint64_t seed = 0;
};

struct Report {
  Json body;
  int exit_code = kPass;
};

// ---------------------------------------------------------------------------
// Input handling

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// FNV-1a 64-bit, printed as 16 hex digits.
inline std::string digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct LoadedMatrix {
  QMatrix matrix;
  std::string digest;
};

inline LoadedMatrix load_matrix(const JobConfig& config) {
  if (config.random_n) {
    if (*config.random_n == 0) throw ParseError("--random needs n >= 1");
    Rng rng(config.seed);
    return {rng.matrix(*config.random_n), "random:" + std::to_string(*config.random_n) + ":" + std::to_string(config.seed)};
  }
  if (config.input_path.empty()) throw ParseError("no input matrix given");
  const std::string text = read_file(config.input_path);
  return {parse_json<QMatrix>(text), digest(text)};
}

// ---------------------------------------------------------------------------
// Contour selection

/// A clearance of 0.4 x (smallest distance between distinct spheres), capped
/// at 0.5 and by the room left inside the function's ball.
inline double auto_clearance(const SSpectrum& spectrum, double function_radius = INFINITY) {
  double gap = INFINITY;
  double reach = 0.0;
  for (std::size_t a = 0; a < spectrum.spheres.size(); ++a) {
    reach = std::max(reach, spectrum.spheres[a].modulus());
    for (std::size_t b = a + 1; b < spectrum.spheres.size(); ++b) {
      gap = std::min(gap, std::hypot(spectrum.spheres[a].s0 - spectrum.spheres[b].s0,
                                     spectrum.spheres[a].s1 - spectrum.spheres[b].s1));
    }
  }
  double c = std::min(0.5, 0.4 * gap);
  if (std::isfinite(function_radius)) c = std::min(c, 0.45 * (function_radius - reach));
  return c;
}

/// build_contour with the requested clearance, or with the automatic one,
/// halved until the circles separate.
inline Contour choose_contour(const SSpectrum& spectrum, const ImaginaryUnit& plane,
                              const std::optional<double>& clearance, double function_radius = INFINITY) {
  if (clearance) return build_contour(spectrum, plane, *clearance);
  double c = auto_clearance(spectrum, function_radius);
  for (int attempt = 0;; ++attempt) {
    try {
      return build_contour(spectrum, plane, c);
    } catch (const ClearanceTooLarge&) {
      if (attempt >= 40) throw;
      c *= 0.5;
    }
  }
}

inline QuadratureOptions quadrature_options(const JobConfig& config) {
  QuadratureOptions o;
  o.tol = config.quadrature_tol;
  o.max_nodes = config.max_nodes;
  o.initial_nodes = std::min<std::size_t>(o.initial_nodes, config.max_nodes);
  return o;
}

// ---------------------------------------------------------------------------
// Report helpers

namespace detail {

inline Json header(const JobConfig& config, const std::string& input_digest) {
  return Json{{"command", command_name(config.command)}, {"input_digest", input_digest}};
}

inline Json check(const std::string& name, double residual, double threshold) {
  const bool pass = std::isfinite(residual) && residual <= threshold;
  return Json{{"name", name}, {"residual", residual}, {"threshold", threshold}, {"pass", pass}};
}

inline Json error_entry(const std::string& name, const std::string& kind, const std::string& message) {
  return Json{{"name", name}, {"error", kind}, {"message", message}, {"pass", false}};
}

inline Json spectrum_with_margins(const SSpectrum& spectrum) {
  Json j = spectrum;
  Json margins = Json::array();
  for (const auto& sp : spectrum.spheres) margins.push_back(sp.margin);
  j["margins"] = std::move(margins);
  return j;
}

template <class Job>
Report timed(const JobConfig& config, Job&& job) {
  const auto start = std::chrono::steady_clock::now();
  Report report;
  try {
    report = job();
  } catch (const ParseError& e) {
    report.body = Json{{"command", command_name(config.command)}, {"error", "ParseError"}, {"message", e.what()}};
    report.exit_code = kInputError;
  } catch (const InvalidArgument& e) {
    report.body = Json{{"command", command_name(config.command)}, {"error", "InvalidArgument"}, {"message", e.what()}};
    report.exit_code = kInputError;
  } catch (const RadiusTooSmall& e) {
    report.body = Json{{"command", command_name(config.command)}, {"error", "RadiusTooSmall"}, {"message", e.what()}};
    report.exit_code = kInputError;
  } catch (const Error& e) {
    report.body = Json{{"command", command_name(config.command)}, {"error", "NumericalError"}, {"message", e.what()}};
    report.exit_code = kCheckFailed;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  report.body["wall_time_s"] = elapsed.count();
  return report;
}

inline ImaginaryUnit alternate_plane(const ImaginaryUnit& plane) {
  const ImaginaryUnit diag = ImaginaryUnit::from_vector(1, 1, 1);
  const double dot = plane.x() * diag.x() + plane.y() * diag.y() + plane.z() * diag.z();
  return std::abs(dot) > 0.99 ? ImaginaryUnit::i() : diag;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Jobs

inline Report run_spectrum(const JobConfig& config) {
  return detail::timed(config, [&] {
    const auto input = load_matrix(config);
    const SSpectrum spectrum = s_spectrum(input.matrix, config.spectral_tol);
    Report r;
    r.body = detail::header(config, input.digest);
    r.body["results"] = Json{{"spectrum", detail::spectrum_with_margins(spectrum)},
                             {"operator_norm", operator_norm(input.matrix)}};
    return r;
  });
}

/// S^{-1}(s, T) at one point, with the S-resolvent equation residual.
inline Report run_resolvent(const JobConfig& config) {
  return detail::timed(config, [&] {
    const auto input = load_matrix(config);
    if (config.point.empty()) throw ParseError("resolvent needs a point s");
    const Quaternion s = parse_json<Quaternion>(config.point);
    const QMatrix r = s_resolvent(s, input.matrix, config.spectral_tol);
    const double residual =
        operator_norm(right_multiply(r, s) - input.matrix * r - QMatrix::identity(input.matrix.size()));
    Report rep;
    rep.body = detail::header(config, input.digest);
    rep.body["results"] = Json{{"s", s}, {"resolvent", r}};
    rep.body["checks"] = Json::array({detail::check("resolvent_equation", residual, config.check_tol)});
    rep.exit_code = rep.body["checks"][0]["pass"].get<bool>() ? kPass : kCheckFailed;
    return rep;
  });
}

inline Report run_apply(const JobConfig& config) {
  return detail::timed(config, [&] {
    const auto input = load_matrix(config);
    if (config.function_path.empty()) throw ParseError("apply needs a series file (-f)");
    const std::string ftext = read_file(config.function_path);
    const auto f = parse_json<PowerSeriesFunction>(ftext);
    const SSpectrum spectrum = s_spectrum(input.matrix, config.spectral_tol);
    double reach = 0.0;
    for (const auto& sp : spectrum.spheres) reach = std::max(reach, sp.modulus());
    if (!(reach < f.radius)) {
      throw RadiusTooSmall("series radius " + std::to_string(f.radius) + " does not exceed the spectral radius " +
                           std::to_string(reach));
    }
    const QuadratureOptions options = quadrature_options(config);
    const Contour contour = choose_contour(spectrum, config.plane, config.clearance, f.radius);
    const CalculusResult result = apply_function(f, input.matrix, contour, options);

    Report r;
    r.body = detail::header(config, input.digest + "+" + digest(ftext));
    r.body["results"] = Json{{"spectrum", spectrum}, {"f_of_T", result.value}, {"contour", contour}};
    r.body["diagnostics"] = Json{{"nodes_per_circle", result.nodes}};
    if (config.verify_plane) {
      const ImaginaryUnit other = detail::alternate_plane(config.plane);
      const CalculusResult alt = apply_function(f, input.matrix, with_plane(contour, other), options);
      const double scale = std::max(1.0, operator_norm(result.value));
      Json c = detail::check("plane_independence", operator_norm(result.value - alt.value), config.check_tol * scale);
      c["other_plane"] = other;
      r.body["checks"] = Json::array({c});
      if (!c["pass"].get<bool>()) r.exit_code = kCheckFailed;
    }
    return r;
  });
}

inline Report run_project(const JobConfig& config) {
  return detail::timed(config, [&] {
    const auto input = load_matrix(config);
    if (config.select.empty()) throw ParseError("project needs --select with at least one sphere index");
    const SSpectrum spectrum = s_spectrum(input.matrix, config.spectral_tol);
    for (std::size_t k : config.select) {
      if (k >= spectrum.spheres.size()) throw InvalidArgument("sphere index " + std::to_string(k) + " out of range");
    }
    const Contour contour = choose_contour(spectrum, config.plane, config.clearance);
    const Contour part = select_spheres(contour, config.select);
    const RieszProjection proj = riesz_projector(input.matrix, part, 3, quadrature_options(config));
    const QMatrix& p = proj.projector;
    const QMatrix& t = input.matrix;

    Report r;
    r.body = detail::header(config, input.digest);
    r.body["results"] = Json{{"spectrum", spectrum}, {"select", config.select}, {"projector", p},
                             {"moments", proj.moments}, {"contour", part}};
    r.body["diagnostics"] = Json{{"nodes_per_circle", proj.nodes}};
    const double scale = std::max(1.0, operator_norm(t));
    Json checks = Json::array();
    checks.push_back(detail::check("idempotent", operator_norm(p * p - p), config.check_tol * std::max(1.0, operator_norm(p))));
    checks.push_back(detail::check("T_P_equals_moment_1", operator_norm(t * p - proj.moments[1]), config.check_tol * scale));
    r.body["checks"] = checks;
    for (const auto& c : checks)
      if (!c["pass"].get<bool>()) r.exit_code = kCheckFailed;
    return r;
  });
}

/// Invariant suite: S-resolvent equation, Q_m identity, monomial
/// reproduction, plane independence and the projector properties.
inline Report run_verify(const JobConfig& config) {
  return detail::timed(config, [&] {
    const auto input = load_matrix(config);
    const QMatrix& t = input.matrix;
    const std::size_t n = t.size();
    const double norm_t = operator_norm(t);
    const double scale = std::max(1.0, norm_t);
    const double tol = config.check_tol;
    const QuadratureOptions options = quadrature_options(config);
    const SSpectrum spectrum = s_spectrum(t, config.spectral_tol);

    Json checks = Json::array();
    auto guarded = [&](const std::string& name, auto&& body) {
      try {
        body();
      } catch (const ClearanceTooLarge& e) {
        checks.push_back(detail::error_entry(name, "ClearanceTooLarge", e.what()));
      } catch (const Error& e) {
        checks.push_back(detail::error_entry(name, "NumericalError", e.what()));
      }
    };

    // Admissible points: a ring outside the norm ball in rotating planes.
    std::vector<Quaternion> points;
    {
      Rng rng(config.seed ^ 0x5eedULL);
      const double radius = 1.5 * norm_t + 1.0;
      for (int k = 0; k < 16; ++k) {
        points.push_back(radius * unit_exp(rng.uniform(0.0, 2.0 * std::numbers::pi), rng.unit()));
      }
    }

    guarded("resolvent_equation", [&] {
      double worst = 0.0;
      for (const auto& s : points) worst = std::max(worst, s_resolvent_equation_residual(s, t, config.spectral_tol));
      checks.push_back(detail::check("resolvent_equation", worst, 0.1 * tol * scale));
    });

    guarded("q_m_identity", [&] {
      double worst = 0.0;
      for (int m = 0; m <= 6; ++m) {
        for (std::size_t p = 0; p < 4; ++p) {
          const Quaternion& s = points[p];
          const QMatrix r = s_resolvent(s, t, config.spectral_tol);
          const QMatrix lhs = right_multiply(r, pow(s, m)) - matrix_power(t, m) * r;
          const double sc = std::pow(norm_t + norm(s), std::max(0, m - 1)) + 1.0;
          worst = std::max(worst, operator_norm(lhs - resolvent_shift_Q(m, s, t)) / sc);
        }
      }
      checks.push_back(detail::check("q_m_identity", worst, tol));
    });

    std::optional<Contour> contour;
    guarded("contour", [&] { contour = choose_contour(spectrum, config.plane, config.clearance); });

    const Quaternion a{0.3, -0.2, 0.5, 0.1};
    if (contour) {
      guarded("monomial_reproduction", [&] {
        double worst = 0.0;
        for (int m = 0; m <= 5; ++m) {
          const QMatrix got = apply_function(monomial(m, a), t, *contour, options).value;
          const QMatrix want = right_multiply(matrix_power(t, m), a);
          worst = std::max(worst, operator_norm(got - want) / std::max(1.0, std::pow(norm_t, m)));
        }
        checks.push_back(detail::check("monomial_reproduction", worst, tol));
      });

      guarded("plane_independence", [&] {
        const PowerSeriesFunction f = exp_series(12);
        const QMatrix base = apply_function(f, t, *contour, options).value;
        const ImaginaryUnit other = detail::alternate_plane(config.plane);
        const QMatrix alt = apply_function(f, t, with_plane(*contour, other), options).value;
        checks.push_back(detail::check("plane_independence", operator_norm(base - alt),
                                       tol * std::max(1.0, operator_norm(base))));
      });
    }

    Json projectors = Json::array();
    if (contour) {
      guarded("projectors", [&] {
        const std::size_t clusters = cluster_count(*contour);
        const std::size_t plane_points = [&] {
          std::size_t c = 0;
          for (const auto& sp : spectrum.spheres) c += sp.s1 > 0.0 ? 2 : 1;
          return c;
        }();
        if (clusters < 2) {
          if (plane_points > 1 && contour->circles.size() == 1) {
            throw ClearanceTooLarge("clearance merges all " + std::to_string(plane_points) +
                                    " spectral plane points into one circle; no spectral splitting possible");
          }
          return;  // one spectral cluster: the only projector is the identity
        }
        QMatrix sum_p(n);
        std::vector<QMatrix> sum_moments(4, QMatrix(n));
        double worst_idem = 0.0, worst_first = 0.0;
        for (std::size_t cl = 0; cl < clusters; ++cl) {
          const auto spheres = cluster_spheres(*contour, cl);
          const RieszProjection proj = riesz_projector(t, select_spheres(*contour, spheres), 3, options);
          const QMatrix& p = proj.projector;
          worst_idem = std::max(worst_idem, operator_norm(p * p - p) / std::max(1.0, operator_norm(p)));
          worst_first = std::max(worst_first, operator_norm(t * p - proj.moments[1]) / scale);
          sum_p += p;
          for (int m = 0; m <= 3; ++m) sum_moments[static_cast<std::size_t>(m)] += proj.moments[static_cast<std::size_t>(m)];
          projectors.push_back(Json{{"spheres", spheres}, {"projector", p}});
        }
        checks.push_back(detail::check("projector_idempotent", worst_idem, tol));
        checks.push_back(detail::check("projector_sum_identity", operator_norm(sum_p - QMatrix::identity(n)), tol));
        checks.push_back(detail::check("projector_first_moment", worst_first, tol));
        double worst_power = 0.0;
        for (int m = 2; m <= 3; ++m) {
          worst_power = std::max(worst_power, operator_norm(matrix_power(t, m) - sum_moments[static_cast<std::size_t>(m)]) /
                                                  std::max(1.0, std::pow(norm_t, m)));
        }
        checks.push_back(detail::check("projector_power_moments", worst_power, tol));
      });
    }

    Report r;
    r.body = detail::header(config, input.digest);
    r.body["results"] = Json{{"spectrum", detail::spectrum_with_margins(spectrum)}, {"operator_norm", norm_t},
                             {"projectors", projectors}};
    if (contour) r.body["results"]["contour"] = *contour;
    r.body["checks"] = checks;
    bool all = true;
    for (const auto& c : checks) all = all && c["pass"].get<bool>();
    r.body["all_pass"] = all;
    r.exit_code = all ? kPass : kCheckFailed;
    return r;
  });
}

inline Report run(const JobConfig& config) {
  switch (config.command) {
    case Command::spectrum: return run_spectrum(config);
    case Command::resolvent: return run_resolvent(config);
    case Command::apply: return run_apply(config);
    case Command::project: return run_project(config);
    case Command::verify: return run_verify(config);
  }
  return {};
}

}  // namespace qspec::cli
