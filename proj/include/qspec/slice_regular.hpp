#pragma once

/**
 * @file slice_regular.hpp
 * @brief Slice-regular functions given as right-coefficient power series.
 *
 * f(q) = sum_n q^n a_n converges on a ball B(0, R) and its restriction to
 * every slice plane L_I is annihilated by (d/dx + I d/dy) / 2. On a circle
 * zeta(theta) = c + r e^{I theta} of L_I we use
 *
 *     d zeta     = I r e^{I theta} d theta
 *     d zeta_I   = -I d zeta = r e^{I theta} d theta,
 *
 * with counterclockwise orientation, which makes the Cauchy formula
 * f(q) = (1/2pi) integral (zeta - q)^{-1} d zeta_I f(zeta) hold with a plus sign.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qspec/errors.hpp"
#include "qspec/quadrature.hpp"
#include "qspec/quaternion.hpp"

namespace qspec {

/// Anything that maps a quaternion to a quaternion.
template <class F>
concept SliceFunction = std::invocable<const F&, const Quaternion&> &&
                        std::convertible_to<std::invoke_result_t<const F&, const Quaternion&>, Quaternion>;

struct PowerSeriesFunction {
  std::vector<Quaternion> coefficients;  // a_0 ... a_N
  /// Guaranteed convergence radius. Infinity for polynomials.
  double radius = std::numeric_limits<double>::infinity();
  /// True when the coefficients truncate an infinite series; evaluation is
  /// then only meaningful for |q| < radius.
  bool truncated = false;
  std::string label;

  Quaternion operator()(const Quaternion& q) const;
};

/// Horner evaluation of sum q^n a_n: q (q (... a_N ...) + a_1) + a_0.
inline Quaternion evaluate(const PowerSeriesFunction& f, const Quaternion& q) {
  Quaternion acc;
  for (auto it = f.coefficients.rbegin(); it != f.coefficients.rend(); ++it) acc = q * acc + *it;
  return acc;
}

inline Quaternion PowerSeriesFunction::operator()(const Quaternion& q) const { return evaluate(*this, q); }

/// evaluate() that refuses points outside the convergence ball of a truncated series.
inline Quaternion evaluate_checked(const PowerSeriesFunction& f, const Quaternion& q) {
  if (f.truncated && !(norm(q) < f.radius)) {
    throw OutOfDomain("|q| = " + std::to_string(norm(q)) + " is outside the series ball of radius " +
                      std::to_string(f.radius));
  }
  return evaluate(f, q);
}

inline bool has_real_coefficients(const PowerSeriesFunction& f, double tol = 0.0) {
  return std::all_of(f.coefficients.begin(), f.coefficients.end(),
                     [tol](const Quaternion& a) { return imag_norm(a) <= tol; });
}

// Constructors for the series used throughout the tests and the CLI.

inline PowerSeriesFunction constant_function(const Quaternion& a) { return {{a}, std::numeric_limits<double>::infinity(), false, "constant"}; }

/// q^m a.
inline PowerSeriesFunction monomial(int m, const Quaternion& a = 1.0) {
  if (m < 0) throw InvalidArgument("monomial degree must be >= 0");
  PowerSeriesFunction f;
  f.coefficients.assign(static_cast<std::size_t>(m) + 1, Quaternion{});
  f.coefficients.back() = a;
  f.label = "q^" + std::to_string(m);
  return f;
}

inline PowerSeriesFunction polynomial(std::vector<Quaternion> coefficients) {
  return {std::move(coefficients), std::numeric_limits<double>::infinity(), false, "polynomial"};
}

/// sum_{n<=degree} q^n / n!. The truncation is a polynomial and entire.
inline PowerSeriesFunction exp_series(int degree) {
  PowerSeriesFunction f;
  double term = 1.0;
  for (int n = 0; n <= degree; ++n) {
    if (n > 0) term /= n;
    f.coefficients.emplace_back(term);
  }
  f.label = "exp_" + std::to_string(degree);
  return f;
}

inline PowerSeriesFunction sum(const PowerSeriesFunction& f, const PowerSeriesFunction& g) {
  PowerSeriesFunction out;
  out.coefficients.resize(std::max(f.coefficients.size(), g.coefficients.size()));
  for (std::size_t n = 0; n < f.coefficients.size(); ++n) out.coefficients[n] += f.coefficients[n];
  for (std::size_t n = 0; n < g.coefficients.size(); ++n) out.coefficients[n] += g.coefficients[n];
  out.radius = std::min(f.radius, g.radius);
  out.truncated = f.truncated || g.truncated;
  return out;
}

/// Cauchy product sum q^n (sum_{k} a_k b_{n-k}). Equals the pointwise product
/// f(q) g(q) only when the coefficients of f are real, which is enforced.
inline PowerSeriesFunction product_real(const PowerSeriesFunction& f, const PowerSeriesFunction& g) {
  if (!has_real_coefficients(f) || !has_real_coefficients(g)) {
    throw NonRealCoefficients("pointwise product of series is only a series for real coefficients");
  }
  PowerSeriesFunction out;
  if (f.coefficients.empty() || g.coefficients.empty()) return out;
  out.coefficients.resize(f.coefficients.size() + g.coefficients.size() - 1);
  for (std::size_t a = 0; a < f.coefficients.size(); ++a)
    for (std::size_t b = 0; b < g.coefficients.size(); ++b)
      out.coefficients[a + b] += f.coefficients[a] * g.coefficients[b];
  out.radius = std::min(f.radius, g.radius);
  out.truncated = f.truncated || g.truncated;
  return out;
}

/// |(1/2)(d/dx + I d/dy) f(x + I y)| by central differences of step h.
template <SliceFunction F>
double slice_cr_residual(const F& f, double x, double y, const ImaginaryUnit& unit, double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  const Quaternion dx = (Quaternion(f(embed_in_plane(x + h, y, unit))) - f(embed_in_plane(x - h, y, unit))) / (2.0 * h);
  const Quaternion dy = (Quaternion(f(embed_in_plane(x, y + h, unit))) - f(embed_in_plane(x, y - h, unit))) / (2.0 * h);
  return norm(0.5 * (dx + unit.as_quaternion() * dy));
}

/// A circle c + r e^{I theta} in L_I with c = center_x + center_y I.
struct PlaneCircle {
  ImaginaryUnit plane;
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 1.0;
  std::size_t samples = 64;

  Quaternion center() const noexcept { return embed_in_plane(center_x, center_y, plane); }

  /// r e^{I theta}, also the value of d zeta_I / d theta.
  Quaternion offset(double theta) const noexcept { return radius * unit_exp(theta, plane); }

  Quaternion point(double theta) const noexcept { return center() + offset(theta); }
};

namespace detail {

inline double quaternion_magnitude(const Quaternion& q) { return norm(q); }

inline void check_inside_ball(double extent, double ball_radius) {
  if (!(extent < ball_radius)) {
    throw OutOfDomain("closed disk reaches |q| = " + std::to_string(extent) + ", outside the ball of radius " +
                      std::to_string(ball_radius));
  }
}

}  // namespace detail

/// (1/2pi) integral over |zeta| = r in L_{I_q} of (zeta - q)^{-1} d zeta_I f(zeta),
/// by an N-point trapezoidal rule. The 2N rule is evaluated as well; if the
/// two differ by more than tol * max(1, |result|) QuadratureDivergence is thrown.
template <SliceFunction F>
Quaternion scalar_cauchy_reproduce(const F& f, const Quaternion& q, double r, std::size_t nodes, double tol = 1e-10) {
  if (!(norm(q) < r)) throw InvalidArgument("Cauchy reproduction needs |q| < r");
  const ImaginaryUnit unit = slice_decompose(q).unit;
  auto integrand = [&](double theta) {
    const Quaternion zeta = embed_in_plane(r * std::cos(theta), r * std::sin(theta), unit);
    return inverse(zeta - q) * zeta * Quaternion(f(zeta));
  };
  const Quaternion coarse = periodic_mean<Quaternion>(integrand, nodes);
  const Quaternion fine = periodic_mean<Quaternion>(integrand, 2 * nodes);
  if (distance(coarse, fine) > tol * std::max(1.0, norm(fine))) {
    throw QuadratureDivergence("Cauchy reproduction with " + std::to_string(nodes) + " and " +
                               std::to_string(2 * nodes) + " nodes differs by " +
                               std::to_string(distance(coarse, fine)));
  }
  return coarse;
}

inline Quaternion scalar_cauchy_reproduce(const PowerSeriesFunction& f, const Quaternion& q, double r,
                                          std::size_t nodes, double tol = 1e-10) {
  detail::check_inside_ball(r, f.radius);
  return scalar_cauchy_reproduce<PowerSeriesFunction>(f, q, r, nodes, tol);
}

/// integral of d zeta f(zeta) around the circle; zero for regular f.
template <SliceFunction F>
Quaternion closed_curve_integral(const F& f, const PlaneCircle& circle, std::size_t nodes) {
  const Quaternion unit = circle.plane.as_quaternion();
  auto integrand = [&](double theta) { return unit * circle.offset(theta) * Quaternion(f(circle.point(theta))); };
  return 2.0 * std::numbers::pi * periodic_mean<Quaternion>(integrand, nodes);
}

inline Quaternion closed_curve_integral(const PowerSeriesFunction& f, const PlaneCircle& circle, std::size_t nodes) {
  detail::check_inside_ball(std::hypot(circle.center_x, circle.center_y) + circle.radius, f.radius);
  return closed_curve_integral<PowerSeriesFunction>(f, circle, nodes);
}

/// a_n recovered as (1/2pi) integral of zeta^{-n-1} d zeta_I f(zeta) on |zeta| = r
/// in L_I. The result does not depend on I.
template <SliceFunction F>
Quaternion series_coefficient_from_contour(const F& f, int n, double r, const ImaginaryUnit& unit,
                                           std::size_t nodes = 256) {
  if (n < 0) throw InvalidArgument("coefficient index must be >= 0");
  auto integrand = [&](double theta) {
    const Quaternion zeta = embed_in_plane(r * std::cos(theta), r * std::sin(theta), unit);
    return pow(zeta, -n) * Quaternion(f(zeta));
  };
  return periodic_mean<Quaternion>(integrand, nodes);
}

}  // namespace qspec
