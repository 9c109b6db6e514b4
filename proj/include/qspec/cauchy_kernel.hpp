#pragma once

/**
 * @file cauchy_kernel.hpp
 * @brief The scalar non-commutative Cauchy kernel S^{-1}(s, q).
 *
 * Series form (|q| < |s|):   sum_{n>=0} q^n s^{-1-n}
 * Closed form:               -(q^2 - 2 q Re[s] + |s|^2)^{-1} (q - conj(s))
 *
 * The closed form is undefined exactly on the sphere q in s0 + s1*S, and it
 * reduces to (s - q)^{-1} whenever s and q commute.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "qspec/errors.hpp"
#include "qspec/quaternion.hpp"

namespace qspec {

enum class KernelForm { series, closed };

struct KernelValue {
  Quaternion value;
  KernelForm form = KernelForm::closed;
  int terms_used = 0;  // series only
};

/// q^2 - 2 q Re[s] + |s|^2. Its real coefficients make it commute with q.
constexpr Quaternion kernel_quadratic(const Quaternion& s, const Quaternion& q) noexcept {
  return q * q - 2.0 * s.real() * q + Quaternion(norm_squared(s));
}

/// Throws OnZeroLocus when |q^2 - 2q Re[s] + |s|^2| < 1e-10 (|q| + |s|)^2.
inline Quaternion kernel_closed(const Quaternion& s, const Quaternion& q) {
  const Quaternion quad = kernel_quadratic(s, q);
  const double scale = norm(q) + norm(s);
  const double margin = norm(quad);
  if (margin < 1e-10 * scale * scale || margin == 0.0) {
    throw OnZeroLocus("q lies on the sphere Re[s] + |Im s| S", margin);
  }
  return -(inverse(quad) * (q - conjugate(s)));
}

/// Partial sums of sum q^n s^{-1-n}, stopped once the geometric tail bound
/// |q|^N |s|^{-N-1} / (1 - |q|/|s|) drops below tol.
inline KernelValue kernel_series(const Quaternion& s, const Quaternion& q, double tol = 1e-14, int max_terms = 100000) {
  const double abs_s = norm(s);
  const double abs_q = norm(q);
  if (!(abs_q < abs_s)) throw Divergent("kernel series needs |q| < |s|");
  if (!(tol > 0.0)) throw InvalidArgument("kernel_series tolerance must be positive");

  const double ratio = abs_q / abs_s;
  const Quaternion s_inv = inverse(s);
  Quaternion q_pow{1.0};
  Quaternion s_pow = s_inv;
  Quaternion sum;
  double tail = 1.0 / (abs_s * (1.0 - ratio));
  int terms = 0;
  while (terms < max_terms) {
    sum += q_pow * s_pow;
    ++terms;
    q_pow = q_pow * q;
    s_pow = s_pow * s_inv;
    tail *= ratio;
    if (tail < tol) break;
  }
  if (!(tail < tol)) throw Divergent("kernel series did not reach the tolerance within max_terms");
  return {sum, KernelForm::series, terms};
}

/// |S^2 + S q - s S|; vanishes when S is the inverse of the Cauchy kernel.
inline double kernel_equation_residual(const Quaternion& kernel_inverse, const Quaternion& s, const Quaternion& q) {
  const Quaternion& S = kernel_inverse;
  return norm(S * S + S * q - s * S);
}

/// Evaluates kernel_closed(s, conj(s) + eps d) for each unit direction d.
///
/// The kernel has no limit as q -> conj(s) for non-real s: the values stay
/// apart across directions that do not commute with s.
inline std::vector<Quaternion> non_extendability_probe(const Quaternion& s, std::span<const Quaternion> directions,
                                                       double eps) {
  if (imag_norm(s) <= 1e-14 * norm(s)) throw InvalidArgument("probe needs a non-real s");
  if (!(eps > 0.0)) throw InvalidArgument("probe needs eps > 0");
  std::vector<Quaternion> out;
  out.reserve(directions.size());
  for (const auto& d : directions) {
    if (std::abs(norm(d) - 1.0) > 1e-12) throw InvalidArgument("probe directions must be unit quaternions");
    out.push_back(kernel_closed(s, conjugate(s) + eps * d));
  }
  return out;
}

/// Largest pairwise distance in a set of quaternions.
inline double spread(std::span<const Quaternion> values) {
  double best = 0.0;
  for (std::size_t a = 0; a < values.size(); ++a)
    for (std::size_t b = a + 1; b < values.size(); ++b) best = std::max(best, distance(values[a], values[b]));
  return best;
}

}  // namespace qspec
