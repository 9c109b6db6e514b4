#pragma once

/**
 * @file s_calculus.hpp
 * @brief S-resolvent, S-spectrum and the S-functional calculus for quaternionic matrices.
 *
 * For T in H^{n x n} and s in H the S-resolvent is
 *
 *     S^{-1}(s, T) = -(T^2 - 2 Re[s] T + |s|^2 I)^{-1} (T - conj(s) I),
 *
 * defined off the S-spectrum, the set where the real-coefficient pencil
 * T^2 - 2 Re[s] T + |s|^2 I is singular. The pencil depends on s only through
 * (Re[s], |Im[s]|), so the S-spectrum is a finite union of spheres
 * s0 + s1*S (points when s1 = 0).
 *
 * Picking any slice plane L_I, the spectrum meets it in the points s0 +- s1 I.
 * For a slice-regular f on a ball containing the spectrum,
 *
 *     f(T) = (1/2pi) integral_{dU} S^{-1}(s, T) ds_I f(s),
 *
 * over circles in L_I enclosing those points, with ds_I = -I ds. The value
 * depends neither on I nor on the circles.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qspec/errors.hpp"
#include "qspec/qmatrix.hpp"
#include "qspec/quadrature.hpp"
#include "qspec/quaternion.hpp"
#include "qspec/slice_regular.hpp"

namespace qspec {

// ---------------------------------------------------------------------------
// S-resolvent

/// T^2 - 2 s0 T + (s0^2 + s1^2) I.
inline QMatrix spectral_pencil(const QMatrix& t, double s0, double s1) {
  return t * t - (2.0 * s0) * t + QMatrix::scalar(t.size(), s0 * s0 + s1 * s1);
}

inline QMatrix spectral_pencil(const QMatrix& t, const Quaternion& s) {
  return t * t - (2.0 * s.real()) * t + QMatrix::scalar(t.size(), norm_squared(s));
}

inline double pencil_margin(const QMatrix& t, double s0, double s1) {
  return invertibility_margin(spectral_pencil(t, s0, s1));
}

/// 1e-8 (1 + |T|^2), the threshold under which the pencil counts as singular.
inline double default_spectral_tol(const QMatrix& t) {
  const double n = operator_norm(t);
  return 1e-8 * (1.0 + n * n);
}

/// 1e-8 (1 + |T|), the threshold for sI - T.
inline double default_left_tol(const QMatrix& t) { return 1e-8 * (1.0 + operator_norm(t)); }

/// Evaluates S^{-1}(s, T) without the spectral check, reusing chi(T) and
/// chi(T)^2 across calls. This is the hot path of contour quadrature.
class SResolventKernel {
 public:
  explicit SResolventKernel(const QMatrix& t)
      : n_(t.size()), chi_t_(complex_adjoint(t)), chi_t2_(chi_t_ * chi_t_) {}

  QMatrix operator()(const Quaternion& s) const {
    ComplexAdjoint pencil = chi_t2_ - (2.0 * s.real()) * chi_t_;
    pencil.diagonal().array() += norm_squared(s);
    const ComplexAdjoint rhs = chi_t_ - complex_adjoint(QMatrix::scalar(n_, conjugate(s)));
    return -detail::extract_from_adjoint(pencil.partialPivLu().solve(rhs));
  }

 private:
  std::size_t n_;
  ComplexAdjoint chi_t_;
  ComplexAdjoint chi_t2_;
};

/// Closed-form S-resolvent. Throws OnSSpectrum when the pencil's
/// invertibility margin is below tol (default: default_spectral_tol(T)).
inline QMatrix s_resolvent(const Quaternion& s, const QMatrix& t, std::optional<double> tol = std::nullopt) {
  const double threshold = tol.value_or(default_spectral_tol(t));
  const double margin = invertibility_margin(spectral_pencil(t, s));
  if (margin < threshold || margin == 0.0) {
    throw OnSSpectrum("s lies on the S-spectrum (pencil margin " + std::to_string(margin) + ")", margin);
  }
  return SResolventKernel(t)(s);
}

/// sum_n T^n s^{-1-n}, valid for |T| < |s|; stops once the geometric tail
/// |T|^N |s|^{-N-1} / (1 - |T|/|s|) is below tol.
inline QMatrix s_resolvent_series(const Quaternion& s, const QMatrix& t, double tol = 1e-14, int max_terms = 100000) {
  const double abs_s = norm(s);
  const double norm_t = operator_norm(t);
  if (!(norm_t < abs_s)) throw Divergent("S-resolvent series needs |T| < |s|");
  const double ratio = norm_t / abs_s;
  const Quaternion s_inv = inverse(s);
  QMatrix t_pow = QMatrix::identity(t.size());
  Quaternion s_pow = s_inv;
  QMatrix sum(t.size());
  double tail = 1.0 / (abs_s * (1.0 - ratio));
  for (int terms = 0; terms < max_terms; ++terms) {
    sum += right_multiply(t_pow, s_pow);
    t_pow = t_pow * t;
    s_pow = s_pow * s_inv;
    tail *= ratio;
    if (tail < tol) return sum;
  }
  throw Divergent("S-resolvent series did not reach the tolerance");
}

/// sum_n (T - Re[s] I)^n (s - Re[s])^{-n-1}, valid for |T - Re[s] I| < |Im s|.
inline QMatrix s_resolvent_expansion_at_real(const Quaternion& s, const QMatrix& t, double tol = 1e-14,
                                             int max_terms = 100000) {
  const QMatrix shifted = t - QMatrix::scalar(t.size(), s.real());
  const Quaternion im = s.imag();
  const double abs_im = norm(im);
  const double norm_shifted = operator_norm(shifted);
  if (!(norm_shifted < abs_im)) throw Divergent("expansion at Re[s] needs |T - Re[s] I| < |s - Re[s]|");
  const double ratio = norm_shifted / abs_im;
  const Quaternion im_inv = inverse(im);
  QMatrix pow_shifted = QMatrix::identity(t.size());
  Quaternion im_pow = im_inv;
  QMatrix sum(t.size());
  double tail = 1.0 / (abs_im * (1.0 - ratio));
  for (int terms = 0; terms < max_terms; ++terms) {
    sum += right_multiply(pow_shifted, im_pow);
    pow_shifted = pow_shifted * shifted;
    im_pow = im_pow * im_inv;
    tail *= ratio;
    if (tail < tol) return sum;
  }
  throw Divergent("shifted S-resolvent series did not reach the tolerance");
}

/// |S^{-1}(s,T) s - T S^{-1}(s,T) - I| in the operator norm.
inline double s_resolvent_equation_residual(const Quaternion& s, const QMatrix& t,
                                            std::optional<double> tol = std::nullopt) {
  const QMatrix r = s_resolvent(s, t, tol);
  return operator_norm(right_multiply(r, s) - t * r - QMatrix::identity(t.size()));
}

/// Q_m(s, T) = sum_{k<m} T^k s^{m-1-k}, so that S^{-1} s^m - T^m S^{-1} = Q_m.
inline QMatrix resolvent_shift_Q(int m, const Quaternion& s, const QMatrix& t) {
  if (m < 0) throw InvalidArgument("Q_m needs m >= 0");
  QMatrix out(t.size());
  QMatrix t_pow = QMatrix::identity(t.size());
  for (int k = 0; k < m; ++k) {
    out += right_multiply(t_pow, pow(s, m - 1 - k));
    t_pow = t_pow * t;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectra

struct SpectralSphere {
  double s0 = 0.0;
  double s1 = 0.0;
  int multiplicity = 0;
  double margin = 0.0;  // pencil invertibility margin at (s0, s1)

  double modulus() const noexcept { return std::hypot(s0, s1); }
};

struct SSpectrum {
  std::vector<SpectralSphere> spheres;
  double tol = 0.0;
};

/// Right-eigenvalue candidates of chi(T), each kept only if the pencil at
/// (s0, s1) is singular to within tol. Throws NumericalBreakdown if nothing
/// survives, since the S-spectrum of a matrix is never empty.
inline SSpectrum s_spectrum(const QMatrix& t, std::optional<double> tol = std::nullopt) {
  if (t.size() == 0) throw InvalidArgument("S-spectrum of an empty matrix");
  SSpectrum out;
  out.tol = tol.value_or(default_spectral_tol(t));
  for (const auto& c : right_eigen_candidates(t)) {
    const double margin = pencil_margin(t, c.s0, c.s1);
    if (margin <= out.tol) out.spheres.push_back({c.s0, c.s1, c.multiplicity, margin});
  }
  if (out.spheres.empty()) throw NumericalBreakdown("no eigen-candidate passed the pencil verification");
  return out;
}

/// (sI - T)^{-1}. Throws OnLSpectrum when sI - T is numerically singular.
inline QMatrix left_resolvent(const Quaternion& s, const QMatrix& t, std::optional<double> tol = std::nullopt) {
  const QMatrix shifted = QMatrix::scalar(t.size(), s) - t;
  const double margin = invertibility_margin(shifted);
  if (margin < tol.value_or(default_left_tol(t)) || margin == 0.0) {
    throw OnLSpectrum("s lies on the left spectrum (margin " + std::to_string(margin) + ")", margin);
  }
  return inverse(shifted, 0.0);
}

namespace detail {

inline double vector_norm(std::span<const Quaternion> v) {
  double sum = 0.0;
  for (const auto& q : v) sum += norm_squared(q);
  return std::sqrt(sum);
}

inline QVector scale_left(const Quaternion& s, std::span<const Quaternion> v) {
  QVector out(v.begin(), v.end());
  for (auto& q : out) q = s * q;
  return out;
}

}  // namespace detail

/// |T v - s v|: how far v is from being a left eigenvector for s.
inline double left_eigen_residual(const QMatrix& t, const Quaternion& s, std::span<const Quaternion> v) {
  QVector tv = matvec(t, v);
  const QVector sv = detail::scale_left(s, v);
  for (std::size_t r = 0; r < tv.size(); ++r) tv[r] -= sv[r];
  return detail::vector_norm(tv);
}

/// |(T^2 - 2 Re[s] T + |s|^2 I) v| for a left eigenvector v of T. For such v
/// this equals |(T - sI)(s v)|, so it vanishes exactly when v is also an
/// S-eigenvector.
inline double l_vs_s_transfer_check(const QMatrix& t, const Quaternion& s, std::span<const Quaternion> v) {
  return detail::vector_norm(matvec(spectral_pencil(t, s), v));
}

// ---------------------------------------------------------------------------
// Contours

/// One intersection point of a sphere with the slice plane: s0 + side * s1 I.
struct EnclosedPoint {
  std::size_t sphere = 0;
  int side = 0;  // +1, -1, or 0 for a real point
};

struct ContourCircle {
  PlaneCircle circle;
  std::vector<EnclosedPoint> enclosed;
  std::size_t cluster = 0;
};

struct Contour {
  ImaginaryUnit plane;
  double clearance = 0.0;
  std::vector<ContourCircle> circles;
  SSpectrum spectrum;
};

namespace detail {

struct PlanePoint {
  double x, y;
  EnclosedPoint id;
};

inline std::vector<PlanePoint> plane_points(const SSpectrum& spectrum, std::size_t sphere) {
  const auto& sp = spectrum.spheres[sphere];
  if (sp.s1 == 0.0) return {{sp.s0, 0.0, {sphere, 0}}};
  return {{sp.s0, sp.s1, {sphere, +1}}, {sp.s0, -sp.s1, {sphere, -1}}};
}

inline std::vector<PlanePoint> plane_points(const SSpectrum& spectrum) {
  std::vector<PlanePoint> out;
  for (std::size_t k = 0; k < spectrum.spheres.size(); ++k) {
    auto pts = plane_points(spectrum, k);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

inline double distance_to_center(const PlaneCircle& c, double x, double y) {
  return std::hypot(x - c.center_x, y - c.center_y);
}

inline bool lists_point(const ContourCircle& c, const EnclosedPoint& p) {
  return std::any_of(c.enclosed.begin(), c.enclosed.end(),
                     [&](const EnclosedPoint& e) { return e.sphere == p.sphere && e.side == p.side; });
}

inline bool geometrically_enclosed(const Contour& contour, const PlanePoint& p) {
  return std::any_of(contour.circles.begin(), contour.circles.end(), [&](const ContourCircle& c) {
    return distance_to_center(c.circle, p.x, p.y) < c.circle.radius;
  });
}

// Smallest circle around `points` of the bounding-box-center kind, padded by clearance.
inline PlaneCircle enclosing_circle(const std::vector<PlanePoint>& points, const ImaginaryUnit& plane,
                                    double clearance, std::size_t samples, bool on_real_axis) {
  double xmin = points.front().x, xmax = xmin, ymin = points.front().y, ymax = ymin;
  for (const auto& p : points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  PlaneCircle c;
  c.plane = plane;
  c.center_x = 0.5 * (xmin + xmax);
  c.center_y = on_real_axis ? 0.0 : 0.5 * (ymin + ymax);
  c.samples = samples;
  double reach = 0.0;
  for (const auto& p : points) reach = std::max(reach, distance_to_center(c, p.x, p.y));
  c.radius = reach + clearance;
  return c;
}

}  // namespace detail

/// Checks that circles are pairwise disjoint, that every listed point sits at
/// least clearance/2 inside its circle and every other spectral point at
/// least clearance/2 outside. Throws ClearanceTooLarge otherwise.
inline void validate_contour(const Contour& contour) {
  const double pad = 0.5 * contour.clearance;
  const auto points = detail::plane_points(contour.spectrum);
  for (std::size_t a = 0; a < contour.circles.size(); ++a) {
    const auto& ca = contour.circles[a];
    for (std::size_t b = a + 1; b < contour.circles.size(); ++b) {
      const auto& cb = contour.circles[b];
      const double d = std::hypot(ca.circle.center_x - cb.circle.center_x, ca.circle.center_y - cb.circle.center_y);
      if (d <= ca.circle.radius + cb.circle.radius) {
        throw ClearanceTooLarge("contour circles " + std::to_string(a) + " and " + std::to_string(b) +
                                " intersect; lower the clearance");
      }
    }
    for (const auto& p : points) {
      const double d = detail::distance_to_center(ca.circle, p.x, p.y);
      if (detail::lists_point(ca, p.id)) {
        if (d > ca.circle.radius - pad) throw ClearanceTooLarge("enclosed spectral point too close to its circle");
      } else if (d < ca.circle.radius + pad) {
        throw ClearanceTooLarge("circle " + std::to_string(a) + " reaches spectral point of sphere " +
                                std::to_string(p.id.sphere) + "; lower the clearance");
      }
    }
  }
}

/// Encloses every point of L_I cap sigma_S(T) with circles.
///
/// Spheres closer than 2 * clearance in the (s0, s1) half-plane are clustered.
/// A cluster whose conjugate halves keep apart gets two mirrored circles,
/// otherwise one circle centered on the real axis (this is how a large
/// clearance merges s0 +- s1 I). Circles of distinct clusters must not meet.
inline Contour build_contour(const SSpectrum& spectrum, const ImaginaryUnit& plane, double clearance,
                             std::size_t samples = 64) {
  if (!(clearance > 0.0)) throw InvalidArgument("clearance must be positive");
  if (spectrum.spheres.empty()) throw InvalidArgument("cannot build a contour around an empty spectrum");

  const std::size_t count = spectrum.spheres.size();
  std::vector<std::size_t> cluster_of(count, count);
  std::size_t clusters = 0;
  for (std::size_t k = 0; k < count; ++k) {
    if (cluster_of[k] != count) continue;
    cluster_of[k] = clusters;
    std::vector<std::size_t> stack{k};
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < count; ++v) {
        if (cluster_of[v] != count) continue;
        const auto& a = spectrum.spheres[u];
        const auto& b = spectrum.spheres[v];
        if (std::hypot(a.s0 - b.s0, a.s1 - b.s1) <= 2.0 * clearance) {
          cluster_of[v] = clusters;
          stack.push_back(v);
        }
      }
    }
    ++clusters;
  }

  Contour contour;
  contour.plane = plane;
  contour.clearance = clearance;
  contour.spectrum = spectrum;
  for (std::size_t cl = 0; cl < clusters; ++cl) {
    std::vector<detail::PlanePoint> upper, lower, all;
    bool has_real = false;
    for (std::size_t k = 0; k < count; ++k) {
      if (cluster_of[k] != cl) continue;
      for (const auto& p : detail::plane_points(spectrum, k)) {
        all.push_back(p);
        if (p.id.side > 0) upper.push_back(p);
        if (p.id.side < 0) lower.push_back(p);
        if (p.id.side == 0) has_real = true;
      }
    }
    auto add = [&](const PlaneCircle& circle, const std::vector<detail::PlanePoint>& pts) {
      ContourCircle cc{circle, {}, cl};
      for (const auto& p : pts) cc.enclosed.push_back(p.id);
      contour.circles.push_back(std::move(cc));
    };
    if (!has_real) {
      const PlaneCircle top = detail::enclosing_circle(upper, plane, clearance, samples, false);
      if (top.radius < top.center_y) {
        PlaneCircle bottom = top;
        bottom.center_y = -top.center_y;
        add(top, upper);
        add(bottom, lower);
        continue;
      }
    }
    add(detail::enclosing_circle(all, plane, clearance, samples, true), all);
  }
  validate_contour(contour);
  return contour;
}

/// Same circles with radii multiplied by factor; revalidated.
inline Contour scale_radii(Contour contour, double factor) {
  if (!(factor > 0.0)) throw InvalidArgument("radius factor must be positive");
  for (auto& c : contour.circles) c.circle.radius *= factor;
  validate_contour(contour);
  return contour;
}

/// The same contour moved to another slice plane.
inline Contour with_plane(Contour contour, const ImaginaryUnit& plane) {
  contour.plane = plane;
  for (auto& c : contour.circles) c.circle.plane = plane;
  return contour;
}

/// Number of clusters in a contour.
inline std::size_t cluster_count(const Contour& contour) {
  std::set<std::size_t> ids;
  for (const auto& c : contour.circles) ids.insert(c.cluster);
  return ids.size();
}

/// Sphere indices enclosed by a cluster, sorted.
inline std::vector<std::size_t> cluster_spheres(const Contour& contour, std::size_t cluster) {
  std::set<std::size_t> ids;
  for (const auto& c : contour.circles)
    if (c.cluster == cluster)
      for (const auto& e : c.enclosed) ids.insert(e.sphere);
  return {ids.begin(), ids.end()};
}

/// Sub-contour made of the circles around the selected spheres. A circle that
/// also encloses an unselected sphere makes the selection impossible at this
/// clearance and raises InvalidArgument.
inline Contour select_spheres(const Contour& contour, const std::vector<std::size_t>& spheres) {
  const std::set<std::size_t> wanted(spheres.begin(), spheres.end());
  for (std::size_t k : wanted) {
    if (k >= contour.spectrum.spheres.size()) throw InvalidArgument("sphere index " + std::to_string(k) + " out of range");
  }
  Contour out = contour;
  out.circles.clear();
  for (const auto& c : contour.circles) {
    std::size_t hits = 0;
    for (const auto& e : c.enclosed) hits += wanted.count(e.sphere);
    if (hits == 0) continue;
    if (hits != c.enclosed.size()) {
      throw InvalidArgument("a contour circle encloses both selected and unselected spheres; lower the clearance");
    }
    out.circles.push_back(c);
  }
  return out;
}

/// Throws ContourLeak if some point of L_I cap sigma_S(T) lies outside every circle.
inline void check_no_leak(const Contour& contour) {
  for (const auto& p : detail::plane_points(contour.spectrum)) {
    if (!detail::geometrically_enclosed(contour, p)) {
      throw ContourLeak("spectral point of sphere " + std::to_string(p.id.sphere) + " is not enclosed");
    }
  }
}

/// Throws SphereSplit if a sphere has one of s0 +- s1 I enclosed but not the other.
inline void check_no_split(const Contour& contour) {
  const auto& spheres = contour.spectrum.spheres;
  for (std::size_t k = 0; k < spheres.size(); ++k) {
    if (spheres[k].s1 == 0.0) continue;
    const auto pts = detail::plane_points(contour.spectrum, k);
    if (detail::geometrically_enclosed(contour, pts[0]) != detail::geometrically_enclosed(contour, pts[1])) {
      throw SphereSplit("contour encloses only one of the conjugate points of sphere " + std::to_string(k));
    }
  }
}

// ---------------------------------------------------------------------------
// Functional calculus

struct CalculusResult {
  QMatrix value;
  std::vector<std::size_t> nodes;  // trapezoidal nodes used per circle
};

/// (1/2pi) integral over the contour of S^{-1}(s,T) ds_I w(s). At the node
/// s = c + r e^{I theta} the integrand is S^{-1}(s,T) (r e^{I theta}) w(s).
/// Circles are processed in order, each with adaptive node doubling.
template <SliceFunction W>
CalculusResult integrate_resolvent(const QMatrix& t, const Contour& contour, const W& weight,
                                   const QuadratureOptions& options = {}) {
  const SResolventKernel kernel(t);
  CalculusResult out{QMatrix(t.size()), {}};
  for (const auto& cc : contour.circles) {
    const PlaneCircle& circle = cc.circle;
    auto integrand = [&](double theta) {
      const Quaternion offset = circle.offset(theta);
      const Quaternion s = circle.center() + offset;
      return right_multiply(kernel(s), offset * Quaternion(weight(s)));
    };
    QuadratureOptions local = options;
    local.initial_nodes = std::min(std::max<std::size_t>(circle.samples, 1), options.max_nodes);
    auto res = adaptive_periodic_mean<QMatrix>(integrand, [](const QMatrix& m) { return frobenius_norm(m); }, local);
    out.value += res.value;
    out.nodes.push_back(res.nodes);
  }
  return out;
}

/// f(T) by contour integration. The contour must enclose the whole plane
/// section of the spectrum (ContourLeak) and stay inside the ball where f
/// converges (OutOfDomain).
inline CalculusResult apply_function(const PowerSeriesFunction& f, const QMatrix& t, const Contour& contour,
                                     const QuadratureOptions& options = {}) {
  check_no_leak(contour);
  for (const auto& cc : contour.circles) {
    const double extent = std::hypot(cc.circle.center_x, cc.circle.center_y) + cc.circle.radius;
    if (!(extent < f.radius)) {
      throw OutOfDomain("contour reaches |s| = " + std::to_string(extent) + " beyond the series radius " +
                        std::to_string(f.radius));
    }
  }
  return integrate_resolvent(t, contour, f, options);
}

struct RieszProjection {
  QMatrix projector;
  std::vector<QMatrix> moments;  // moments[m] = (1/2pi) integral S^{-1} ds_I s^m
  std::vector<std::size_t> nodes;
};

/// P = (1/2pi) integral S^{-1}(s,T) ds_I over a part of the contour, plus the
/// moments T^m P for m = 0..max_moment. Rejects contours that cut a sphere.
inline RieszProjection riesz_projector(const QMatrix& t, const Contour& part, int max_moment = 3,
                                       const QuadratureOptions& options = {}) {
  if (max_moment < 1) throw InvalidArgument("need at least the first moment");
  if (part.circles.empty()) throw InvalidArgument("projector contour has no circles");
  check_no_split(part);
  RieszProjection out;
  for (int m = 0; m <= max_moment; ++m) {
    auto res = integrate_resolvent(t, part, [m](const Quaternion& s) { return pow(s, m); }, options);
    if (m == 0) {
      out.projector = res.value;
      out.nodes = res.nodes;
    }
    out.moments.push_back(std::move(res.value));
  }
  return out;
}

struct AlgebraResiduals {
  double add_residual = 0.0;
  double prod_residual = 0.0;
};

/// |(phi + psi)(T) - phi(T) - psi(T)| and |(phi psi)(T) - phi(T) psi(T)|.
/// Multiplicativity is only claimed for real coefficients; anything else
/// raises NonRealCoefficients.
inline AlgebraResiduals calculus_algebra_check(const PowerSeriesFunction& phi, const PowerSeriesFunction& psi,
                                               const QMatrix& t, const Contour& contour,
                                               const QuadratureOptions& options = {}) {
  const QMatrix phi_t = apply_function(phi, t, contour, options).value;
  const QMatrix psi_t = apply_function(psi, t, contour, options).value;
  const QMatrix sum_t = apply_function(sum(phi, psi), t, contour, options).value;
  const QMatrix prod_t = apply_function(product_real(phi, psi), t, contour, options).value;
  return {operator_norm(sum_t - phi_t - psi_t), operator_norm(prod_t - phi_t * psi_t)};
}

/// |(phi * psi)(T) - phi(T) psi(T)| with the coefficient-wise Cauchy product,
/// for arbitrary quaternionic coefficients. Reported, not asserted: nothing
/// guarantees it vanishes.
inline double quaternionic_product_residual(const PowerSeriesFunction& phi, const PowerSeriesFunction& psi,
                                            const QMatrix& t, const Contour& contour,
                                            const QuadratureOptions& options = {}) {
  if (phi.coefficients.empty() || psi.coefficients.empty()) throw InvalidArgument("empty series");
  PowerSeriesFunction prod;
  prod.coefficients.resize(phi.coefficients.size() + psi.coefficients.size() - 1);
  for (std::size_t a = 0; a < phi.coefficients.size(); ++a)
    for (std::size_t b = 0; b < psi.coefficients.size(); ++b)
      prod.coefficients[a + b] += phi.coefficients[a] * psi.coefficients[b];
  prod.radius = std::min(phi.radius, psi.radius);
  const QMatrix phi_t = apply_function(phi, t, contour, options).value;
  const QMatrix psi_t = apply_function(psi, t, contour, options).value;
  const QMatrix prod_t = apply_function(prod, t, contour, options).value;
  return operator_norm(prod_t - phi_t * psi_t);
}

}  // namespace qspec
