#pragma once

/**
 * @file quaternion.hpp
 * @brief Real quaternions q = w + xi + yj + zk and their slice decomposition.
 *
 * Every quaternion lies on some complex line L_I = R + I R with I a purely
 * imaginary unit quaternion. Two quaternions on a common L_I commute, which
 * is what makes the slice machinery work.
 *
 * No equality operator is provided on purpose; compare with distance().
 */

#include <cmath>
#include <ostream>

#include "qspec/errors.hpp"

namespace qspec {

struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() noexcept = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_) noexcept
      : w(w_), x(x_), y(y_), z(z_) {}
  // Real quaternions are used as scalars all over the place.
  constexpr Quaternion(double real) noexcept : w(real) {}  // NOLINT

  static constexpr Quaternion i() noexcept { return {0, 1, 0, 0}; }
  static constexpr Quaternion j() noexcept { return {0, 0, 1, 0}; }
  static constexpr Quaternion k() noexcept { return {0, 0, 0, 1}; }

  constexpr double real() const noexcept { return w; }
  constexpr Quaternion imag() const noexcept { return {0, x, y, z}; }

  constexpr Quaternion& operator+=(const Quaternion& o) noexcept {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) noexcept {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) noexcept {
    w *= s; x *= s; y *= s; z *= s;
    return *this;
  }
  constexpr Quaternion& operator/=(double s) noexcept {
    w /= s; x /= s; y /= s; z /= s;
    return *this;
  }
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) noexcept { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) noexcept { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) noexcept { return {-a.w, -a.x, -a.y, -a.z}; }
constexpr Quaternion operator*(Quaternion a, double s) noexcept { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) noexcept { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) noexcept { return a /= s; }

/// Hamilton product: i^2 = j^2 = k^2 = -1, ij = -ji = k, jk = -kj = i, ki = -ik = j.
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) noexcept {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

constexpr Quaternion multiply(const Quaternion& a, const Quaternion& b) noexcept { return a * b; }

constexpr Quaternion conjugate(const Quaternion& q) noexcept { return {q.w, -q.x, -q.y, -q.z}; }

constexpr double norm_squared(const Quaternion& q) noexcept {
  return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
}

inline double norm(const Quaternion& q) noexcept { return std::hypot(std::hypot(q.w, q.x), std::hypot(q.y, q.z)); }

inline double imag_norm(const Quaternion& q) noexcept { return std::hypot(std::hypot(q.x, q.y), q.z); }

inline double distance(const Quaternion& a, const Quaternion& b) noexcept { return norm(a - b); }

/// conj(q) / |q|^2. Throws ZeroDivision for q = 0.
inline Quaternion inverse(const Quaternion& q) {
  const double n2 = norm_squared(q);
  if (n2 == 0.0) throw ZeroDivision("inverse of the zero quaternion");
  return conjugate(q) / n2;
}

/// Integer power by repeated squaring; negative exponents go through inverse().
inline Quaternion pow(Quaternion q, int n) {
  if (n < 0) return pow(inverse(q), -n);
  Quaternion result{1.0};
  while (n > 0) {
    if (n & 1) result = result * q;
    q = q * q;
    n >>= 1;
  }
  return result;
}

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.w << ", " << q.x << "i, " << q.y << "j, " << q.z << "k)";
}

/// An element I of the unit sphere of purely imaginary quaternions, I^2 = -1.
class ImaginaryUnit {
 public:
  constexpr ImaginaryUnit() noexcept = default;

  /// Normalizes (x, y, z). Throws InvalidArgument for the zero vector.
  static ImaginaryUnit from_vector(double x, double y, double z) {
    const double n = std::hypot(std::hypot(x, y), z);
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("imaginary unit needs a nonzero finite direction");
    return ImaginaryUnit(x / n, y / n, z / n);
  }

  static constexpr ImaginaryUnit i() noexcept { return {1, 0, 0}; }
  static constexpr ImaginaryUnit j() noexcept { return {0, 1, 0}; }
  static constexpr ImaginaryUnit k() noexcept { return {0, 0, 1}; }

  constexpr double x() const noexcept { return x_; }
  constexpr double y() const noexcept { return y_; }
  constexpr double z() const noexcept { return z_; }

  constexpr Quaternion as_quaternion() const noexcept { return {0, x_, y_, z_}; }

 private:
  constexpr ImaginaryUnit(double x, double y, double z) noexcept : x_(x), y_(y), z_(z) {}

  double x_ = 1.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

/// x + y I, a point of the slice plane L_I.
constexpr Quaternion embed_in_plane(double x, double y, const ImaginaryUnit& unit) noexcept {
  return {x, y * unit.x(), y * unit.y(), y * unit.z()};
}

/// cos(theta) + I sin(theta).
inline Quaternion unit_exp(double theta, const ImaginaryUnit& unit) noexcept {
  return embed_in_plane(std::cos(theta), std::sin(theta), unit);
}

/// q = s0 + s1 * unit with s1 = |Im q| >= 0.
struct SlicePoint {
  double s0 = 0.0;
  double s1 = 0.0;
  ImaginaryUnit unit;

  constexpr Quaternion embed() const noexcept { return embed_in_plane(s0, s1, unit); }
};

/// Splits q into real part, imaginary modulus and imaginary direction.
/// Imaginary parts below 1e-14 |q| are treated as zero and get the unit i.
inline SlicePoint slice_decompose(const Quaternion& q) {
  const double s1 = imag_norm(q);
  if (s1 == 0.0 || s1 <= 1e-14 * norm(q)) return {q.w, 0.0, ImaginaryUnit::i()};
  return {q.w, s1, ImaginaryUnit::from_vector(q.x, q.y, q.z)};
}

}  // namespace qspec
