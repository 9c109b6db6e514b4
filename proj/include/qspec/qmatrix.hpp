#pragma once

/**
 * @file qmatrix.hpp
 * @brief Dense square quaternionic matrices acting on column vectors.
 *
 * A QMatrix T acts on v in H^n by (Tv)_r = sum_c T(r,c) v_c. That action is
 * right linear: T(v s) = T(v) s. A quaternion s used "as an operator" is the
 * diagonal matrix sI, so T * (sI) multiplies entries of T on the right and
 * (sI) * T multiplies them on the left; see right_multiply / left_multiply.
 *
 * Inversion, norms and eigenvalues go through the complex adjoint
 *
 *     chi(A) = [ A1        A2      ]      A = A1 + A2 j,
 *              [ -conj(A2) conj(A1)]      A1, A2 with entries in C = L_i,
 *
 * which is an injective unital algebra homomorphism into 2n x 2n complex
 * matrices that preserves singular values.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qspec/errors.hpp"
#include "qspec/quaternion.hpp"

namespace qspec {

using Complex = std::complex<double>;
using ComplexAdjoint = Eigen::MatrixXcd;
using QVector = std::vector<Quaternion>;

class QMatrix {
 public:
  QMatrix() = default;

  /// n x n zero matrix.
  explicit QMatrix(std::size_t n) : n_(n), data_(n * n) {}

  /// Row-major nested initializer, e.g. {{0, i}, {-i, 0}}.
  QMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows) : n_(rows.size()), data_() {
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw DimensionMismatch("QMatrix rows must all have length n");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static QMatrix zero(std::size_t n) { return QMatrix(n); }

  static QMatrix identity(std::size_t n) {
    QMatrix m(n);
    for (std::size_t r = 0; r < n; ++r) m(r, r) = 1.0;
    return m;
  }

  static QMatrix diagonal(std::span<const Quaternion> d) {
    QMatrix m(d.size());
    for (std::size_t r = 0; r < d.size(); ++r) m(r, r) = d[r];
    return m;
  }

  static QMatrix diagonal(std::initializer_list<Quaternion> d) {
    return diagonal(std::span<const Quaternion>(d.begin(), d.size()));
  }

  /// s * identity, the operator v -> s v.
  static QMatrix scalar(std::size_t n, const Quaternion& s) {
    QMatrix m(n);
    for (std::size_t r = 0; r < n; ++r) m(r, r) = s;
    return m;
  }

  /// Takes ownership of n*n row-major entries.
  static QMatrix from_row_major(std::size_t n, std::vector<Quaternion> entries) {
    if (entries.size() != n * n) throw DimensionMismatch("expected n*n entries");
    QMatrix m;
    m.n_ = n;
    m.data_ = std::move(entries);
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  Quaternion& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * n_ + c]; }
  const Quaternion& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * n_ + c]; }

  std::span<const Quaternion> entries() const noexcept { return data_; }

  QMatrix& operator+=(const QMatrix& o) {
    check_same_size(o);
    for (std::size_t t = 0; t < data_.size(); ++t) data_[t] += o.data_[t];
    return *this;
  }

  QMatrix& operator-=(const QMatrix& o) {
    check_same_size(o);
    for (std::size_t t = 0; t < data_.size(); ++t) data_[t] -= o.data_[t];
    return *this;
  }

  QMatrix& operator*=(double s) noexcept {
    for (auto& q : data_) q *= s;
    return *this;
  }

  void check_same_size(const QMatrix& o) const {
    if (o.n_ != n_) {
      throw DimensionMismatch("matrix sizes differ: " + std::to_string(n_) + " vs " + std::to_string(o.n_));
    }
  }

 private:
  std::size_t n_ = 0;
  std::vector<Quaternion> data_;
};

inline QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
inline QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
inline QMatrix operator-(QMatrix a) { return a *= -1.0; }
inline QMatrix operator*(QMatrix a, double s) { return a *= s; }
inline QMatrix operator*(double s, QMatrix a) { return a *= s; }

/// Matrix product; entries of the left factor multiply from the left.
inline QMatrix matmul(const QMatrix& a, const QMatrix& b) {
  a.check_same_size(b);
  const std::size_t n = a.size();
  QMatrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t t = 0; t < n; ++t) {
      const Quaternion art = a(r, t);
      for (std::size_t c = 0; c < n; ++c) out(r, c) += art * b(t, c);
    }
  }
  return out;
}

inline QMatrix operator*(const QMatrix& a, const QMatrix& b) { return matmul(a, b); }

inline QVector matvec(const QMatrix& a, std::span<const Quaternion> v) {
  if (v.size() != a.size()) throw DimensionMismatch("matvec: vector length differs from matrix size");
  QVector out(a.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t c = 0; c < a.size(); ++c) out[r] += a(r, c) * v[c];
  }
  return out;
}

/// A * (sI): every entry multiplied by s on the right.
inline QMatrix right_multiply(QMatrix a, const Quaternion& s) {
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < a.size(); ++c) a(r, c) = a(r, c) * s;
  return a;
}

/// (sI) * A: every entry multiplied by s on the left.
inline QMatrix left_multiply(const Quaternion& s, QMatrix a) {
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < a.size(); ++c) a(r, c) = s * a(r, c);
  return a;
}

/// sqrt of the sum of |entry|^2; cheap stand-in for the operator norm.
inline double frobenius_norm(const QMatrix& a) noexcept {
  double sum = 0.0;
  for (const auto& q : a.entries()) sum += norm_squared(q);
  return std::sqrt(sum);
}

inline QMatrix matrix_power(const QMatrix& a, int m) {
  if (m < 0) throw InvalidArgument("matrix_power needs m >= 0");
  QMatrix out = QMatrix::identity(a.size());
  for (int t = 0; t < m; ++t) out = out * a;
  return out;
}

// ---------------------------------------------------------------------------
// Complex adjoint.

inline ComplexAdjoint complex_adjoint(const QMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  ComplexAdjoint m(2 * n, 2 * n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const Quaternion& q = a(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      const Complex a1(q.w, q.x);
      const Complex a2(q.y, q.z);
      m(r, c) = a1;
      m(r, c + n) = a2;
      m(r + n, c) = -std::conj(a2);
      m(r + n, c + n) = std::conj(a1);
    }
  }
  return m;
}

namespace detail {

// Reads A1 and A2 back, averaging the two redundant copies of each block.
inline QMatrix extract_from_adjoint(const ComplexAdjoint& m) {
  const Eigen::Index n = m.rows() / 2;
  QMatrix a(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const Complex a1 = 0.5 * (m(r, c) + std::conj(m(r + n, c + n)));
      const Complex a2 = 0.5 * (m(r, c + n) - std::conj(m(r + n, c)));
      a(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = {a1.real(), a1.imag(), a2.real(), a2.imag()};
    }
  }
  return a;
}

inline Eigen::VectorXd singular_values(const QMatrix& a) {
  if (a.size() == 0) return Eigen::VectorXd();
  Eigen::BDCSVD<ComplexAdjoint> svd(complex_adjoint(a));
  return svd.singularValues();
}

}  // namespace detail

/// Inverse of complex_adjoint. Throws SymmetryViolation if M lacks the block
/// structure (entrywise mismatch above tol * max(1, max |M_ij|)).
inline QMatrix from_complex_adjoint(const ComplexAdjoint& m, double tol = 1e-10) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw SymmetryViolation("complex adjoint must be square of even size");
  }
  const Eigen::Index n = m.rows() / 2;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const double d1 = std::abs(m(r, c) - std::conj(m(r + n, c + n)));
      const double d2 = std::abs(m(r, c + n) + std::conj(m(r + n, c)));
      if (d1 > tol * scale || d2 > tol * scale) {
        throw SymmetryViolation("block structure of the complex adjoint violated at (" + std::to_string(r) + ", " +
                                std::to_string(c) + ")");
      }
    }
  }
  return detail::extract_from_adjoint(m);
}

/// Largest singular value of chi(A): the operator norm for the Euclidean norm on H^n.
inline double operator_norm(const QMatrix& a) {
  const auto sv = detail::singular_values(a);
  return sv.size() == 0 ? 0.0 : sv(0);
}

/// Smallest singular value of chi(A); zero up to rounding iff A is singular.
inline double invertibility_margin(const QMatrix& a) {
  const auto sv = detail::singular_values(a);
  return sv.size() == 0 ? 0.0 : sv(sv.size() - 1);
}

/// Two-sided inverse via pivoted LU of chi(A). Throws Singular when
/// sigma_min(chi(A)) < rcond * sigma_max(chi(A)).
inline QMatrix inverse(const QMatrix& a, double rcond = 1e-13) {
  const ComplexAdjoint chi = complex_adjoint(a);
  const auto sv = Eigen::BDCSVD<ComplexAdjoint>(chi).singularValues();
  if (sv.size() == 0 || !(sv(sv.size() - 1) >= rcond * sv(0)) || sv(0) == 0.0) {
    throw Singular("matrix is numerically singular");
  }
  return detail::extract_from_adjoint(chi.partialPivLu().inverse());
}

/// One spectral sphere s0 + s1*S (s1 >= 0) with its multiplicity.
struct SphereCandidate {
  double s0 = 0.0;
  double s1 = 0.0;
  int multiplicity = 0;
};

/// Eigenvalues of chi(A) folded to (Re, |Im|) and clustered within dedup_tol.
///
/// chi(A) is similar to its complex conjugate, so its eigenvalues come in
/// conjugate pairs; every sphere therefore collects an even count and the
/// multiplicity is half of it. Multiplicities sum to n.
inline std::vector<SphereCandidate> right_eigen_candidates(const QMatrix& a, double dedup_tol = 1e-8) {
  if (a.size() == 0) return {};
  Eigen::ComplexEigenSolver<ComplexAdjoint> solver(complex_adjoint(a), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalBreakdown("complex eigen-solver did not converge");

  struct Folded {
    double s0, s1;
  };
  std::vector<Folded> folded;
  for (Eigen::Index t = 0; t < solver.eigenvalues().size(); ++t) {
    const Complex lambda = solver.eigenvalues()(t);
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
      throw NumericalBreakdown("eigen-solver returned a non-finite eigenvalue");
    }
    folded.push_back({lambda.real(), std::abs(lambda.imag())});
  }
  std::sort(folded.begin(), folded.end(), [](const Folded& l, const Folded& r) {
    return l.s0 != r.s0 ? l.s0 < r.s0 : l.s1 < r.s1;
  });

  // Single-linkage clustering in the (s0, s1) half-plane.
  std::vector<int> cluster(folded.size(), -1);
  int clusters = 0;
  for (std::size_t t = 0; t < folded.size(); ++t) {
    if (cluster[t] >= 0) continue;
    cluster[t] = clusters;
    std::vector<std::size_t> stack{t};
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < folded.size(); ++v) {
        if (cluster[v] >= 0) continue;
        if (std::hypot(folded[u].s0 - folded[v].s0, folded[u].s1 - folded[v].s1) <= dedup_tol) {
          cluster[v] = clusters;
          stack.push_back(v);
        }
      }
    }
    ++clusters;
  }

  std::vector<SphereCandidate> out;
  for (int c = 0; c < clusters; ++c) {
    double s0 = 0.0, s1 = 0.0;
    int count = 0;
    for (std::size_t t = 0; t < folded.size(); ++t) {
      if (cluster[t] != c) continue;
      s0 += folded[t].s0;
      s1 += folded[t].s1;
      ++count;
    }
    s0 /= count;
    s1 /= count;
    if (s1 <= dedup_tol) s1 = 0.0;
    out.push_back({s0, s1, (count + 1) / 2});
  }
  return out;
}

}  // namespace qspec
