#pragma once

// Complex vectors, rays, pure-state projectors, the latitude (Poincare
// sphere) parametrization of two-dimensional subspaces, and phase utilities.
//
// Basis indices in the public API are 1-based, matching reports; storage is
// 0-based.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "wigner/config.hpp"
#include "wigner/error.hpp"

namespace wigner {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Maps an angle to [0, 2pi).
inline double wrap_two_pi(double a) {
  double r = std::fmod(a, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

/// Maps an angle to (-pi, pi].
inline double wrap_pi(double a) {
  double r = wrap_two_pi(a);
  if (r > pi) r -= two_pi;
  return r;
}

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// ||U^dag U - I||_max
inline double unitarity_defect(const Matrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

inline void require_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols())
    throw Error(ErrorKind::NotUnitary, "matrix is not square");
  const double defect = unitarity_defect(u);
  if (!(defect <= tol))
    throw Error(ErrorKind::NotUnitary,
                "||U^dag U - I|| = " + std::to_string(defect), {}, defect);
}

/// Unit-norm vector; a representative of a ray.
class UnitVector {
 public:
  explicit UnitVector(Vector v, const Tolerances& tol = default_tolerances)
      : v_(std::move(v)) {
    if (v_.size() == 0)
      throw Error(ErrorKind::NonUnitInput, "empty vector");
    const double dev = std::abs(v_.squaredNorm() - 1.0);
    if (!(dev <= tol.norm))
      throw Error(ErrorKind::NonUnitInput,
                  "| |psi|^2 - 1 | = " + std::to_string(dev), {}, dev);
  }

  /// Rescales to unit norm instead of validating.
  static UnitVector normalized(const Vector& v) {
    UnitVector u;
    u.v_ = v / v.norm();
    return u;
  }

  static UnitVector basis(int dim, int n) {
    if (n < 1 || n > dim)
      throw Error(ErrorKind::IndexOutOfRange, "basis index", {n});
    UnitVector u;
    u.v_ = Vector::Zero(dim);
    u.v_(n - 1) = 1.0;
    return u;
  }

  int dim() const { return static_cast<int>(v_.size()); }
  const Vector& vec() const { return v_; }
  /// 1-based component access.
  Complex operator()(int n) const { return v_(n - 1); }

 private:
  UnitVector() = default;
  Vector v_;
};

/// Purity measure used throughout: |1 - Tr(M^2)|.
inline double purity_violation(const Matrix& m) {
  const Complex tr2 = m.cwiseProduct(m.transpose()).sum();
  return std::abs(1.0 - tr2.real());
}

/// Tr(A B) without any validation of A, B.
inline Complex trace_product(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

/// Hermitian, unit-trace, rank-1 matrix: an element of ray space.
class PureProjector {
 public:
  explicit PureProjector(Matrix m, const Tolerances& tol = default_tolerances)
      : m_(std::move(m)) {
    validate(m_, tol);
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

  /// Throws DimensionMismatch / ImpureInput when m is not a pure state.
  static void validate(const Matrix& m, const Tolerances& tol) {
    if (m.rows() != m.cols() || m.rows() == 0)
      throw Error(ErrorKind::DimensionMismatch, "projector must be square");
    const double herm = max_abs(m - m.adjoint());
    if (!(herm <= tol.herm))
      throw Error(ErrorKind::ImpureInput,
                  "not Hermitian, ||M - M^dag|| = " + std::to_string(herm), {},
                  herm);
    const double tr = std::abs(m.trace() - Complex(1.0));
    if (!(tr <= tol.herm))
      throw Error(ErrorKind::ImpureInput,
                  "trace deviates from 1 by " + std::to_string(tr), {}, tr);
    const double pv = purity_violation(m);
    if (!(pv <= tol.purity))
      throw Error(ErrorKind::ImpureInput,
                  "|1 - Tr(M^2)| = " + std::to_string(pv), {}, pv);
  }

 private:
  friend PureProjector projector(const UnitVector&);
  struct Trusted {};
  PureProjector(Matrix m, Trusted) : m_(std::move(m)) {}
  Matrix m_;
};

/// |psi><psi|; independent of the global phase of psi.
inline PureProjector projector(const UnitVector& psi) {
  return PureProjector(psi.vec() * psi.vec().adjoint(), PureProjector::Trusted{});
}

/// Tr(rho1 rho2) = |<psi1|psi2>|^2.
inline double transition_probability(const PureProjector& a,
                                     const PureProjector& b,
                                     const Tolerances& tol = default_tolerances) {
  if (a.dim() != b.dim())
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  const Complex t = trace_product(a.matrix(), b.matrix());
  if (!(std::abs(t.imag()) <= tol.herm))
    throw Error(ErrorKind::ImpureInput, "complex transition probability", {},
                std::abs(t.imag()));
  return t.real();
}

/// Multiplies v by the phase that makes its first component of modulus
/// above gauge_eps real and positive.
inline Vector gauge_fixed(Vector v, double gauge_eps = default_tolerances.gauge_eps) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > gauge_eps) {
      v *= std::conj(v(i)) / mag;
      v(i) = mag;
      break;
    }
  }
  return v;
}

/// Inverse of the projection onto ray space, with the gauge of gauge_fixed.
///
/// Accepts an arbitrary matrix so that oracle outputs can be checked here:
/// anything that is not a pure state raises ImpureInput, with the purity
/// violation |1 - Tr(M^2)| as the measured value when that is the cause.
/// The factor is read from the column of largest norm and must reproduce M to
/// within tol.purity.
inline UnitVector ray_from_projector(const Matrix& m,
                                     const Tolerances& tol = default_tolerances) {
  PureProjector::validate(m, tol);

  Eigen::Index col = 0;
  m.diagonal().real().maxCoeff(&col);
  const double pivot = m(col, col).real();
  Vector v = m.col(col) / std::sqrt(pivot);
  v /= v.norm();
  v = gauge_fixed(std::move(v), tol.gauge_eps);

  const double residual = max_abs(m - v * v.adjoint());
  if (!(residual <= tol.purity))
    throw Error(ErrorKind::ImpureInput,
                "rank-1 factorization residual " + std::to_string(residual), {},
                residual);
  return UnitVector::normalized(v);
}

inline UnitVector ray_from_projector(const PureProjector& rho,
                                     const Tolerances& tol = default_tolerances) {
  return ray_from_projector(rho.matrix(), tol);
}

/// Point |theta; phi>_jk on the latitude sphere of the (j, k) subspace.
struct LatitudeCoords {
  int j = 1;
  int k = 2;
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2pi)
};

/// cos(theta/2)|j> + sin(theta/2) e^{i phi}|k>, embedded in dimension dim.
inline UnitVector latitude_state(const LatitudeCoords& c, int dim) {
  if (c.j < 1 || c.k <= c.j || c.k > dim)
    throw Error(ErrorKind::IndexOutOfRange,
                "need 1 <= j < k <= " + std::to_string(dim), {c.j, c.k});
  Vector v = Vector::Zero(dim);
  v(c.j - 1) = std::cos(c.theta / 2.0);
  v(c.k - 1) = std::sin(c.theta / 2.0) * std::polar(1.0, c.phi);
  return UnitVector::normalized(v);
}

/// arg(c_k) - arg(c_j) in [0, 2pi).
inline double relative_phase(const Vector& psi, int j, int k,
                             const Tolerances& tol = default_tolerances) {
  const int n = static_cast<int>(psi.size());
  if (j < 1 || k < 1 || j > n || k > n)
    throw Error(ErrorKind::IndexOutOfRange, "relative_phase index", {j, k});
  const Complex cj = psi(j - 1);
  const Complex ck = psi(k - 1);
  if (!(std::abs(cj) > tol.gauge_eps) || !(std::abs(ck) > tol.gauge_eps))
    throw Error(ErrorKind::VanishingComponent,
                "component too small for a phase readout", {j, k},
                std::min(std::abs(cj), std::abs(ck)));
  return wrap_two_pi(std::arg(ck * std::conj(cj)));
}

inline double relative_phase(const UnitVector& psi, int j, int k,
                             const Tolerances& tol = default_tolerances) {
  return relative_phase(psi.vec(), j, k, tol);
}

/// Point on the unit sphere; |1> sits at +z.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  Eigen::Vector3d vec() const { return {x, y, z}; }
};

/// Reads n with rho = (1 + n.sigma) / 2.
inline BlochVector bloch_vector(const PureProjector& rho) {
  if (rho.dim() != 2)
    throw Error(ErrorKind::DimensionMismatch, "Bloch vector needs dim 2");
  const Matrix& m = rho.matrix();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(),
          (m(0, 0) - m(1, 1)).real()};
}

inline PureProjector bloch_to_projector(const BlochVector& n,
                                        const Tolerances& tol = default_tolerances) {
  const double len2 = n.x * n.x + n.y * n.y + n.z * n.z;
  if (!(std::abs(len2 - 1.0) <= tol.norm))
    throw Error(ErrorKind::NonUnitInput, "Bloch vector must have unit length",
                {}, std::abs(len2 - 1.0));
  Matrix m(2, 2);
  m(0, 0) = 0.5 * (1.0 + n.z);
  m(1, 1) = 0.5 * (1.0 - n.z);
  m(0, 1) = Complex(0.5 * n.x, -0.5 * n.y);
  m(1, 0) = Complex(0.5 * n.x, 0.5 * n.y);
  return PureProjector(std::move(m), tol);
}

/// Modulus of <a|b>; 1 when a and b represent the same ray.
inline double ray_overlap(const Vector& a, const Vector& b) {
  return std::abs(a.dot(b));
}

}  // namespace wigner
