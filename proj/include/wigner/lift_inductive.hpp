#pragma once

// Reconstruction by induction on the dimension. A qubit symmetry is an
// orthogonal map of the Bloch sphere: a rotation (unitary lift) or a
// rotation times a mirror (antiunitary lift). After basis alignment the
// lift on span{|1>..|m>} is extended to span{|1>..|m+1>} by reading a single
// relative phase.
//
// Oracle calls made by reconstruct_inductive:
//   N (alignment) + 3 (Bloch axes) + 1 (qubit dense check)
//   + 2 (N - 2) (probe and dense check per extension) + n_verify.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "wigner/config.hpp"
#include "wigner/error.hpp"
#include "wigner/lift_common.hpp"
#include "wigner/linalg.hpp"
#include "wigner/symmetry.hpp"

namespace wigner {

/// Bloch-sphere action of complex conjugation: the mirror y -> -y.
inline Eigen::Matrix3d conjugation_mirror() {
  return Eigen::Vector3d(1.0, -1.0, 1.0).asDiagonal();
}

/// Columns are the images of the x, y, z axes.
inline OrthogonalAction bloch_action(const RaySymmetryOracle& oracle,
                                     const Tolerances& tol = default_tolerances) {
  if (oracle.dim() != 2)
    throw Error(ErrorKind::DimensionMismatch, "bloch_action needs a qubit oracle");
  OrthogonalAction action;
  for (int axis = 0; axis < 3; ++axis) {
    BlochVector e{axis == 0 ? 1.0 : 0.0, axis == 1 ? 1.0 : 0.0,
                  axis == 2 ? 1.0 : 0.0};
    const PureProjector out(oracle.apply(bloch_to_projector(e, tol)), tol);
    action.r.col(axis) = bloch_vector(out).vec();
  }
  const double defect =
      (action.r.transpose() * action.r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  const double det = action.r.determinant();
  if (!(defect <= tol.unitary) || !(std::abs(std::abs(det) - 1.0) <= tol.unitary))
    throw Error(ErrorKind::NotOrthogonal,
                "Bloch action is not orthogonal, ||R^T R - I|| = " +
                    std::to_string(defect),
                {}, defect);
  action.det_sign = det > 0 ? 1 : -1;
  return action;
}

/// exp(-i theta/2 n.sigma) for the rotation R by theta about n. The sign is
/// chosen so the first entry of modulus above gauge_eps has its phase in
/// (-pi/2, pi/2].
inline Matrix rotation_to_su2(const Eigen::Matrix3d& r,
                              const Tolerances& tol = default_tolerances) {
  const double defect =
      (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  const double det = r.determinant();
  if (!(defect <= tol.unitary) || !(std::abs(det - 1.0) <= tol.unitary))
    throw Error(ErrorKind::NotProperRotation,
                "not a proper rotation, det = " + std::to_string(det), {}, det);

  Eigen::Quaterniond q(r);
  q.normalize();
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  Matrix u(2, 2);
  u(0, 0) = Complex(w, -z);
  u(0, 1) = Complex(-y, -x);
  u(1, 0) = Complex(y, -x);
  u(1, 1) = Complex(w, z);

  for (Eigen::Index i = 0; i < 4; ++i) {
    const Complex c = u(i / 2, i % 2);
    if (std::abs(c) > tol.gauge_eps) {
      if (c.real() < 0.0 || (c.real() == 0.0 && c.imag() < 0.0)) u = -u;
      break;
    }
  }
  return u;
}

namespace detail {

/// Deterministic vector with every one of its m components nonzero and
/// genuinely complex, used to check a block lift.
inline Vector dense_vector(int m, int n) {
  constexpr double golden_angle = 2.399963229728653;
  Vector v = Vector::Zero(n);
  for (int i = 0; i < m; ++i)
    v(i) = (1.0 + 0.5 * std::sin(1.0 + i)) * std::polar(1.0, golden_angle * (i + 1));
  return v / v.norm();
}

inline Matrix block_diag(const Matrix& a, Complex corner) {
  const Eigen::Index m = a.rows();
  Matrix out = Matrix::Zero(m + 1, m + 1);
  out.topLeftCorner(m, m) = a;
  out(m, m) = corner;
  return out;
}

inline double leakage(const Vector& out, int m) {
  return m < out.size() ? out.tail(out.size() - m).norm() : 0.0;
}

}  // namespace detail

/// For a view that acts as a unitary-kind map on span{|1>..|m>}, the
/// largest deviation of its action on a dense vector from the block lift v_m,
/// up to one phase. One oracle call.
inline double block_lift_residual(const FramedOracle& view, const Matrix& v_m) {
  const int m = static_cast<int>(v_m.rows());
  const Vector d = detail::dense_vector(m, view.dim());
  const Vector out = view.probe(d);
  const Vector y = v_m.adjoint() * out.head(m);
  const Complex overlap = d.head(m).dot(y);
  if (std::abs(overlap) == 0.0) return INFINITY;
  const Vector diff = y - (overlap / std::abs(overlap)) * d.head(m);
  return std::max(diff.cwiseAbs().maxCoeff(), detail::leakage(out, m));
}

/// Reads the phase e^{i phi} acquired by |m+1> relative to the block lift,
/// using the probe (|p> + |m+1>)/sqrt(2). One oracle call.
inline double extension_phase(const FramedOracle& view, const Matrix& v_m,
                              int probe_index = 1) {
  const Tolerances& tol = view.tolerances();
  const int m = static_cast<int>(v_m.rows());
  if (probe_index < 1 || probe_index > m || m + 1 > view.dim())
    throw Error(ErrorKind::IndexOutOfRange, "extension probe", {probe_index, m + 1});
  Vector t = Vector::Zero(view.dim());
  t(probe_index - 1) = 1.0 / std::sqrt(2.0);
  t(m) = 1.0 / std::sqrt(2.0);

  const Vector out = view.probe(t);
  const double leak = detail::leakage(out, m + 1);
  const Vector b = detail::block_diag(v_m, 1.0).adjoint() * out.head(m + 1);
  double dev = leak;
  for (int i = 0; i <= m; ++i) {
    const double expected = (i == probe_index - 1 || i == m) ? 1.0 / std::sqrt(2.0) : 0.0;
    dev = std::max(dev, std::abs(std::abs(b(i)) - expected));
  }
  if (!(dev <= tol.phase))
    throw Error(ErrorKind::PhaseInconsistent,
                "extension probe for dimension " + std::to_string(m + 1) +
                    " does not split as block lift plus a phase",
                {m + 1}, dev);
  return relative_phase(b, probe_index, m + 1, tol);
}

struct ExtensionStep {
  Matrix v_next;
  double phase = 0.0;
  double residual = 0.0;
};

/// Extends the lift v_m of the aligned oracle from span{|1>..|m>} to
/// span{|1>..|m+1>}. For the antiunitary kind the oracle is first composed
/// with conjugation, so the same unitary-kind step applies.
inline ExtensionStep extend_dimension(const FramedOracle& aligned, const Matrix& v_m,
                                      LiftKind kind) {
  const FramedOracle view =
      aligned.with_conjugated_input(kind == LiftKind::antiunitary);
  const Tolerances& tol = view.tolerances();
  const int m = static_cast<int>(v_m.rows());

  ExtensionStep step;
  step.phase = extension_phase(view, v_m);
  step.v_next = detail::block_diag(v_m, std::polar(1.0, step.phase));
  step.residual = block_lift_residual(view, step.v_next);
  if (!(step.residual <= tol.phase))
    throw Error(ErrorKind::PhaseInconsistent,
                "extended lift misses the dense check in dimension " +
                    std::to_string(m + 1) + " by " + std::to_string(step.residual),
                {m + 1}, step.residual);
  return step;
}

/// W from the Bloch action: rotation_to_su2(R) when det R = +1, otherwise
/// rotation_to_su2(R M_y), so that the oracle is psi -> W conj(psi).
inline std::pair<LiftKind, Matrix> qubit_lift(const OrthogonalAction& action,
                                              const Tolerances& tol) {
  if (action.det_sign > 0) return {LiftKind::unitary, rotation_to_su2(action.r, tol)};
  return {LiftKind::antiunitary, rotation_to_su2(action.r * conjugation_mirror(), tol)};
}

inline LiftResult reconstruct_base2(const RaySymmetryOracle& oracle,
                                    const RunConfig& config = {}) {
  if (oracle.dim() != 2)
    throw Error(ErrorKind::DimensionMismatch, "reconstruct_base2 needs dim 2");
  InductiveTrace trace;
  trace.base = bloch_action(oracle, config.tolerances);
  auto [kind, w] = qubit_lift(trace.base, config.tolerances);

  LiftResult result;
  result.kind = kind;
  result.w = std::move(w);
  result.method = Method::inductive;
  result.residual = verify_or_throw(oracle, result.kind, result.w, config);
  result.record = std::move(trace);
  return result;
}

inline LiftResult reconstruct_inductive(const RaySymmetryOracle& input,
                                        const RunConfig& config = {}) {
  require_dim(input, config);
  const CountedOracle counted = with_call_counter(input);
  const RaySymmetryOracle& oracle = counted.oracle;
  const Tolerances& tol = config.tolerances;
  const int n = oracle.dim();

  Alignment alignment = step1_basis_alignment(oracle, tol);
  InductiveTrace trace;
  trace.base = bloch_action(alignment.aligned.restricted(2), tol);
  auto [kind, v] = qubit_lift(trace.base, tol);

  const FramedOracle view =
      alignment.aligned.with_conjugated_input(kind == LiftKind::antiunitary);
  const double base_residual = block_lift_residual(view, v);
  if (!(base_residual <= tol.phase))
    throw Error(ErrorKind::PhaseInconsistent,
                "qubit lift misses the dense check by " + std::to_string(base_residual),
                {2}, base_residual);
  trace.per_step_residuals.push_back(base_residual);

  for (int m = 2; m < n; ++m) {
    ExtensionStep step = extend_dimension(alignment.aligned, v, kind);
    trace.extension_phases.push_back(step.phase);
    trace.per_step_residuals.push_back(step.residual);
    v = std::move(step.v_next);
  }

  LiftResult result;
  result.kind = kind;
  result.w = alignment.u_align.adjoint() * v;
  result.method = Method::inductive;
  result.residual = verify_or_throw(oracle, result.kind, result.w, config);
  result.record = std::move(trace);
  result.oracle_calls = counted.count();
  return result;
}

}  // namespace wigner
