#pragma once

// Pieces shared by both reconstruction algorithms: result types, the
// basis-alignment step, and final verification of a lift against the oracle.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "wigner/config.hpp"
#include "wigner/error.hpp"
#include "wigner/linalg.hpp"
#include "wigner/random.hpp"
#include "wigner/symmetry.hpp"

namespace wigner {

enum class LiftKind { unitary, antiunitary };

constexpr std::string_view to_string(LiftKind k) {
  return k == LiftKind::unitary ? "unitary" : "antiunitary";
}

constexpr std::string_view to_string(Method m) {
  switch (m) {
    case Method::canonical: return "canonical";
    case Method::inductive: return "inductive";
    case Method::both: return "both";
  }
  return "unknown";
}

/// Values indexed by basis pairs (j, k), 1 <= j < k <= dim.
template <typename T>
class PairTable {
 public:
  PairTable() = default;
  explicit PairTable(int dim, T fill = T{})
      : dim_(dim), data_(dim > 1 ? dim * (dim - 1) / 2 : 0, fill) {}

  int dim() const { return dim_; }
  std::size_t size() const { return data_.size(); }

  T& at(int j, int k) { return data_[offset(j, k)]; }
  const T& at(int j, int k) const { return data_[offset(j, k)]; }

  /// Calls f(j, k, value) for every pair in row-major order.
  template <typename F>
  void for_each(F&& f) const {
    for (int j = 1; j <= dim_; ++j)
      for (int k = j + 1; k <= dim_; ++k) f(j, k, at(j, k));
  }

 private:
  std::size_t offset(int j, int k) const {
    if (j < 1 || k <= j || k > dim_)
      throw Error(ErrorKind::IndexOutOfRange, "pair index", {j, k});
    // Rows 1..j-1 hold (dim - 1) + ... + (dim - j + 1) entries.
    const int before = (j - 1) * dim_ - (j - 1) * j / 2;
    return static_cast<std::size_t>(before + (k - j - 1));
  }

  int dim_ = 0;
  std::vector<T> data_;
};

/// Step 1-6 bookkeeping of the canonical reconstruction.
struct CanonicalizationRecord {
  Matrix u_align;
  PairTable<double> phi_table;  // radians, [0, 2pi)
  PairTable<int> eps_table;     // +1 / -1
  std::vector<double> gauge_phases;
  std::vector<double> eta_phases;
  double residual_phi = 0.0;
};

/// Action of a qubit symmetry on the Bloch sphere.
struct OrthogonalAction {
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  int det_sign = 1;
};

struct InductiveTrace {
  OrthogonalAction base;
  std::vector<double> extension_phases;    // one per added dimension k = 3..N
  std::vector<double> per_step_residuals;  // dense-vector checks, k = 2..N
};

/// A reconstructed lift. W is determined up to a global phase; for the
/// antiunitary kind the conjugation is taken in the standard basis, so the
/// map is psi -> W conj(psi).
struct LiftResult {
  LiftKind kind = LiftKind::unitary;
  Matrix w;
  double residual = 0.0;
  Method method = Method::canonical;
  std::variant<CanonicalizationRecord, InductiveTrace> record;
  std::int64_t oracle_calls = 0;
};

/// Action of the lift on a vector.
inline Vector apply_lift(LiftKind kind, const Matrix& w, const Vector& psi) {
  return kind == LiftKind::unitary ? Vector(w * psi) : Vector(w * psi.conjugate());
}

/// An oracle seen through a known change of frame:
///   psi -> frame * lift(oracle, conj_input ? conj(psi) : psi)
/// with the frame applied at the vector level, after reading the output ray.
/// Equivalent to composing induced_by_unitary(frame) after the oracle (and
/// conjugation before it), but costs O(N^2) on top of the oracle call.
class FramedOracle {
 public:
  FramedOracle(RaySymmetryOracle oracle, Matrix frame, bool conjugate_input,
               const Tolerances& tol)
      : oracle_(std::move(oracle)),
        frame_(std::move(frame)),
        conjugate_input_(conjugate_input),
        tol_(tol) {}

  int dim() const { return oracle_.dim(); }
  const Matrix& frame() const { return frame_; }
  bool conjugates_input() const { return conjugate_input_; }
  const Tolerances& tolerances() const { return tol_; }

  /// Output ray for input psi, gauge-fixed. Throws ImpureInput when the
  /// oracle does not return a pure state.
  Vector probe(const Vector& psi) const {
    const Vector in = conjugate_input_ ? Vector(psi.conjugate()) : psi;
    const UnitVector u = UnitVector::normalized(in);
    const UnitVector out = ray_from_projector(oracle_.apply(projector(u)), tol_);
    return gauge_fixed(frame_ * out.vec(), tol_.gauge_eps);
  }

  FramedOracle with_frame(const Matrix& left) const {
    return FramedOracle(oracle_, left * frame_, conjugate_input_, tol_);
  }

  FramedOracle with_conjugated_input(bool on) const {
    return FramedOracle(oracle_, frame_, on, tol_);
  }

  /// The same map as a plain ray-space oracle.
  RaySymmetryOracle as_oracle() const {
    FramedOracle self = *this;
    return RaySymmetryOracle(dim(), [self](const Matrix& rho) {
      const Vector psi = ray_from_projector(rho, self.tol_).vec();
      const Vector out = self.probe(psi);
      return Matrix(out * out.adjoint());
    });
  }

  /// Restriction to span{|1>, ..., |m>} as an m-dimensional oracle. Any
  /// weight the output puts outside the block shows up as a trace deficit.
  RaySymmetryOracle restricted(int m) const {
    FramedOracle self = *this;
    const int n = dim();
    return RaySymmetryOracle(m, [self, m, n](const Matrix& rho) {
      Vector psi = Vector::Zero(n);
      psi.head(m) = ray_from_projector(rho, self.tol_).vec();
      const Vector out = self.probe(psi);
      const Vector head = out.head(m);
      return Matrix(head * head.adjoint());
    });
  }

 private:
  RaySymmetryOracle oracle_;
  Matrix frame_;
  bool conjugate_input_;
  Tolerances tol_;
};

struct Alignment {
  Matrix u_align;  // U_align |n;Omega> = |n>
  FramedOracle aligned;
};

/// Composes the oracle with the unitary taking the basis images back to the
/// standard basis, so the result fixes every basis ray. Costs N oracle calls.
inline Alignment step1_basis_alignment(const RaySymmetryOracle& oracle,
                                       const Tolerances& tol = default_tolerances) {
  const int n = oracle.dim();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "reconstruction needs dim >= 2");

  Matrix images(n, n);
  for (int i = 1; i <= n; ++i) {
    try {
      images.col(i - 1) =
          ray_from_projector(oracle.apply(projector(UnitVector::basis(n, i))), tol)
              .vec();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ImpureInput) throw;
      throw Error(ErrorKind::ImpureInput,
                  "image of basis ray " + std::to_string(i) + " is not pure (" +
                      e.what() + ")",
                  {i}, e.measured());
    }
  }

  const Matrix gram = images.adjoint() * images;
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const double dev = std::abs(gram(a, b) - (a == b ? Complex(1.0) : Complex(0.0)));
      if (!(dev <= tol.onb))
        throw Error(ErrorKind::BasisImageNotOrthonormal,
                    "basis images " + std::to_string(a + 1) + ", " +
                        std::to_string(b + 1) + " overlap by " + std::to_string(dev),
                    {a + 1, b + 1}, dev);
    }
  }

  Matrix u_align = images.adjoint();
  FramedOracle aligned(oracle, u_align, false, tol);
  return {std::move(u_align), std::move(aligned)};
}

/// max over n_verify seeded Haar-random psi of
///   || oracle(rho(psi)) - rho(lift(psi)) ||_F.
inline double lift_residual(const RaySymmetryOracle& oracle, LiftKind kind,
                            const Matrix& w, int n_verify, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n_verify; ++i) {
    const UnitVector psi = UnitVector::normalized(haar_vector(rng, oracle.dim()));
    const Matrix got = oracle.apply(projector(psi));
    const Vector image = apply_lift(kind, w, psi.vec());
    const double r = (got - image * image.adjoint()).norm();
    worst = std::max(worst, r);
  }
  return worst;
}

struct PhaseAgreement {
  double alpha = 0.0;          // fitted from the first diagonal entry
  double max_deviation = 0.0;  // ||W_a^dag W_b - e^{i alpha} I||_max
};

/// How far two lifts are from differing by a single global phase.
inline PhaseAgreement phase_agreement(const Matrix& wa, const Matrix& wb) {
  if (wa.rows() != wb.rows() || wa.cols() != wb.cols())
    throw Error(ErrorKind::DimensionMismatch, "lifts of different dimension");
  const Matrix m = wa.adjoint() * wb;
  PhaseAgreement out;
  out.alpha = std::arg(m(0, 0));
  out.max_deviation =
      max_abs(m - std::polar(1.0, out.alpha) * Matrix::Identity(m.rows(), m.cols()));
  return out;
}

inline void require_dim(const RaySymmetryOracle& oracle, const RunConfig& config) {
  if (oracle.dim() < 2)
    throw Error(ErrorKind::InvalidArgument, "reconstruction needs dim >= 2");
  if (oracle.dim() > config.max_dim)
    throw Error(ErrorKind::InvalidArgument,
                "dim " + std::to_string(oracle.dim()) + " exceeds max_dim " +
                    std::to_string(config.max_dim));
}

inline double verify_or_throw(const RaySymmetryOracle& oracle, LiftKind kind,
                              const Matrix& w, const RunConfig& config) {
  const double residual =
      lift_residual(oracle, kind, w, config.n_verify, config.seed);
  if (!(residual <= config.tol))
    throw Error(ErrorKind::VerificationFailed,
                "lift residual " + std::to_string(residual) + " exceeds tol " +
                    std::to_string(config.tol),
                {}, residual);
  return residual;
}

}  // namespace wigner
