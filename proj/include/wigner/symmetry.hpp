#pragma once

// Ray-space maps treated as black boxes, the standard symmetries induced by
// unitary and antiunitary operators, a depolarizing map used as a negative
// fixture, and the certifier for the symmetry condition
//   Tr(Omega(rho1) Omega(rho2)) = Tr(rho1 rho2).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "wigner/config.hpp"
#include "wigner/error.hpp"
#include "wigner/linalg.hpp"
#include "wigner/random.hpp"

namespace wigner {

/// Opaque map on density matrices. Reconstruction code only ever calls
/// apply(); the map must be deterministic and safe to call concurrently.
///
/// The output is a plain matrix: a map that is not a symmetry may return
/// mixed states, and deciding that is the consumer's job.
class RaySymmetryOracle {
 public:
  using Map = std::function<Matrix(const Matrix&)>;

  RaySymmetryOracle(int dim, Map map)
      : dim_(dim), map_(std::make_shared<const Map>(std::move(map))) {
    if (dim < 1) throw Error(ErrorKind::InvalidArgument, "dim must be positive");
  }

  int dim() const { return dim_; }

  Matrix apply(const PureProjector& rho) const {
    if (rho.dim() != dim_)
      throw Error(ErrorKind::DimensionMismatch,
                  "oracle dim " + std::to_string(dim_) + ", input dim " +
                      std::to_string(rho.dim()));
    return (*map_)(rho.matrix());
  }

 private:
  friend RaySymmetryOracle compose(const RaySymmetryOracle&,
                                   const RaySymmetryOracle&);
  int dim_;
  std::shared_ptr<const Map> map_;
};

/// rho -> U rho U^dag
inline RaySymmetryOracle induced_by_unitary(
    const Matrix& u, const Tolerances& tol = default_tolerances) {
  require_unitary(u, tol.unitary);
  return RaySymmetryOracle(static_cast<int>(u.rows()), [u](const Matrix& rho) {
    const Matrix left = u * rho;
    return Matrix(left * u.adjoint());
  });
}

/// rho -> U conj(rho) U^dag, the action of psi -> U conj(psi).
inline RaySymmetryOracle induced_by_antiunitary(
    const Matrix& u, const Tolerances& tol = default_tolerances) {
  require_unitary(u, tol.unitary);
  return RaySymmetryOracle(static_cast<int>(u.rows()), [u](const Matrix& rho) {
    const Matrix left = u * rho.conjugate();
    return Matrix(left * u.adjoint());
  });
}

/// rho -> rho^T. Positive but not completely positive; on Hermitian input it
/// coincides with entrywise conjugation.
inline RaySymmetryOracle induced_by_transpose(int dim) {
  return RaySymmetryOracle(dim,
                           [](const Matrix& rho) { return Matrix(rho.transpose()); });
}

/// rho -> (1 - p) rho + p I / N. Sends pure states to mixed ones for
/// p in (0, 1]; consumers are expected to reject it.
inline RaySymmetryOracle depolarizing_map(int dim, double p) {
  if (!(p > 0.0 && p <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "depolarizing p must lie in (0, 1]");
  return RaySymmetryOracle(dim, [dim, p](const Matrix& rho) {
    return Matrix((1.0 - p) * rho + (p / dim) * Matrix::Identity(dim, dim));
  });
}

/// outer o inner
inline RaySymmetryOracle compose(const RaySymmetryOracle& outer,
                                 const RaySymmetryOracle& inner) {
  if (outer.dim() != inner.dim())
    throw Error(ErrorKind::DimensionMismatch,
                "cannot compose dims " + std::to_string(outer.dim()) + " and " +
                    std::to_string(inner.dim()));
  return RaySymmetryOracle(outer.dim(), [o = outer.map_, i = inner.map_](
                                            const Matrix& rho) {
    return (*o)((*i)(rho));
  });
}

/// Wraps an oracle so that only its apply() is reachable.
inline RaySymmetryOracle opaque(const RaySymmetryOracle& oracle) {
  return RaySymmetryOracle(oracle.dim(), [oracle](const Matrix& rho) {
    return oracle.apply(PureProjector(rho));
  });
}

/// Oracle plus a shared counter of apply() calls made through it.
struct CountedOracle {
  RaySymmetryOracle oracle;
  std::shared_ptr<std::atomic<std::int64_t>> calls;

  std::int64_t count() const { return calls->load(); }
};

inline CountedOracle with_call_counter(const RaySymmetryOracle& oracle) {
  auto calls = std::make_shared<std::atomic<std::int64_t>>(0);
  RaySymmetryOracle wrapped(oracle.dim(), [oracle, calls](const Matrix& rho) {
    calls->fetch_add(1, std::memory_order_relaxed);
    return oracle.apply(PureProjector(rho));
  });
  return {std::move(wrapped), std::move(calls)};
}

struct SymmetryCheckReport {
  std::int64_t pairs_tested = 0;
  double max_sc_violation = 0.0;
  double max_purity_violation = 0.0;
  bool pass = true;
  /// Input pair with the worst violation, present when the check fails.
  std::optional<std::pair<Matrix, Matrix>> witness;
};

/// Samples the symmetry condition on all basis pairs (|j>, |k>), j < k, and
/// on n_pairs pairs of Haar-random pure states drawn from `seed`.
/// Failures are reported, never thrown.
inline SymmetryCheckReport check_symmetry_condition(
    const RaySymmetryOracle& oracle, int n_pairs, std::uint64_t seed, double tol,
    const Tolerances& tols = default_tolerances) {
  if (n_pairs < 1)
    throw Error(ErrorKind::InvalidArgument, "n_pairs must be at least 1");
  const int dim = oracle.dim();
  SymmetryCheckReport report;
  double worst = -1.0;

  auto record = [&](const PureProjector& a, const Matrix& out_a,
                    const PureProjector& b, const Matrix& out_b) {
    const double expected = trace_product(a.matrix(), b.matrix()).real();
    const double got = trace_product(out_a, out_b).real();
    const double sc = std::abs(got - expected);
    const double pv = std::max(purity_violation(out_a), purity_violation(out_b));
    ++report.pairs_tested;
    report.max_sc_violation = std::max(report.max_sc_violation, sc);
    report.max_purity_violation = std::max(report.max_purity_violation, pv);
    const double badness = std::max(sc / tol, pv / tols.purity);
    if (badness > 1.0 && badness > worst) {
      worst = badness;
      report.witness = std::make_pair(a.matrix(), b.matrix());
    }
  };

  std::vector<PureProjector> basis;
  std::vector<Matrix> basis_out;
  basis.reserve(dim);
  basis_out.reserve(dim);
  for (int n = 1; n <= dim; ++n) {
    basis.push_back(projector(UnitVector::basis(dim, n)));
    basis_out.push_back(oracle.apply(basis.back()));
  }
  for (int j = 0; j < dim; ++j)
    for (int k = j + 1; k < dim; ++k)
      record(basis[j], basis_out[j], basis[k], basis_out[k]);

  Rng rng(seed);
  for (int i = 0; i < n_pairs; ++i) {
    const PureProjector a = projector(UnitVector::normalized(haar_vector(rng, dim)));
    const PureProjector b = projector(UnitVector::normalized(haar_vector(rng, dim)));
    record(a, oracle.apply(a), b, oracle.apply(b));
  }

  report.pass = report.max_sc_violation <= tol &&
                report.max_purity_violation <= tols.purity;
  if (report.pass) report.witness.reset();
  return report;
}

}  // namespace wigner
