#pragma once

// Reconstruction by canonicalization: compose the oracle with unitary
// symmetries until it is the identity or complex conjugation on ray space,
// then read the lift off the unitaries used.
//
// Oracle calls made by reconstruct_canonical, exactly:
//   N                 basis images (alignment)
//   + N(N-1)          two equator probes per pair j < k
//   + 1               the uniform real vector
//   + n_verify        final verification
// = N^2 + 1 + n_verify.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wigner/config.hpp"
#include "wigner/error.hpp"
#include "wigner/lift_common.hpp"
#include "wigner/linalg.hpp"
#include "wigner/random.hpp"
#include "wigner/symmetry.hpp"

namespace wigner {

/// O(2) element phi -> phi_jk + eps_jk * phi read off a latitude circle.
struct CircleParams {
  double phi = 0.0;  // [0, 2pi)
  int eps = 1;
};

/// Probes |theta; 0>_jk and |theta; pi/2>_jk. Requires an oracle that fixes
/// the basis rays.
inline CircleParams extract_circle_params(const FramedOracle& aligned, int j, int k,
                                          double theta = pi / 2) {
  const Tolerances& tol = aligned.tolerances();
  const int n = aligned.dim();
  const UnitVector p0 = latitude_state({j, k, theta, 0.0}, n);
  const UnitVector p1 = latitude_state({j, k, theta, pi / 2}, n);
  const Vector out0 = aligned.probe(p0.vec());
  const Vector out1 = aligned.probe(p1.vec());

  const double cj = std::cos(theta / 2);
  const double ck = std::sin(theta / 2);
  for (const Vector* out : {&out0, &out1}) {
    double dev = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double expected = i == j ? cj : (i == k ? ck : 0.0);
      dev = std::max(dev, std::abs(std::abs((*out)(i - 1)) - expected));
    }
    if (!(dev <= tol.phase))
      throw Error(ErrorKind::NotOnCircle,
                  "output left the latitude circle of pair (" + std::to_string(j) +
                      "," + std::to_string(k) + "), modulus error " +
                      std::to_string(dev),
                  {j, k}, dev);
  }

  const double phi0 = relative_phase(out0, j, k, tol);
  const double phi1 = relative_phase(out1, j, k, tol);
  const double shift = wrap_pi(phi1 - phi0);
  const double dev_plus = std::abs(shift - pi / 2);
  const double dev_minus = std::abs(shift + pi / 2);
  if (dev_plus <= tol.phase) return {phi0, 1};
  if (dev_minus <= tol.phase) return {phi0, -1};

  const double dev = std::min(dev_plus, dev_minus);
  const std::string diagnosis =
      dev < 0.1 ? "noisy symmetry: shift is near +-pi/2 but outside tolerance"
                : "structurally inconsistent: shift is far from +-pi/2";
  throw Error(ErrorKind::IndeterminateSign,
              "pair (" + std::to_string(j) + "," + std::to_string(k) +
                  "): phase shift " + std::to_string(shift) + "; " + diagnosis,
              {j, k}, dev);
}

struct PhaseFix {
  Matrix u_prime;                    // diag(e^{-i phi_n})
  std::vector<double> gauge_phases;  // phi_1 = 0, phi_n = phi_1n
  FramedOracle fixed;
};

/// Uses the diagonal gauge freedom to zero the first-row phases phi_1k.
/// phi_first_row[k - 2] holds phi_1k for k = 2..N.
inline PhaseFix step3_phase_fix(const FramedOracle& aligned,
                                std::span<const double> phi_first_row) {
  const int n = aligned.dim();
  if (static_cast<int>(phi_first_row.size()) != n - 1)
    throw Error(ErrorKind::DimensionMismatch, "need phi_1k for k = 2..N");
  std::vector<double> gauge(n, 0.0);
  for (int k = 2; k <= n; ++k) gauge[k - 1] = phi_first_row[k - 2];

  Matrix u_prime = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) u_prime(i, i) = std::polar(1.0, -gauge[i]);
  FramedOracle fixed = aligned.with_frame(u_prime);
  return {std::move(u_prime), std::move(gauge), std::move(fixed)};
}

/// phi'_jk = phi_jk + phi_j - phi_k: the circle phases after step 3,
/// obtained without further oracle calls.
inline PairTable<double> gauge_shifted(const PairTable<double>& phi,
                                       std::span<const double> gauge) {
  PairTable<double> out(phi.dim());
  phi.for_each([&](int j, int k, double v) {
    out.at(j, k) = wrap_two_pi(v + gauge[j - 1] - gauge[k - 1]);
  });
  return out;
}

struct RealVectorCheck {
  std::vector<double> eta_phases;
  double residual_phi = 0.0;
};

/// Applies the oracle to (1, ..., 1)/sqrt(N). For a symmetry every output
/// phase eta_n agrees with eta_1 = 0, which forces every gauge-fixed circle
/// phase phi'_jk = eta_k - eta_j to vanish.
inline RealVectorCheck step4_verify_real_vector(const FramedOracle& fixed,
                                                const PairTable<double>& fixed_phi) {
  const Tolerances& tol = fixed.tolerances();
  const int n = fixed.dim();
  const Vector r0 = Vector::Constant(n, Complex(1.0 / std::sqrt(double(n))));
  const Vector out = fixed.probe(r0);

  RealVectorCheck check;
  check.eta_phases.resize(n);
  for (int i = 1; i <= n; ++i) {
    const double dev = std::abs(std::abs(out(i - 1)) - 1.0 / std::sqrt(double(n)));
    if (!(dev <= tol.phase))
      throw Error(ErrorKind::PhaseResidual,
                  "modulus of component " + std::to_string(i) +
                      " of the real vector changed by " + std::to_string(dev),
                  {i}, dev);
    check.eta_phases[i - 1] = wrap_pi(std::arg(out(i - 1)));
  }

  int wj = 0, wk = 0;
  fixed_phi.for_each([&](int j, int k, double v) {
    const double r = std::abs(wrap_pi(v));
    if (r > check.residual_phi) {
      check.residual_phi = r;
      wj = j;
      wk = k;
    }
  });
  if (!(check.residual_phi <= tol.phase))
    throw Error(ErrorKind::PhaseResidual,
                "gauge-fixed phase of pair (" + std::to_string(wj) + "," +
                    std::to_string(wk) + ") is " + std::to_string(check.residual_phi),
                {wj, wk}, check.residual_phi);

  for (int i = 2; i <= n; ++i) {
    const double eta = std::abs(check.eta_phases[i - 1]);
    if (!(eta <= tol.phase))
      throw Error(ErrorKind::PhaseResidual,
                  "real vector not fixed: eta_" + std::to_string(i) + " = " +
                      std::to_string(check.eta_phases[i - 1]),
                  {1, i}, eta);
  }
  return check;
}

/// +1 when every eps_jk is +1, -1 when every eps_jk is -1. Otherwise throws
/// InconsistentSigns naming a triple j < k < l whose three signs disagree;
/// such a triple always exists once the signs are mixed.
inline int step6_sign_decision(const PairTable<int>& eps) {
  const int n = eps.dim();
  if (eps.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty sign table");
  const int first = eps.at(1, 2);
  bool uniform = true;
  eps.for_each([&](int, int, int v) { uniform = uniform && v == first; });
  if (uniform) return first;

  for (int j = 1; j <= n; ++j)
    for (int k = j + 1; k <= n; ++k)
      for (int l = k + 1; l <= n; ++l) {
        const int a = eps.at(j, k), b = eps.at(k, l), c = eps.at(j, l);
        if (a != b || b != c)
          throw Error(ErrorKind::InconsistentSigns,
                      "signs (" + std::to_string(a) + "," + std::to_string(b) + "," +
                          std::to_string(c) + ") on pairs of triple (" +
                          std::to_string(j) + "," + std::to_string(k) + "," +
                          std::to_string(l) +
                          ") make the triple product complex",
                      {j, k, l});
      }
  throw Error(ErrorKind::InconsistentSigns, "mixed signs");  // unreachable
}

/// Full canonical pipeline; see the call-count formula at the top of this file.
inline LiftResult reconstruct_canonical(const RaySymmetryOracle& input,
                                        const RunConfig& config = {}) {
  require_dim(input, config);
  const CountedOracle counted = with_call_counter(input);
  const RaySymmetryOracle& oracle = counted.oracle;
  const Tolerances& tol = config.tolerances;
  const int n = oracle.dim();

  Alignment alignment = step1_basis_alignment(oracle, tol);

  CanonicalizationRecord record;
  record.u_align = alignment.u_align;
  record.phi_table = PairTable<double>(n);
  record.eps_table = PairTable<int>(n);
  for (int j = 1; j <= n; ++j)
    for (int k = j + 1; k <= n; ++k) {
      const CircleParams p = extract_circle_params(alignment.aligned, j, k);
      record.phi_table.at(j, k) = p.phi;
      record.eps_table.at(j, k) = p.eps;
    }

  std::vector<double> first_row;
  for (int k = 2; k <= n; ++k) first_row.push_back(record.phi_table.at(1, k));
  PhaseFix fix = step3_phase_fix(alignment.aligned, first_row);
  record.gauge_phases = fix.gauge_phases;

  const RealVectorCheck real =
      step4_verify_real_vector(fix.fixed, gauge_shifted(record.phi_table, fix.gauge_phases));
  record.eta_phases = real.eta_phases;
  record.residual_phi = real.residual_phi;

  const int sign = step6_sign_decision(record.eps_table);

  LiftResult result;
  result.kind = sign > 0 ? LiftKind::unitary : LiftKind::antiunitary;
  result.w = alignment.u_align.adjoint() * fix.u_prime.adjoint();
  result.method = Method::canonical;
  result.residual = verify_or_throw(oracle, result.kind, result.w, config);
  result.record = std::move(record);
  result.oracle_calls = counted.count();
  return result;
}

/// Results of the consistency checks on a single pair across latitudes.
struct CircleConsistencyReport {
  std::vector<double> thetas;
  std::vector<CircleParams> params;
  double max_phi_deviation = 0.0;
  double max_real_violation = 0.0;
};

inline constexpr double default_theta_samples[] = {pi / 6, pi / 3, pi / 2,
                                                   2 * pi / 3, 5 * pi / 6};

/// Checks that (phi_jk, eps_jk) is the same on every sampled latitude of the
/// aligned oracle, and that the phase-fixed oracle fixes n_real random real
/// rays with r_1 != 0. Throws PropertyViolation on the first failure.
inline CircleConsistencyReport verify_circle_properties(
    const FramedOracle& aligned, const FramedOracle& fixed, int j, int k,
    std::span<const double> thetas = default_theta_samples, int n_real = 20,
    std::uint64_t seed = 42) {
  const Tolerances& tol = aligned.tolerances();
  CircleConsistencyReport report;
  for (double theta : thetas) {
    const CircleParams p = extract_circle_params(aligned, j, k, theta);
    if (!report.params.empty()) {
      const CircleParams& ref = report.params.front();
      const double dev = std::abs(wrap_pi(p.phi - ref.phi));
      report.max_phi_deviation = std::max(report.max_phi_deviation, dev);
      if (p.eps != ref.eps || !(dev <= tol.phase))
        throw Error(ErrorKind::PropertyViolation,
                    "circle parameters of pair (" + std::to_string(j) + "," +
                        std::to_string(k) + ") change at theta = " +
                        std::to_string(theta),
                    {j, k}, theta);
    }
    report.thetas.push_back(theta);
    report.params.push_back(p);
  }

  Rng rng(seed);
  for (int i = 0; i < n_real; ++i) {
    Eigen::VectorXd r = random_real_unit(rng, fixed.dim());
    if (r(0) == 0.0) r(0) = 1e-3;
    const Vector psi = (r / r.norm()).cast<Complex>();
    const Vector out = fixed.probe(psi);
    const double violation = 1.0 - std::norm(psi.dot(out));
    report.max_real_violation = std::max(report.max_real_violation, violation);
    if (!(violation <= tol.purity))
      throw Error(ErrorKind::PropertyViolation,
                  "real ray " + std::to_string(i) + " moved by " +
                      std::to_string(violation),
                  {}, violation);
  }
  return report;
}

}  // namespace wigner
