// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every check runs at its pinned tolerance; nothing is retried.

#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "test_support.hpp"

using namespace wigner;
using namespace wigner::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double lift_fidelity(const Matrix& w, const Matrix& u, LiftKind kind, Rng& rng, int samples) {
  double worst = 1.0;
  for (int i = 0; i < samples; ++i) {
    Vector psi = haar_vector(rng, static_cast<int>(u.rows()));
    if (kind == LiftKind::antiunitary) psi = psi.conjugate();
    worst = std::min(worst, std::sqrt(brute_fidelity(w * psi, u * psi)));
  }
  return worst;
}

// Shared by criteria 1-3: the round-trip grid for one kind.
struct GridResult {
  bool kinds_ok = true;
  double worst_fidelity = 1.0;
  bool signs_uniform = true;
  int runs = 0;
  double seconds = 0.0;
};

GridResult round_trip_grid(LiftKind kind, std::uint64_t seed) {
  const auto t0 = Clock::now();
  Rng rng(seed);
  GridResult g;
  const int expected_sign = kind == LiftKind::unitary ? 1 : -1;
  for (int n : {2, 3, 4, 8, 16}) {
    for (int i = 0; i < 50; ++i) {
      const RandomOracle o = random_oracle(rng, n, kind);
      const LiftResult c = reconstruct_canonical(o.oracle);
      const LiftResult d = reconstruct_inductive(o.oracle);
      g.kinds_ok = g.kinds_ok && c.kind == kind && d.kind == kind;
      g.worst_fidelity = std::min(g.worst_fidelity, lift_fidelity(c.w, o.u, kind, rng, 100));
      g.worst_fidelity = std::min(g.worst_fidelity, lift_fidelity(d.w, o.u, kind, rng, 100));
      std::get<CanonicalizationRecord>(c.record).eps_table.for_each(
          [&](int, int, int e) { g.signs_uniform = g.signs_uniform && e == expected_sign; });
      ++g.runs;
    }
  }
  g.seconds = seconds_since(t0);
  return g;
}

GridResult unitary_grid, antiunitary_grid;

Outcome round_trip(const GridResult& g) {
  Outcome o;
  o.pass = g.kinds_ok && g.worst_fidelity >= 1 - 1e-9 && g.seconds < 60.0;
  o.detail = std::to_string(g.runs) + " instances x 2 methods, kinds " +
             (g.kinds_ok ? "ok" : "WRONG") + ", worst fidelity 1-" +
             fmt("%.2e", 1 - g.worst_fidelity) + ", " + fmt("%.1f s", g.seconds);
  return o;
}

Outcome c1() {
  unitary_grid = round_trip_grid(LiftKind::unitary, 101);
  return round_trip(unitary_grid);
}

Outcome c2() {
  antiunitary_grid = round_trip_grid(LiftKind::antiunitary, 102);
  return round_trip(antiunitary_grid);
}

// Independent sign model of mixed_sign_map: conjugating component n flips the
// orientation of every latitude circle touching n.
int mixed_sign(const std::set<int>& s, int j, int k) {
  return s.count(j) || s.count(k) ? -1 : 1;
}

Outcome c3() {
  Outcome o;
  bool grid = unitary_grid.signs_uniform && antiunitary_grid.signs_uniform;
  bool witnesses = true;
  int maps = 0;
  const std::vector<std::pair<int, std::set<int>>> cases = {
      {3, {3}}, {3, {2}}, {4, {2}}, {5, {2, 4}}, {6, {2, 3, 5}}, {8, {8}}};
  for (const auto& [n, s] : cases) {
    ++maps;
    try {
      reconstruct_canonical(mixed_sign_map(n, s));
      witnesses = false;
    } catch (const Error& e) {
      const auto& w = e.witness();
      const bool shape = e.kind() == ErrorKind::InconsistentSigns && w.size() == 3 &&
                         1 <= w[0] && w[0] < w[1] && w[1] < w[2] && w[2] <= n;
      bool mixed = false;
      if (shape) {
        const int a = mixed_sign(s, w[0], w[1]), b = mixed_sign(s, w[1], w[2]),
                  c = mixed_sign(s, w[0], w[2]);
        mixed = !(a == b && b == c);
      }
      witnesses = witnesses && shape && mixed;
    }
  }
  o.pass = grid && witnesses;
  o.detail = std::string("grid signs ") + (grid ? "uniform" : "MIXED") + ", " +
             std::to_string(maps) + " mixed-sign maps " +
             (witnesses ? "rejected with valid triples" : "NOT all rejected correctly");
  return o;
}

// Aligned and phase-fixed views of an oracle, built from the library steps.
struct Views {
  FramedOracle aligned;
  FramedOracle fixed;
};

Views canonical_views(const RaySymmetryOracle& oracle) {
  const Alignment a = step1_basis_alignment(oracle);
  std::vector<double> row;
  for (int k = 2; k <= oracle.dim(); ++k)
    row.push_back(extract_circle_params(a.aligned, 1, k).phi);
  return {a.aligned, step3_phase_fix(a.aligned, row).fixed};
}

Outcome c4() {
  Rng rng(104);
  double worst = 0.0;
  bool eps_ok = true;
  for (int i = 0; i < 20; ++i) {
    const RandomOracle o =
        random_oracle(rng, 4, i % 2 ? LiftKind::antiunitary : LiftKind::unitary);
    const Views v = canonical_views(o.oracle);
    for (int j = 1; j <= 4; ++j)
      for (int k = j + 1; k <= 4; ++k) {
        std::vector<CircleParams> ps;
        for (double theta : default_theta_samples)
          ps.push_back(extract_circle_params(v.aligned, j, k, theta));
        for (const CircleParams& p : ps) {
          worst = std::max(worst, std::abs(wrap_pi(p.phi - ps.front().phi)));
          eps_ok = eps_ok && p.eps == ps.front().eps;
        }
      }
  }
  return {worst <= 1e-8 && eps_ok, "20 oracles x 6 pairs x 5 latitudes, max phase spread " +
                                       fmt("%.2e", worst) + (eps_ok ? "" : ", SIGN CHANGE")};
}

Outcome c5() {
  Rng rng(105);
  double worst = 0.0;
  int rays = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + i % 7;
    const RandomOracle o =
        random_oracle(rng, n, i % 2 ? LiftKind::antiunitary : LiftKind::unitary);
    const Views v = canonical_views(o.oracle);
    for (int r = 0; r < 20; ++r) {
      Eigen::VectorXd x = random_real_unit(rng, n);
      if (x(0) == 0.0) continue;
      const Vector psi = x.cast<Complex>();
      worst = std::max(worst, 1.0 - brute_fidelity(psi, v.fixed.probe(psi)));
      ++rays;
    }
  }
  return {worst <= 1e-8 && rays == 400,
          std::to_string(rays) + " real rays over 20 oracles, max infidelity " +
              fmt("%.2e", worst)};
}

Outcome c6() {
  Rng rng(106);
  int wrong = 0;
  for (int i = 0; i < 100; ++i) {
    wrong += bloch_action(random_oracle(rng, 2, LiftKind::unitary).oracle).det_sign != 1;
    wrong += bloch_action(random_oracle(rng, 2, LiftKind::antiunitary).oracle).det_sign != -1;
  }
  return {wrong == 0, "200 qubit oracles, " + std::to_string(wrong) + " misclassified"};
}

Outcome c7() {
  Rng rng(107);
  int wrong = 0;
  for (int i = 0; i < 25; ++i) {
    const int n = 2 + i % 5;
    const auto ka = rng.uniform() < 0.5 ? LiftKind::unitary : LiftKind::antiunitary;
    const auto kb = rng.uniform() < 0.5 ? LiftKind::unitary : LiftKind::antiunitary;
    const RandomOracle a = random_oracle(rng, n, ka);
    const RandomOracle b = random_oracle(rng, n, kb);
    const LiftKind ra = reconstruct_canonical(a.oracle).kind;
    const LiftKind rb = reconstruct_canonical(b.oracle).kind;
    const auto ab = compose(a.oracle, b.oracle);
    const LiftKind c = reconstruct_canonical(ab).kind;
    const LiftKind d = reconstruct_inductive(ab).kind;
    const LiftKind expected = ra == rb ? LiftKind::unitary : LiftKind::antiunitary;
    wrong += c != expected || d != expected || ra != ka || rb != kb;
  }
  return {wrong == 0, "25 composed pairs, " + std::to_string(wrong) + " violations"};
}

Outcome c8() {
  Outcome o;
  double off = 0.0;
  bool kinds = true;
  for (int n : {2, 3, 5, 8}) {
    for (const LiftResult& r :
         {reconstruct_canonical(induced_by_transpose(n)), reconstruct_inductive(induced_by_transpose(n))}) {
      kinds = kinds && r.kind == LiftKind::antiunitary;
      Matrix m = r.w;
      m.diagonal().setZero();
      off = std::max(off, max_abs(m));
    }
  }
  double worst_formula = 0.0, worst_brute = 0.0;
  bool rejected = true;
  for (int n : {2, 3, 5}) {
    for (double p : {0.1, 0.5, 1.0}) {
      const auto oracle = depolarizing_map(n, p);
      // Direct evaluation of the oracle's output on the first basis ray.
      const Matrix m = oracle.apply(projector(UnitVector::basis(n, 1)));
      const double brute = 1.0 - brute_trace_product(m, m).real();
      const double formula = (n - 1.0) / n * (2 * p - p * p);
      for (int method = 0; method < 2; ++method) {
        try {
          if (method == 0) reconstruct_canonical(oracle);
          else reconstruct_inductive(oracle);
          rejected = false;
        } catch (const Error& e) {
          rejected = rejected && e.kind() == ErrorKind::ImpureInput;
          worst_brute = std::max(worst_brute, std::abs(e.measured() - brute));
          worst_formula = std::max(worst_formula, std::abs(e.measured() - formula));
        }
      }
    }
  }
  o.pass = kinds && off < 1e-9 && rejected && worst_brute <= 1e-12 && worst_formula <= 1e-12;
  o.detail = std::string("transpose ") + (kinds ? "antiunitary" : "WRONG KIND") +
             ", off-diagonal " + fmt("%.1e", off) + "; depolarizing " +
             (rejected ? "rejected" : "NOT rejected") + ", purity error vs brute " +
             fmt("%.1e", worst_brute) + ", vs formula " + fmt("%.1e", worst_formula);
  return o;
}

Outcome c9() {
  Rng rng(109);
  double worst = 0.0;
  bool kinds = true;
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + i % 7;
    const RandomOracle o =
        random_oracle(rng, n, rng.uniform() < 0.5 ? LiftKind::unitary : LiftKind::antiunitary);
    const LiftResult c = reconstruct_canonical(o.oracle);
    const LiftResult d = reconstruct_inductive(o.oracle);
    kinds = kinds && c.kind == d.kind;
    const Matrix m = c.w.adjoint() * d.w;
    const Complex phase = m(0, 0) / std::abs(m(0, 0));
    worst = std::max(worst, max_abs(m - phase * Matrix::Identity(n, n)));
  }
  return {kinds && worst < 1e-8,
          "50 oracles, max |Wc^dag Wi - e^{ia} I| = " + fmt("%.2e", worst)};
}

Outcome c10() {
  Rng rng(110);
  std::vector<RaySymmetryOracle> fixtures;
  for (int n = 2; n <= 8; ++n) {
    fixtures.push_back(random_oracle(rng, n, LiftKind::unitary).oracle);
    fixtures.push_back(random_oracle(rng, n, LiftKind::antiunitary).oracle);
    fixtures.push_back(induced_by_transpose(n));
  }
  fixtures.push_back(compose(fixtures[4], fixtures[5]));
  RunConfig config;
  int mismatches = 0, bad_counts = 0;
  for (const auto& f : fixtures) {
    const int n = f.dim();
    const CountedOracle wrapped = with_call_counter(f);
    const LiftResult plain = reconstruct_canonical(f, config);
    const LiftResult counted = reconstruct_canonical(wrapped.oracle, config);
    mismatches += plain.kind != counted.kind || max_abs(plain.w - counted.w) != 0.0 ||
                  plain.residual != counted.residual;
    bad_counts += wrapped.count() != n * n + 1 + config.n_verify;

    const CountedOracle wrapped2 = with_call_counter(f);
    const LiftResult plain2 = reconstruct_inductive(f, config);
    const LiftResult counted2 = reconstruct_inductive(wrapped2.oracle, config);
    mismatches += plain2.kind != counted2.kind || max_abs(plain2.w - counted2.w) != 0.0;
    bad_counts += wrapped2.count() != 3 * n + config.n_verify;
  }
  return {mismatches == 0 && bad_counts == 0,
          std::to_string(fixtures.size()) + " fixtures, " + std::to_string(mismatches) +
              " output changes, " + std::to_string(bad_counts) +
              " counts off N^2+1+n_verify (canonical) / 3N+n_verify (inductive)"};
}

Outcome c11() {
  Rng rng(111);
  const RandomOracle o = random_oracle(rng, 64, LiftKind::unitary);
  const auto t0 = Clock::now();
  const LiftResult c = reconstruct_canonical(o.oracle);
  const LiftResult d = reconstruct_inductive(o.oracle);
  const double secs = seconds_since(t0);
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  const double mb = usage.ru_maxrss / 1024.0;
  const bool ok = c.kind == LiftKind::unitary && d.kind == LiftKind::unitary &&
                  phase_agreement(c.w, d.w).max_deviation < 1e-8;
  return {ok && secs < 10.0 && mb < 512.0,
          "N=64 both methods " + fmt("%.2f s", secs) + ", peak RSS " + fmt("%.0f MB", mb) +
              (ok ? "" : ", LIFT WRONG")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"C1 round-trip unitary", c1},
      {"C2 round-trip antiunitary", c2},
      {"C3 sign uniformity", c3},
      {"C4 latitude constancy", c4},
      {"C5 real-vector invariance", c5},
      {"C6 qubit classification", c6},
      {"C7 coset law", c7},
      {"C8 transpose and depolarizing", c8},
      {"C9 cross-method agreement", c9},
      {"C10 black-box discipline", c10},
      {"C11 scale N=64", c11},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
