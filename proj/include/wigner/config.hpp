#pragma once

#include <cstdint>

namespace wigner {

// Numerical tolerances shared by every module.
struct Tolerances {
  double norm = 1e-12;     // |<psi|psi> - 1| for unit vectors and Bloch vectors
  double herm = 1e-10;     // Hermiticity and unit trace of projectors
  double purity = 1e-8;    // |1 - Tr(M^2)| and rank-1 factorization residual
  double gauge_eps = 1e-7; // smallest modulus treated as a nonzero component
  double unitary = 1e-10;  // ||U^dag U - I||_max, orthogonality of Bloch actions
  double onb = 1e-8;       // orthonormality of basis images
  double phase = 1e-8;     // phase readouts, circle moduli
};

inline constexpr Tolerances default_tolerances{};

enum class Method { canonical, inductive, both };

struct RunConfig {
  Method method = Method::both;
  double tol = 1e-9;        // verification residual bound
  int n_verify = 100;       // random rays used to verify a lift
  int n_pairs = 200;        // random pairs for the symmetry-condition check
  std::uint64_t seed = 42;
  int max_dim = 64;
  Tolerances tolerances{};
};

}  // namespace wigner
