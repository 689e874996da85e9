#pragma once

// Seeded sampling. Uses std::mt19937_64 (fully specified by the standard) and
// converts its raw output by hand, since the standard distributions are
// implementation-defined and would make traces differ between toolchains.

#include <cstdint>
#include <random>

#include "htorsion/tensor_algebra.hpp"

namespace htorsion {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller).
  double normal();
  /// Real and imaginary parts independent standard normals.
  Complex complex_normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

CMat random_complex_matrix(Rng& rng, int n);
/// Hermitian with Frobenius norm 1.
HermMat random_hermitian_direction(Rng& rng, int n);
/// exp of a random Hermitian matrix of norm `spread`.
HermMat random_positive_definite(Rng& rng, int n, double spread = 1.0);
/// Q factor of a complex Gaussian matrix, phases normalized.
CMat random_unitary(Rng& rng, int n);
/// I + scale * G for a complex Gaussian G, redrawn until well conditioned.
CMat random_invertible(Rng& rng, int n, double scale = 0.5);

}  // namespace htorsion
