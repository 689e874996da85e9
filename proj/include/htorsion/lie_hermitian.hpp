#pragma once

// Lie algebras with integrable complex structure, presented by structure
// constants on a left-invariant (1,0)-coframe phi:
//
//   d phi_j = -1/2 sum_{i,k} C^j_{ik} phi_i ^ phi_k - sum_{i,k} conj(D^i_{jk}) phi_i ^ conj(phi_k)
//
// Equivalently, for the dual frame e,
//
//   [e_i, e_k]       = sum_j C^j_{ik} e_j
//   [e_i, conj(e_k)] = sum_j conj(D^i_{jk}) e_j - sum_j D^k_{ji} conj(e_j)
//
// D is stored as D(j, i, k) = D^j_{ik}, so the term of d phi_j above reads
// D(i, j, k). In a unitary frame D^j_{ik} are the Chern connection coefficients.
//
// Frame changes follow e~ = e P (e~_a = sum_i e_i P_{ia}) with coframe
// phi~ = P^{-1} phi. From the bracket relations
//
//   C~^c_{ab} = sum (P^{-1})_{cj} C^j_{ik} P_{ia} P_{kb}
//   D~^a_{cb} = sum conj((P^{-1})_{cj}) conj(P_{ia}) P_{kb} D^i_{jk}
//
// and the Gram matrix transforms as H~ = P^T H conj(P).

#include <string>
#include <string_view>
#include <vector>

#include "htorsion/tensor_algebra.hpp"

namespace htorsion {

struct StructureConstants {
  StructureConstants() = default;
  explicit StructureConstants(int n) : n(n), C(n), D(n) {}

  int n = 0;
  CTensor3 C;  ///< C(j, i, k) = C^j_{ik}
  CTensor3 D;  ///< D(j, i, k) = D^j_{ik}
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double residual = 0.0;
};

/// Named checks of the structure equations. `ok()` covers the checks that
/// decide validity; the unimodularity entry is informational.
struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool ok() const;
  const ValidationCheck& get(std::string_view name) const;
};

inline constexpr double kStructureTolerance = 1e-10;

ValidationReport validate(const StructureConstants& sc, double tol = kStructureTolerance);

/// Real Lie algebra of dimension 2n with almost complex structure J.
/// f(c, a, b) = f^c_{ab} with [X_a, X_b] = sum_c f^c_{ab} X_c, and J acts on
/// coordinate columns: J X_a = sum_b J(b, a) X_b.
struct RealLieData {
  RealLieData() = default;
  explicit RealLieData(int dim);

  double& f(int c, int a, int b) { return coeffs[index(c, a, b)]; }
  double f(int c, int a, int b) const { return coeffs[index(c, a, b)]; }

  int dim = 0;
  std::vector<double> coeffs;
  Eigen::MatrixXd J;

 private:
  std::size_t index(int c, int a, int b) const {
    return (static_cast<std::size_t>(c) * dim + a) * dim + b;
  }
};

/// Maximum deviation from J^2 = -1, antisymmetry of f and the real Jacobi identity.
double real_jacobi_residual(const RealLieData& rl);

/// Builds (1,0)-frame structure constants. The frame is e = (X - i J X)/2 over
/// the first real basis vectors that give independent (1,0)-vectors.
/// Throws NotIntegrable, JacobiViolation or InvalidInput.
StructureConstants complexify(const RealLieData& rl);

/// Inverse of complexify on the adapted real basis X_{2k} = e_k + conj(e_k),
/// X_{2k+1} = i (e_k - conj(e_k)), J X_{2k} = X_{2k+1}.
RealLieData realify(const StructureConstants& sc);

/// Structure constants of the frame e P. Throws SingularFrame.
StructureConstants frame_change(const StructureConstants& sc, const CMat& p);
double frame_condition_number(const CMat& p);

/// Left-invariant Hermitian structure: constants plus the Gram matrix
/// H(i, j) = <e_i, conj(e_j)> of the reference frame.
struct HermitianStructure {
  StructureConstants sc;
  HermMat H;
};

/// Checks dimensions and positivity. Throws DimensionMismatch / NotPositiveDefinite.
HermitianStructure make_structure(StructureConstants sc, const CMat& metric);
HermitianStructure frame_change(const HermitianStructure& hs, const CMat& p);

/// Invariant volume relative to the identity metric: det H.
double volume(const HermitianStructure& hs);

struct UnitaryReduction {
  CMat P;                ///< (L^T)^{-1} for the Cholesky factor L of H
  StructureConstants sc; ///< constants in the unitary frame e P
};

UnitaryReduction unitary_reduction(const HermitianStructure& hs);

/// d phi_g for a single generator (g in [0, 2n)).
InvariantForm exterior_d_generator(const StructureConstants& sc, int g);
/// Exterior derivative extended by the graded Leibniz rule.
InvariantForm exterior_d(const InvariantForm& a, const StructureConstants& sc);

/// Named examples; every entry comes with the identity metric.
/// Names: abelian-N, so3c, sokc-K (K >= 3), iwasawa, kodaira-thurston.
HermitianStructure catalog(std::string_view name);
std::vector<std::string> catalog_names();
std::string catalog_description(std::string_view name);

/// Real data whose complexification reproduces catalog("kodaira-thurston").
RealLieData kodaira_thurston_real();

}  // namespace htorsion
