#pragma once

// Special-metric predicates on an analyzed Hermitian structure.

#include <optional>
#include <vector>

#include "htorsion/lie_hermitian.hpp"
#include "htorsion/torsion_engine.hpp"

namespace htorsion {

struct FlagResidual {
  bool flag = false;
  double residual = 0.0;
};

/// Strominger (Bismut) covariant derivative of the Chern torsion,
/// split by direction: holo(j,i,k,l) = (nabla^s_{e_l} T)^j_{ik},
/// anti(j,i,k,l) = (nabla^s_{conj e_l} T)^j_{ik}.
struct StromingerDerivative {
  CTensor4 holo;
  CTensor4 anti;
};

struct StpResult {
  bool flag = false;
  double residual = 0.0;  ///< max |nabla^s T|
  StromingerDerivative derivative;
  /// Consistency identities, only meaningful when flag is true.
  double commabar_residual = 0.0;  ///< barred derivative formula
  double comma_residual = 0.0;     ///< unbarred derivative formula
  double quadratic_residual = 0.0; ///< cyclic quadratic identity
  double eta_contraction = 0.0;    ///< max_{i,k} |sum_r eta_r T^r_{ik}|
  double phi_xi_residual = 0.0;    ///< max |(phi - xi) - (B - A)|
};

struct NilpotentJResult {
  bool flag = false;
  /// Ordering of the frame, new position a holds old index perm[a].
  std::optional<std::vector<int>> witness;
};

struct ClassificationReport {
  double tol = 0.0;
  FlagResidual kahler;       ///< max |T|
  FlagResidual balanced;     ///< max |eta|
  FlagResidual gauduchon;    ///< | |eta|^2 - chi |
  FlagResidual pluriclosed;  ///< norm of the (2,2)-part of d((1,2)-part of d omega)
  FlagResidual lck_shape;    ///< max deviation of T from the LCK shape
  FlagResidual stp;          ///< max |nabla^s T|
  NilpotentJResult nilpotent_J;  ///< checked over frame reorderings only
};

ClassificationReport classify(const TorsionPackage& pkg, const HermitianStructure& hs, double tol);

/// T^j_{ik} = (delta_ij eta_k - delta_kj eta_i) / (n - 1).
CTensor3 lck_torsion(const CVec& eta);
/// Closed forms of A, B and phi for the LCK shape.
CMat lck_A(const CVec& eta);
CMat lck_B(const CVec& eta);
CMat lck_phi(const CVec& eta);

FlagResidual lck_check(const TorsionPackage& pkg, double tol);

StromingerDerivative strominger_derivative(const TorsionPackage& pkg);
StpResult stp_check(const TorsionPackage& pkg, double tol);

/// Norm of the (2,2)-part of d applied to the (1,2)-part of d omega.
double pluriclosed_residual(const TorsionPackage& pkg);

/// Looks for an ordering of the frame with C^j_{ik} = D^i_{jk} = 0 unless
/// j > i, k (entries with modulus <= tol count as zero). Returns the
/// lexicographically smallest ordering when one exists.
NilpotentJResult nilpotent_J_check(const StructureConstants& sc, double tol = 0.0);

}  // namespace htorsion
