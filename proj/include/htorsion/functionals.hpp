#pragma once

// Torsion functional F = V^{(1-n)/n} int |T|^2 dv and Gauduchon functional
// G = V^{(1-n)/n} int |eta|^2 dv for invariant metrics. Integrals reduce to
// value * V with V = det H, so F = V^{1/n} |T|^2 and G = V^{1/n} |eta|^2.
//
// Residual matrices are (1,1)-coefficient matrices in the unitary frame of
// the package they were computed from.

#include "htorsion/lie_hermitian.hpp"
#include "htorsion/torsion_engine.hpp"

namespace htorsion {

struct Residual {
  CMat Q;
  double norm = 0.0;  ///< Frobenius norm of Q
};

struct ResidualReport {
  double F_value = 0.0;
  double G_value = 0.0;
  double b = 0.0;  ///< average of |T|^2 (pointwise here)
  double a = 0.0;  ///< |eta|^2 / n
  CMat Q_F;
  CMat Q_G;
  double trace_residual = 0.0;
  double Q_F_norm = 0.0;
  double Q_G_norm = 0.0;
};

double torsion_functional(const HermitianStructure& hs);
double gauduchon_functional(const HermitianStructure& hs);

/// 2A - B + 2 herm(phi) - 2 herm(xi) - (|T|^2 - (n-1)/n b) I with b = |T|^2,
/// herm(X) = X + X^*. Zero exactly at torsion-critical metrics.
Residual torsion_critical_residual(const TorsionPackage& pkg);
Residual torsion_critical_residual(const HermitianStructure& hs);

/// Coefficients of sqrt(-1)(del conj(eta) - delbar eta - eta ^ conj(eta)) - a I,
/// a = |eta|^2 / n, with delbar eta taken from the exterior derivative.
Residual gauduchon_critical_residual(const TorsionPackage& pkg);
Residual gauduchon_critical_residual(const HermitianStructure& hs);

/// 4(|eta|^2 - chi); the right-hand side (n-1)(|T|^2 - b) vanishes for invariant metrics.
double conformal_trace_residual(const TorsionPackage& pkg);
double conformal_trace_residual(const HermitianStructure& hs);

ResidualReport residual_report(const HermitianStructure& hs, const TorsionPackage& pkg);
ResidualReport residual_report(const HermitianStructure& hs);

/// Chern torsion expressed in the reference frame of `hs`.
CTensor3 torsion_in_reference_frame(const HermitianStructure& hs);

/// d/dt of the reference-frame torsion along H + t h, from
/// (h_{k lbar, i} - h_{i lbar, k}) g^{lbar j} evaluated in the unitary frame.
CTensor3 torsion_variation(const HermitianStructure& hs, const HermMat& h);

/// Normalization V^{1/n} of the invariant pairing.
double first_variation_normalization(const HermitianStructure& hs);

/// The variation tensor Q = B - 2A - 2 herm(phi) + 2 herm(xi) + (|T|^2 + (1-n)/n b) I
/// (equal to -Q_F) in the unitary frame of `pkg`.
CMat first_variation_tensor(const TorsionPackage& pkg);

/// d/dt F(H + t h) at t = 0, as V^{1/n} Re <h, Q> in the unitary frame.
double first_variation(const HermitianStructure& hs, const HermMat& h);

}  // namespace htorsion
