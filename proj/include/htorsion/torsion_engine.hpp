#pragma once

// Chern connection, Chern torsion and the tensors built from it, for
// structure constants given in a unitary frame.
//
// With the bracket conventions of lie_hermitian.hpp the Chern connection of a
// left-invariant unitary frame is
//
//   nabla_{e_k} e_i = sum_j Gamma^j_{ik} e_j,   Gamma^j_{ik} = D^j_{ik}
//   nabla_{conj e_k} e_i = -sum_j conj(Gamma^i_{jk}) e_j
//
// and T(e_i, e_k) = sum_j T^j_{ik} e_j with T^j_{ik} = -C^j_{ik} - D^j_{ik} + D^j_{ki}.
// Frame derivatives of invariant components vanish, so covariant derivatives
// reduce to connection terms.

#include <utility>

#include "htorsion/lie_hermitian.hpp"
#include "htorsion/tensor_algebra.hpp"

namespace htorsion {

struct TorsionPackage {
  int n = 0;
  CMat frame;                    ///< unitary frame P (e_unitary = e P)
  StructureConstants frame_sc;   ///< structure constants in the unitary frame
  CTensor3 Gamma;                ///< Gamma^j_{ik}
  CTensor3 T;                    ///< T^j_{ik}
  CTensor4 DT;                   ///< T^j_{ik, conj l}
  CVec eta;                      ///< eta_i = sum_r T^r_{ri}
  CMat A;                        ///< A_{i jbar}
  CMat B;                        ///< B_{i jbar}
  CMat phi;                      ///< phi(i, j) = phi_i^j
  CMat xi;                       ///< xi(i, j) = xi_i^j
  double chi = 0.0;              ///< sum_r eta_{r, rbar} (real part)
  double chi_imag = 0.0;         ///< imaginary part of the trace, kept as a diagnostic
  double normT2 = 0.0;           ///< sum_{i,j,k} |T^j_{ik}|^2
  double normEta2 = 0.0;         ///< sum_r |eta_r|^2
  /// Lee form -(eta + conj eta) on the adapted real coframe x^{2k}, x^{2k+1}
  /// with phi_k = x^{2k} + i x^{2k+1}.
  Eigen::VectorXd lee;
};

CTensor3 chern_connection(const StructureConstants& sc_u);
CTensor3 chern_torsion(const StructureConstants& sc_u);

/// eta_i = sum_r T^r_{ri}
CVec torsion_one_form(const CTensor3& T);
/// eta_i = sum_s D^s_{is}; agrees with torsion_one_form exactly when the
/// algebra is unimodular.
CVec torsion_one_form_from_connection(const CTensor3& Gamma);

std::pair<CMat, CMat> ab_tensors(const CTensor3& T);

/// T^j_{ik, conj l} = sum_r (T^j_{rk} conj(Gamma^i_{rl}) + T^j_{ir} conj(Gamma^k_{rl})
///                           - T^r_{ik} conj(Gamma^r_{jl}))
CTensor4 covariant_derivative_T(const CTensor3& T, const CTensor3& Gamma);
/// (1,0)-direction derivative T^j_{ik, l}.
CTensor4 covariant_derivative_T_holomorphic(const CTensor3& T, const CTensor3& Gamma);

struct PhiXi {
  CMat phi;
  CMat xi;
  Complex chi;  ///< trace of xi
};

PhiXi phi_xi_tensors(const CTensor3& T, const CTensor4& DT, const CVec& eta);

/// xi_i^j = sum_{r,s} (T^j_{rs} conj(D^i_{rs}) - T^r_{is} conj(D^r_{js})) + phi_i^j.
/// Valid for unimodular algebras; used as a cross-check of phi_xi_tensors.
CMat xi_closed_form(const CTensor3& T, const CTensor3& D, const CMat& phi);

/// chi from the covariant derivative of eta: eta_{i, conj l} = sum_m conj(Gamma^i_{ml}) eta_m.
Complex chi_from_eta(const CVec& eta, const CTensor3& Gamma);

/// (2,1)-part of d omega in a unitary frame,
/// kDelOmegaFactor * sqrt(-1) sum_{i,j,k} T^j_{ik} phi_i ^ phi_k ^ conj(phi_j).
inline constexpr double kDelOmegaFactor = 0.5;
InvariantForm del_omega(const CTensor3& T);

/// Full pipeline: unitary reduction followed by every tensor above.
TorsionPackage analyze(const HermitianStructure& hs);
/// Same pipeline on structure constants that are already unitary.
TorsionPackage analyze_unitary(const StructureConstants& sc_u);

}  // namespace htorsion
