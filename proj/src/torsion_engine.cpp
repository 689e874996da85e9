#include "htorsion/torsion_engine.hpp"

#include <cmath>

#include "htorsion/errors.hpp"

namespace htorsion {

CTensor3 chern_connection(const StructureConstants& sc_u) { return sc_u.D; }

CTensor3 chern_torsion(const StructureConstants& sc_u) {
  const int n = sc_u.n;
  CTensor3 t(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) t(j, i, k) = -sc_u.C(j, i, k) - sc_u.D(j, i, k) + sc_u.D(j, k, i);
  return t;
}

CVec torsion_one_form(const CTensor3& T) {
  const int n = T.dim();
  CVec eta = CVec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n; ++r) eta(i) += T(r, r, i);
  return eta;
}

CVec torsion_one_form_from_connection(const CTensor3& Gamma) {
  const int n = Gamma.dim();
  CVec eta = CVec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < n; ++s) eta(i) += Gamma(s, i, s);
  return eta;
}

std::pair<CMat, CMat> ab_tensors(const CTensor3& T) {
  const int n = T.dim();
  CMat a = CMat::Zero(n, n);
  CMat b = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex sa{};
      Complex sb{};
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          sa += T(r, i, s) * std::conj(T(r, j, s));
          sb += T(j, r, s) * std::conj(T(i, r, s));
        }
      a(i, j) = sa;
      b(i, j) = sb;
    }
  return {a, b};
}

CTensor4 covariant_derivative_T(const CTensor3& T, const CTensor3& Gamma) {
  const int n = T.dim();
  CTensor4 dt(n);
  if (Gamma.max_abs() == 0.0) return dt;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex s{};
          for (int r = 0; r < n; ++r) {
            s += T(j, r, k) * std::conj(Gamma(i, r, l)) + T(j, i, r) * std::conj(Gamma(k, r, l)) -
                 T(r, i, k) * std::conj(Gamma(r, j, l));
          }
          dt(j, i, k, l) = s;
        }
  return dt;
}

CTensor4 covariant_derivative_T_holomorphic(const CTensor3& T, const CTensor3& Gamma) {
  const int n = T.dim();
  CTensor4 dt(n);
  if (Gamma.max_abs() == 0.0) return dt;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex s{};
          for (int r = 0; r < n; ++r) {
            s += T(r, i, k) * Gamma(j, r, l) - Gamma(r, i, l) * T(j, r, k) - Gamma(r, k, l) * T(j, i, r);
          }
          dt(j, i, k, l) = s;
        }
  return dt;
}

PhiXi phi_xi_tensors(const CTensor3& T, const CTensor4& DT, const CVec& eta) {
  const int n = T.dim();
  PhiXi out{CMat::Zero(n, n), CMat::Zero(n, n), Complex{}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex p{};
      Complex x{};
      for (int r = 0; r < n; ++r) {
        p += T(j, i, r) * std::conj(eta(r));
        x += DT(j, i, r, r);
      }
      out.phi(i, j) = p;
      out.xi(i, j) = x;
    }
  out.chi = out.xi.trace();
  return out;
}

CMat xi_closed_form(const CTensor3& T, const CTensor3& D, const CMat& phi) {
  const int n = T.dim();
  CMat xi = phi;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex s{};
      for (int r = 0; r < n; ++r)
        for (int q = 0; q < n; ++q) {
          s += T(j, r, q) * std::conj(D(i, r, q)) - T(r, i, q) * std::conj(D(r, j, q));
        }
      xi(i, j) += s;
    }
  return xi;
}

Complex chi_from_eta(const CVec& eta, const CTensor3& Gamma) {
  const int n = Gamma.dim();
  Complex chi{};
  for (int r = 0; r < n; ++r)
    for (int m = 0; m < n; ++m) chi += std::conj(Gamma(r, m, r)) * eta(m);
  return chi;
}

InvariantForm del_omega(const CTensor3& T) {
  const int n = T.dim();
  InvariantForm out(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (i == k) continue;
      for (int j = 0; j < n; ++j) {
        const Complex c = T(j, i, k);
        if (c == Complex{}) continue;
        out += InvariantForm::monomial(n, {i, k, n + j}, kDelOmegaFactor * kI * c);
      }
    }
  return out;
}

TorsionPackage analyze_unitary(const StructureConstants& sc_u) {
  const int n = sc_u.n;
  TorsionPackage pkg;
  pkg.n = n;
  pkg.frame = CMat::Identity(n, n);
  pkg.frame_sc = sc_u;
  pkg.Gamma = chern_connection(sc_u);
  pkg.T = chern_torsion(sc_u);
  if (!pkg.T.all_finite()) throw NumericalFailure("torsion has non-finite components");
  pkg.DT = covariant_derivative_T(pkg.T, pkg.Gamma);
  pkg.eta = torsion_one_form(pkg.T);
  std::tie(pkg.A, pkg.B) = ab_tensors(pkg.T);
  const PhiXi px = phi_xi_tensors(pkg.T, pkg.DT, pkg.eta);
  pkg.phi = px.phi;
  pkg.xi = px.xi;
  pkg.chi = px.chi.real();
  pkg.chi_imag = px.chi.imag();
  pkg.normT2 = pkg.T.squared_norm();
  pkg.normEta2 = pkg.eta.squaredNorm();
  pkg.lee = Eigen::VectorXd::Zero(2 * n);
  for (int k = 0; k < n; ++k) {
    pkg.lee(2 * k) = -2.0 * pkg.eta(k).real();
    pkg.lee(2 * k + 1) = 2.0 * pkg.eta(k).imag();
  }
  return pkg;
}

TorsionPackage analyze(const HermitianStructure& hs) {
  UnitaryReduction red = unitary_reduction(hs);
  TorsionPackage pkg = analyze_unitary(red.sc);
  pkg.frame = std::move(red.P);
  return pkg;
}

}  // namespace htorsion
