#include "htorsion/functionals.hpp"

#include <cmath>

#include "htorsion/errors.hpp"

namespace htorsion {

namespace {

double volume_factor(const HermitianStructure& hs) {
  return std::pow(volume(hs), 1.0 / hs.sc.n);
}

CMat herm(const CMat& x) { return x + x.adjoint(); }

InvariantForm one_form(const CVec& coeffs) {
  const int n = static_cast<int>(coeffs.size());
  InvariantForm f(n);
  for (int i = 0; i < n; ++i) f.add(InvariantForm::Mask{1} << i, coeffs(i));
  return f;
}

}  // namespace

double torsion_functional(const HermitianStructure& hs) {
  return volume_factor(hs) * analyze(hs).normT2;
}

double gauduchon_functional(const HermitianStructure& hs) {
  return volume_factor(hs) * analyze(hs).normEta2;
}

Residual torsion_critical_residual(const TorsionPackage& pkg) {
  const int n = pkg.n;
  const double b = pkg.normT2;
  const double shift = pkg.normT2 - (static_cast<double>(n - 1) / n) * b;
  const CMat q = 2.0 * pkg.A - pkg.B + 2.0 * herm(pkg.phi) - 2.0 * herm(pkg.xi) -
           shift * CMat::Identity(n, n);
  return {q, q.norm()};
}

Residual torsion_critical_residual(const HermitianStructure& hs) {
  return torsion_critical_residual(analyze(hs));
}

Residual gauduchon_critical_residual(const TorsionPackage& pkg) {
  const int n = pkg.n;
  const InvariantForm eta = one_form(pkg.eta);
  const InvariantForm delbar_eta = bidegree_part(exterior_d(eta, pkg.frame_sc), 1, 1);
  const InvariantForm del_etabar = conjugate_form(delbar_eta);
  const InvariantForm lhs = kI * (del_etabar - delbar_eta - wedge(eta, conjugate_form(eta)));
  const double a = pkg.normEta2 / n;
  const CMat q = lhs.hermitian_coefficients() - a * CMat::Identity(n, n);
  return {q, q.norm()};
}

Residual gauduchon_critical_residual(const HermitianStructure& hs) {
  return gauduchon_critical_residual(analyze(hs));
}

double conformal_trace_residual(const TorsionPackage& pkg) {
  return 4.0 * (pkg.normEta2 - pkg.chi);
}

double conformal_trace_residual(const HermitianStructure& hs) {
  return conformal_trace_residual(analyze(hs));
}

ResidualReport residual_report(const HermitianStructure& hs, const TorsionPackage& pkg) {
  ResidualReport r;
  const double vf = volume_factor(hs);
  r.F_value = vf * pkg.normT2;
  r.G_value = vf * pkg.normEta2;
  r.b = pkg.normT2;
  r.a = pkg.normEta2 / pkg.n;
  const Residual qf = torsion_critical_residual(pkg);
  const Residual qg = gauduchon_critical_residual(pkg);
  r.Q_F = qf.Q;
  r.Q_F_norm = qf.norm;
  r.Q_G = qg.Q;
  r.Q_G_norm = qg.norm;
  r.trace_residual = conformal_trace_residual(pkg);
  return r;
}

ResidualReport residual_report(const HermitianStructure& hs) { return residual_report(hs, analyze(hs)); }

CTensor3 torsion_in_reference_frame(const HermitianStructure& hs) {
  const TorsionPackage pkg = analyze(hs);
  const int n = pkg.n;
  const CMat& p = pkg.frame;
  const CMat pinv = p.inverse();
  CTensor3 out(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        Complex s{};
        for (int c = 0; c < n; ++c)
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s += p(j, c) * pkg.T(c, a, b) * pinv(a, i) * pinv(b, k);
        out(j, i, k) = s;
      }
  return out;
}

CTensor3 torsion_variation(const HermitianStructure& hs, const HermMat& h) {
  const int n = hs.sc.n;
  if (h.dim() != n) throw DimensionMismatch("variation direction has wrong size");
  const TorsionPackage pkg = analyze(hs);
  const CMat& p = pkg.frame;
  const CMat hu = p.transpose() * h.matrix() * p.conjugate();
  const CTensor3& g = pkg.Gamma;

  // dh(a, b, i) = h_{a bbar, i}
  CTensor3 dh(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < n; ++i) {
        Complex s{};
        for (int m = 0; m < n; ++m) s += -g(m, a, i) * hu(m, b) + g(b, m, i) * hu(a, m);
        dh(a, b, i) = s;
      }
  CTensor3 tdot_u(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) tdot_u(j, i, k) = dh(k, j, i) - dh(i, j, k);

  const CMat pinv = p.inverse();
  CTensor3 out(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        Complex s{};
        for (int c = 0; c < n; ++c)
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s += p(j, c) * tdot_u(c, a, b) * pinv(a, i) * pinv(b, k);
        out(j, i, k) = s;
      }
  return out;
}

double first_variation_normalization(const HermitianStructure& hs) { return volume_factor(hs); }

CMat first_variation_tensor(const TorsionPackage& pkg) { return -torsion_critical_residual(pkg).Q; }

double first_variation(const HermitianStructure& hs, const HermMat& h) {
  if (h.dim() != hs.sc.n) throw DimensionMismatch("variation direction has wrong size");
  const TorsionPackage pkg = analyze(hs);
  const CMat hu = pkg.frame.transpose() * h.matrix() * pkg.frame.conjugate();
  const CMat q = first_variation_tensor(pkg);
  // <h, conj Q> = sum h_{i jbar} conj(Q_{i jbar}) in a unitary frame
  const Complex pairing = (hu.array() * q.array().conjugate()).sum();
  return first_variation_normalization(hs) * pairing.real();
}

}  // namespace htorsion
