#include "htorsion/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace htorsion {

namespace {

double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

CTensor3 lck_torsion(const CVec& eta) {
  const int n = static_cast<int>(eta.size());
  CTensor3 t(n);
  if (n < 2) return t;
  const double s = 1.0 / (n - 1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        Complex v{};
        if (i == j) v += eta(k);
        if (k == j) v -= eta(i);
        t(j, i, k) = s * v;
      }
  return t;
}

CMat lck_A(const CVec& eta) {
  const int n = static_cast<int>(eta.size());
  const double s = 1.0 / ((n - 1.0) * (n - 1.0));
  return s * (eta.squaredNorm() * CMat::Identity(n, n) + (n - 2.0) * eta * eta.adjoint());
}

CMat lck_B(const CVec& eta) {
  const int n = static_cast<int>(eta.size());
  const double s = 2.0 / ((n - 1.0) * (n - 1.0));
  return s * (eta.squaredNorm() * CMat::Identity(n, n) - eta * eta.adjoint());
}

CMat lck_phi(const CVec& eta) {
  const int n = static_cast<int>(eta.size());
  return (eta.squaredNorm() * CMat::Identity(n, n) - eta * eta.adjoint()) / (n - 1.0);
}

FlagResidual lck_check(const TorsionPackage& pkg, double tol) {
  const double r = (pkg.T - lck_torsion(pkg.eta)).max_abs();
  return {r <= tol, r};
}

StromingerDerivative strominger_derivative(const TorsionPackage& pkg) {
  const int n = pkg.n;
  const CTensor3& t = pkg.T;
  const CTensor4 holo = covariant_derivative_T_holomorphic(t, pkg.Gamma);
  const CTensor4 anti = covariant_derivative_T(t, pkg.Gamma);
  StromingerDerivative out{CTensor4(n), CTensor4(n)};
  // (nabla^s - nabla) e_i = sum_j sum_r (T^j_{ir} phi_r - conj(T^i_{jr}) conj(phi_r)) e_j
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex h = holo(j, i, k, l);
          Complex a = anti(j, i, k, l);
          for (int r = 0; r < n; ++r) {
            h += t(r, i, k) * t(j, r, l) - t(r, i, l) * t(j, r, k) - t(r, k, l) * t(j, i, r);
            a += -t(r, i, k) * std::conj(t(r, j, l)) + std::conj(t(i, r, l)) * t(j, r, k) +
                 std::conj(t(k, r, l)) * t(j, i, r);
          }
          out.holo(j, i, k, l) = h;
          out.anti(j, i, k, l) = a;
        }
  return out;
}

StpResult stp_check(const TorsionPackage& pkg, double tol) {
  const int n = pkg.n;
  const CTensor3& t = pkg.T;
  StpResult res;
  res.derivative = strominger_derivative(pkg);
  res.residual = std::max(res.derivative.holo.max_abs(), res.derivative.anti.max_abs());
  res.flag = res.residual <= tol;

  const CTensor4 holo = covariant_derivative_T_holomorphic(t, pkg.Gamma);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex quad{};
          Complex bar{};
          for (int r = 0; r < n; ++r) {
            quad += t(j, r, k) * t(r, i, l) + t(j, i, r) * t(r, k, l) - t(r, i, k) * t(j, r, l);
            bar += -t(j, r, k) * std::conj(t(i, r, l)) - t(j, i, r) * std::conj(t(k, r, l)) +
                   t(r, i, k) * std::conj(t(r, j, l));
          }
          res.comma_residual = std::max(res.comma_residual, std::abs(holo(j, i, k, l) - quad));
          res.commabar_residual = std::max(res.commabar_residual, std::abs(pkg.DT(j, i, k, l) - bar));
          res.quadratic_residual = std::max(res.quadratic_residual, std::abs(quad));
        }

  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      Complex s{};
      for (int r = 0; r < n; ++r) s += pkg.eta(r) * t(r, i, k);
      res.eta_contraction = std::max(res.eta_contraction, std::abs(s));
    }
  res.phi_xi_residual = max_abs(CMat((pkg.phi - pkg.xi) - (pkg.B - pkg.A)));
  return res;
}

double pluriclosed_residual(const TorsionPackage& pkg) {
  const StructureConstants& sc = pkg.frame_sc;
  const InvariantForm omega = InvariantForm::kahler_form(sc.n);
  const InvariantForm dbar_omega = bidegree_part(exterior_d(omega, sc), 1, 2);
  const InvariantForm ddbar = bidegree_part(exterior_d(dbar_omega, sc), 2, 2);
  return std::sqrt(ddbar.squared_norm());
}

NilpotentJResult nilpotent_J_check(const StructureConstants& sc, double tol) {
  const int n = sc.n;
  // before[a][b]: a must be placed before b
  std::vector<std::vector<bool>> before(n, std::vector<bool>(n, false));
  bool feasible = true;
  auto require = [&](int lower, int upper) {
    if (lower == upper) feasible = false;
    else before[lower][upper] = true;
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        // C^j_{ik} needs j > i, k
        if (std::abs(sc.C(j, i, k)) > tol) {
          require(i, j);
          require(k, j);
        }
        // D^i_{jk} needs j > i, k
        if (std::abs(sc.D(i, j, k)) > tol) {
          require(i, j);
          require(k, j);
        }
      }
  if (!feasible) return {};

  std::vector<int> indegree(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (before[a][b]) ++indegree[b];
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int a = 0; a < n; ++a)
    if (indegree[a] == 0) ready.push(a);
  std::vector<int> order;
  while (!ready.empty()) {
    const int a = ready.top();
    ready.pop();
    order.push_back(a);
    for (int b = 0; b < n; ++b)
      if (before[a][b] && --indegree[b] == 0) ready.push(b);
  }
  if (static_cast<int>(order.size()) != n) return {};
  return {true, std::move(order)};
}

ClassificationReport classify(const TorsionPackage& pkg, const HermitianStructure& /*hs*/, double tol) {
  ClassificationReport rep;
  rep.tol = tol;
  const double t_max = pkg.T.max_abs();
  rep.kahler = {t_max <= tol, t_max};
  const double eta_max = max_abs(CMat(pkg.eta));
  rep.balanced = {eta_max <= tol, eta_max};
  const double gau = std::abs(pkg.normEta2 - pkg.chi);
  rep.gauduchon = {gau <= tol, gau};
  const double pc = pluriclosed_residual(pkg);
  rep.pluriclosed = {pc <= tol, pc};
  rep.lck_shape = lck_check(pkg, tol);
  const StpResult stp = stp_check(pkg, tol);
  rep.stp = {stp.flag, stp.residual};
  rep.nilpotent_J = nilpotent_J_check(pkg.frame_sc, tol);
  return rep;
}

}  // namespace htorsion
