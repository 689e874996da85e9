#include "htorsion/lie_hermitian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "htorsion/errors.hpp"

namespace htorsion {

bool ValidationReport::ok() const {
  for (const auto& c : checks) {
    if (c.name != "unimodular" && !c.passed) return false;
  }
  return true;
}

const ValidationCheck& ValidationReport::get(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw InvalidInput("no validation check named " + std::string(name));
}

ValidationReport validate(const StructureConstants& sc, double tol) {
  const int n = sc.n;
  ValidationReport report;

  const bool finite = sc.C.all_finite() && sc.D.all_finite();
  report.checks.push_back({"finite", finite, finite ? 0.0 : INFINITY});
  if (!finite) return report;

  double antisym = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) antisym = std::max(antisym, std::abs(sc.C(j, i, k) + sc.C(j, k, i)));
  report.checks.push_back({"C_antisymmetry", antisym <= tol, antisym});

  double dd_phi = 0.0;
  double dd_phibar = 0.0;
  for (int j = 0; j < n; ++j) {
    dd_phi = std::max(dd_phi, exterior_d(exterior_d_generator(sc, j), sc).max_abs());
    dd_phibar = std::max(dd_phibar, exterior_d(exterior_d_generator(sc, n + j), sc).max_abs());
  }
  report.checks.push_back({"dd_phi", dd_phi <= tol, dd_phi});
  report.checks.push_back({"dd_phibar", dd_phibar <= tol, dd_phibar});

  // trace of ad on the (1,0) frame vectors; zero for algebras with lattices
  double trace_ad = 0.0;
  for (int i = 0; i < n; ++i) {
    Complex s{};
    for (int r = 0; r < n; ++r) s += sc.C(r, r, i) + sc.D(r, r, i);
    trace_ad = std::max(trace_ad, std::abs(s));
  }
  report.checks.push_back({"unimodular", trace_ad <= tol, trace_ad});
  return report;
}

// --- real data ---------------------------------------------------------------

RealLieData::RealLieData(int dim_)
    : dim(dim_), coeffs(static_cast<std::size_t>(dim_) * dim_ * dim_, 0.0),
      J(Eigen::MatrixXd::Zero(dim_, dim_)) {}

double real_jacobi_residual(const RealLieData& rl) {
  const int m = rl.dim;
  double r = (rl.J * rl.J + Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
  for (int c = 0; c < m; ++c)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) r = std::max(r, std::abs(rl.f(c, a, b) + rl.f(c, b, a)));
  // [[X_a, X_b], X_c] + cyclic = 0
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int e = 0; e < m; ++e) {
          double s = 0.0;
          for (int d = 0; d < m; ++d) {
            s += rl.f(d, a, b) * rl.f(e, d, c) + rl.f(d, b, c) * rl.f(e, d, a) +
                 rl.f(d, c, a) * rl.f(e, d, b);
          }
          r = std::max(r, std::abs(s));
        }
  return r;
}

namespace {

// Bracket of complex vectors given in real-basis coordinates.
CVec real_bracket(const RealLieData& rl, const CVec& u, const CVec& v) {
  const int m = rl.dim;
  CVec w = CVec::Zero(m);
  for (int a = 0; a < m; ++a) {
    if (u(a) == Complex{}) continue;
    for (int b = 0; b < m; ++b) {
      const Complex uv = u(a) * v(b);
      if (uv == Complex{}) continue;
      for (int c = 0; c < m; ++c) w(c) += uv * rl.f(c, a, b);
    }
  }
  return w;
}

}  // namespace

StructureConstants complexify(const RealLieData& rl) {
  const int m = rl.dim;
  if (m <= 0 || m % 2 != 0) throw InvalidInput("real algebra dimension must be even and positive");
  if (rl.J.rows() != m || rl.J.cols() != m) throw DimensionMismatch("J must be dim x dim");
  if (static_cast<int>(rl.coeffs.size()) != m * m * m) throw DimensionMismatch("f has wrong size");
  const int n = m / 2;
  if (n > InvariantForm::kMaxDim) throw DimensionMismatch("complex dimension too large");

  const double jj = (rl.J * rl.J + Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
  if (jj > 1e-12) throw InvalidInput("J does not square to -1");
  if (real_jacobi_residual(rl) > kStructureTolerance) {
    throw JacobiViolation("real structure constants violate antisymmetry or the Jacobi identity");
  }

  // (1,0) frame: e = (X - i J X)/2 over real basis vectors, greedily independent
  const CMat Jc = rl.J.cast<Complex>();
  CMat frame(m, 0);
  for (int a = 0; a < m && frame.cols() < n; ++a) {
    CVec x = CVec::Zero(m);
    x(a) = 1.0;
    const CVec v = 0.5 * (x - kI * (Jc * x));
    CMat trial(m, frame.cols() + 1);
    trial << frame, v;
    Eigen::FullPivLU<CMat> lu(trial);
    lu.setThreshold(1e-10);
    if (lu.rank() == trial.cols()) frame = trial;
  }
  if (frame.cols() != n) throw NumericalFailure("could not build a (1,0) frame");

  CMat basis(m, m);
  basis << frame, frame.conjugate();
  Eigen::FullPivLU<CMat> lu(basis);
  if (!lu.isInvertible()) throw NumericalFailure("(1,0) and (0,1) frames are not complementary");

  StructureConstants sc(n);
  double leak = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const CVec hol = lu.solve(real_bracket(rl, frame.col(i), frame.col(k)));
      for (int j = 0; j < n; ++j) {
        sc.C(j, i, k) = hol(j);
        leak = std::max(leak, std::abs(hol(n + j)));
      }
      const CVec mixed = lu.solve(real_bracket(rl, frame.col(i), frame.col(k).conjugate()));
      for (int j = 0; j < n; ++j) sc.D(i, j, k) = std::conj(mixed(j));
    }
  }
  if (leak > kStructureTolerance) {
    throw NotIntegrable("J is not integrable: (0,2)-component of d phi has size " +
                        std::to_string(leak));
  }
  return sc;
}

RealLieData realify(const StructureConstants& sc) {
  const int n = sc.n;
  const int m = 2 * n;
  // complexified basis E = (e_1..e_n, conj e_1..conj e_n); X in E-coordinates
  CMat x = CMat::Zero(m, m);
  for (int k = 0; k < n; ++k) {
    x(k, 2 * k) = 1.0;
    x(n + k, 2 * k) = 1.0;
    x(k, 2 * k + 1) = kI;
    x(n + k, 2 * k + 1) = -kI;
  }
  // brackets of E basis vectors
  auto bracket_e = [&](int p, int q) {
    CVec w = CVec::Zero(m);
    const bool pbar = p >= n;
    const bool qbar = q >= n;
    const int i = pbar ? p - n : p;
    const int k = qbar ? q - n : q;
    if (!pbar && !qbar) {
      for (int j = 0; j < n; ++j) w(j) = sc.C(j, i, k);
    } else if (pbar && qbar) {
      for (int j = 0; j < n; ++j) w(n + j) = std::conj(sc.C(j, i, k));
    } else if (!pbar && qbar) {
      for (int j = 0; j < n; ++j) {
        w(j) = std::conj(sc.D(i, j, k));
        w(n + j) = -sc.D(k, j, i);
      }
    } else {
      // [conj e_i, e_k] = -[e_k, conj e_i]
      for (int j = 0; j < n; ++j) {
        w(j) = -std::conj(sc.D(k, j, i));
        w(n + j) = sc.D(i, j, k);
      }
    }
    return w;
  };

  const CMat xinv = x.inverse();
  RealLieData rl(m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      CVec w = CVec::Zero(m);
      for (int p = 0; p < m; ++p) {
        if (x(p, a) == Complex{}) continue;
        for (int q = 0; q < m; ++q) {
          if (x(q, b) == Complex{}) continue;
          w += x(p, a) * x(q, b) * bracket_e(p, q);
        }
      }
      const CVec real_coords = xinv * w;
      for (int c = 0; c < m; ++c) rl.f(c, a, b) = real_coords(c).real();
    }
  }
  for (int k = 0; k < n; ++k) {
    rl.J(2 * k + 1, 2 * k) = 1.0;
    rl.J(2 * k, 2 * k + 1) = -1.0;
  }
  return rl;
}

// --- frame changes -------------------------------------------------------------

double frame_condition_number(const CMat& p) {
  Eigen::JacobiSVD<CMat> svd(p);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) == 0.0) return INFINITY;
  return s(0) / s(s.size() - 1);
}

StructureConstants frame_change(const StructureConstants& sc, const CMat& p) {
  const int n = sc.n;
  if (p.rows() != n || p.cols() != n) throw DimensionMismatch("frame change matrix has wrong size");
  if (!all_finite(p) || !(frame_condition_number(p) < 1e12)) {
    throw SingularFrame("frame change matrix is numerically singular");
  }
  const CMat pinv = p.inverse();
  const CMat pinv_bar = pinv.conjugate();
  const CMat p_bar = p.conjugate();

  // contract one index at a time: O(n^4)
  StructureConstants out(n);
  {
    CTensor3 t1(n);  // t1(j, a, k) = sum_i C(j, i, k) P(i, a)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int k = 0; k < n; ++k) {
          Complex s{};
          for (int i = 0; i < n; ++i) s += sc.C(j, i, k) * p(i, a);
          t1(j, a, k) = s;
        }
    CTensor3 t2(n);  // t2(j, a, b) = sum_k t1(j, a, k) P(k, b)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Complex s{};
          for (int k = 0; k < n; ++k) s += t1(j, a, k) * p(k, b);
          t2(j, a, b) = s;
        }
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Complex s{};
          for (int j = 0; j < n; ++j) s += pinv(c, j) * t2(j, a, b);
          out.C(c, a, b) = s;
        }
  }
  {
    // D~(a, c, b) = sum conj(Pinv(c, j)) conj(P(i, a)) P(k, b) D(i, j, k)
    CTensor3 t1(n);  // t1(a, j, k) = sum_i conj(P(i, a)) D(i, j, k)
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Complex s{};
          for (int i = 0; i < n; ++i) s += p_bar(i, a) * sc.D(i, j, k);
          t1(a, j, k) = s;
        }
    CTensor3 t2(n);  // t2(a, c, k) = sum_j conj(Pinv(c, j)) t1(a, j, k)
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        for (int k = 0; k < n; ++k) {
          Complex s{};
          for (int j = 0; j < n; ++j) s += pinv_bar(c, j) * t1(a, j, k);
          t2(a, c, k) = s;
        }
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        for (int b = 0; b < n; ++b) {
          Complex s{};
          for (int k = 0; k < n; ++k) s += t2(a, c, k) * p(k, b);
          out.D(a, c, b) = s;
        }
  }
  return out;
}

HermitianStructure make_structure(StructureConstants sc, const CMat& metric) {
  if (metric.rows() != sc.n || metric.cols() != sc.n) {
    throw DimensionMismatch("metric size does not match the structure dimension");
  }
  HermMat h = HermMat::from(metric, 1e-12);
  if (!h.positive_definite()) throw NotPositiveDefinite("metric is not positive definite");
  return {std::move(sc), std::move(h)};
}

HermitianStructure frame_change(const HermitianStructure& hs, const CMat& p) {
  StructureConstants sc = frame_change(hs.sc, p);
  const CMat h = p.transpose() * hs.H.matrix() * p.conjugate();
  return make_structure(std::move(sc), h);
}

double volume(const HermitianStructure& hs) { return hs.H.matrix().determinant().real(); }

UnitaryReduction unitary_reduction(const HermitianStructure& hs) {
  const CMat l = cholesky(hs.H);
  const int n = hs.sc.n;
  // L is triangular, so the solve is exact up to rounding
  const CMat p = l.transpose().triangularView<Eigen::Upper>().solve(CMat::Identity(n, n));
  return {p, frame_change(hs.sc, p)};
}

// --- exterior derivative -----------------------------------------------------------

InvariantForm exterior_d_generator(const StructureConstants& sc, int g) {
  const int n = sc.n;
  if (g < 0 || g >= 2 * n) throw DimensionMismatch("generator index out of range");
  if (g >= n) return conjugate_form(exterior_d_generator(sc, g - n));
  const int j = g;
  InvariantForm out(n);
  using Mask = InvariantForm::Mask;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (i < k) {
        // -1/2 (C^j_{ik} - C^j_{ki}) phi_i ^ phi_k
        const Complex c = -0.5 * (sc.C(j, i, k) - sc.C(j, k, i));
        out.add((Mask{1} << i) | (Mask{1} << k), c);
      }
      out.add((Mask{1} << i) | (Mask{1} << (n + k)), -std::conj(sc.D(i, j, k)));
    }
  }
  return out;
}

InvariantForm exterior_d(const InvariantForm& a, const StructureConstants& sc) {
  const int n = sc.n;
  if (a.dim() != n) throw DimensionMismatch("form and structure dimensions differ");
  std::vector<InvariantForm> dgen;
  dgen.reserve(2 * n);
  for (int g = 0; g < 2 * n; ++g) dgen.push_back(exterior_d_generator(sc, g));

  InvariantForm out(n);
  for (const auto& [mask, c] : a.terms()) {
    const std::vector<int> gens = InvariantForm::generators_of(mask);
    for (std::size_t m = 0; m < gens.size(); ++m) {
      InvariantForm prefix = InvariantForm::scalar(n, (m % 2 == 0 ? 1.0 : -1.0) * c);
      for (std::size_t t = 0; t < m; ++t) prefix = wedge(prefix, InvariantForm::generator(n, gens[t]));
      InvariantForm term = wedge(prefix, dgen[gens[m]]);
      for (std::size_t t = m + 1; t < gens.size(); ++t) term = wedge(term, InvariantForm::generator(n, gens[t]));
      out += term;
    }
  }
  return out;
}

}  // namespace htorsion
