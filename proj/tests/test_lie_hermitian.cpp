#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "htorsion/errors.hpp"
#include "htorsion/lie_hermitian.hpp"
#include "htorsion/random.hpp"
#include "oracles.hpp"
#include "structures.hpp"

namespace htorsion {
namespace {

using namespace htorsion::testing;

double bracket_distance(const BracketTable& a, const BracketTable& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, (a[i][j] - b[i][j]).cwiseAbs().maxCoeff());
  return worst;
}

double constants_distance(const StructureConstants& a, const StructureConstants& b) {
  return std::max((a.C - b.C).max_abs(), (a.D - b.D).max_abs());
}

InvariantForm random_form(Rng& rng, int n, int p) {
  InvariantForm f(n);
  for (InvariantForm::Mask mask = 0; mask < (InvariantForm::Mask{1} << (2 * n)); ++mask)
    if (std::popcount(mask) == p) f.add(mask, rng.complex_normal());
  return f;
}

RealLieData standard_j(int m) {
  RealLieData rl(m);
  for (int k = 0; k < m / 2; ++k) {
    rl.J(2 * k + 1, 2 * k) = 1.0;
    rl.J(2 * k, 2 * k + 1) = -1.0;
  }
  return rl;
}

void set_real_bracket(RealLieData& rl, int c, int a, int b, double v) {
  rl.f(c, a, b) = v;
  rl.f(c, b, a) = -v;
}

TEST(ExteriorDerivative, MatchesChevalleyEilenbergOnGenerators) {
  Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const HermitianStructure hs = random_structure(rng, 4);
    const int n = hs.sc.n;
    const BracketTable br = complex_brackets(hs.sc);
    for (int g = 0; g < 2 * n; ++g) {
      const DenseForm expected = chevalley_eilenberg_d(to_dense(InvariantForm::generator(n, g)), 1, br);
      EXPECT_LT(dense_distance(to_dense(exterior_d_generator(hs.sc, g)), expected), 1e-12);
    }
  }
}

TEST(ExteriorDerivative, MatchesChevalleyEilenbergOnHigherForms) {
  Rng rng(2);
  for (int trial = 0; trial < 12; ++trial) {
    const HermitianStructure hs = random_structure(rng, 3);
    const int n = hs.sc.n;
    const BracketTable br = complex_brackets(hs.sc);
    for (int p = 2; p <= 3 && p < 2 * n; ++p) {
      const InvariantForm f = random_form(rng, n, p);
      const DenseForm expected = chevalley_eilenberg_d(to_dense(f), p, br);
      EXPECT_LT(dense_distance(to_dense(exterior_d(f, hs.sc)), expected), 1e-11) << "p=" << p;
    }
  }
}

TEST(ExteriorDerivative, SquaresToZeroAndObeysLeibniz) {
  Rng rng(3);
  for (const auto& name : small_catalog(4)) {
    const StructureConstants sc = catalog(name).sc;
    const int n = sc.n;
    const InvariantForm a = random_form(rng, n, 1);
    const InvariantForm b = random_form(rng, n, 2);
    EXPECT_LT(exterior_d(exterior_d(b, sc), sc).max_abs(), 1e-12) << name;
    const InvariantForm lhs = exterior_d(wedge(a, b), sc);
    const InvariantForm rhs = wedge(exterior_d(a, sc), b) - wedge(a, exterior_d(b, sc));
    EXPECT_LT((lhs - rhs).max_abs(), 1e-12) << name;
    // d is real
    EXPECT_LT((exterior_d(conjugate_form(b), sc) - conjugate_form(exterior_d(b, sc))).max_abs(), 1e-12) << name;
  }
}

TEST(Catalog, StructureEquations) {
  // so3c: d phi_1 = phi_2 ^ phi_3
  const StructureConstants so3 = catalog("so3c").sc;
  const InvariantForm d1 = exterior_d_generator(so3, 0);
  EXPECT_EQ(d1.terms().size(), 1u);
  EXPECT_NEAR(std::abs(d1.coefficient({1, 2}) - 1.0), 0.0, 1e-15);
  // iwasawa: d phi_3 = -phi_1 ^ phi_2, closed phi_1, phi_2
  const StructureConstants iw = catalog("iwasawa").sc;
  EXPECT_TRUE(exterior_d_generator(iw, 0).empty());
  EXPECT_NEAR(std::abs(exterior_d_generator(iw, 2).coefficient({0, 1}) + 1.0), 0.0, 1e-15);
  // kodaira-thurston: d phi_2 = -phi_1 ^ conj(phi_1)
  const StructureConstants kt = catalog("kodaira-thurston").sc;
  EXPECT_NEAR(std::abs(exterior_d_generator(kt, 1).coefficient({0, 2}) + 1.0), 0.0, 1e-15);
}

TEST(Catalog, EntriesAreValidAndUnimodular) {
  for (const auto& name : catalog_names()) {
    const HermitianStructure hs = catalog(name);
    const ValidationReport r = validate(hs.sc);
    EXPECT_TRUE(r.ok()) << name;
    EXPECT_TRUE(r.get("unimodular").passed) << name;
    EXPECT_LT(bracket_jacobi_residual(complex_brackets(hs.sc)), 1e-13) << name;
    EXPECT_EQ(hs.H.matrix(), CMat::Identity(hs.sc.n, hs.sc.n)) << name;
    EXPECT_FALSE(catalog_description(name).empty());
  }
  for (int k = 3; k <= 6; ++k) EXPECT_EQ(catalog("sokc-" + std::to_string(k)).sc.n, k * (k - 1) / 2);
  EXPECT_EQ(catalog("abelian-7").sc.n, 7);
  EXPECT_THROW(catalog("nosuch"), UnknownCatalogEntry);
  EXPECT_THROW(catalog("abelian-0"), UnknownCatalogEntry);
  EXPECT_THROW(catalog("abelian-x"), UnknownCatalogEntry);
  EXPECT_THROW(catalog("sokc-7"), UnknownCatalogEntry);
  EXPECT_THROW(catalog_description("nosuch"), UnknownCatalogEntry);
}

TEST(Catalog, SokcMatchesMatrixCommutators) {
  // so(3) in the basis E_12, E_13, E_23: [E_12, E_13] = -E_23
  const StructureConstants sc = catalog("sokc-3").sc;
  EXPECT_NEAR(std::abs(sc.C(2, 0, 1) + 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(sc.C(1, 0, 2) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(sc.C(0, 1, 2) + 1.0), 0.0, 1e-15);
}

TEST(Validation, DetectsBrokenStructures) {
  StructureConstants sc(3);
  sc.C(0, 1, 2) = 1.0;  // missing antisymmetric partner
  const ValidationReport r = validate(sc);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.get("C_antisymmetry").passed);
  EXPECT_THROW(r.get("nosuch"), InvalidInput);

  // [e1, e2] = e3, [e2, e3] = e2 breaks Jacobi
  StructureConstants bad(3);
  auto set = [&](int j, int i, int k, double v) {
    bad.C(j, i, k) = v;
    bad.C(j, k, i) = -v;
  };
  set(2, 0, 1, 1.0);
  set(1, 1, 2, 1.0);
  EXPECT_GT(bracket_jacobi_residual(complex_brackets(bad)), 0.1);
  const ValidationReport rb = validate(bad);
  EXPECT_FALSE(rb.ok());
  EXPECT_FALSE(rb.get("dd_phi").passed);

  StructureConstants nan(2);
  nan.D(0, 0, 0) = Complex(std::nan(""), 0.0);
  EXPECT_FALSE(validate(nan).ok());
}

TEST(Validation, RandomStructuresPassAndSatisfyJacobi) {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const HermitianStructure hs = random_structure(rng, 4);
    EXPECT_TRUE(validate(hs.sc).ok());
    EXPECT_LT(bracket_jacobi_residual(complex_brackets(hs.sc)), 1e-10);
  }
}

TEST(Validation, UnimodularityIsInformational) {
  Rng rng(5);
  const StructureConstants sc = random_surface(rng);
  const ValidationReport r = validate(sc);
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.get("unimodular").passed);
}

TEST(FrameChange, MatchesBracketTransport) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianStructure hs = random_structure(rng, 4);
    const CMat p = random_invertible(rng, hs.sc.n);
    const StructureConstants moved = frame_change(hs.sc, p);
    EXPECT_LT(bracket_distance(complex_brackets(moved), brackets_in_frame(hs.sc, p)), 1e-11);
    EXPECT_TRUE(validate(moved).ok());
    // composing with the inverse returns to the start
    EXPECT_LT(constants_distance(frame_change(moved, p.inverse()), hs.sc), 1e-11);
  }
}

TEST(FrameChange, TransformsMetricAndVolume) {
  Rng rng(7);
  const HermitianStructure hs = random_frame_structure(rng, "iwasawa");
  const CMat p = random_invertible(rng, 3);
  const HermitianStructure moved = frame_change(hs, p);
  EXPECT_LT((moved.H.matrix() - p.transpose() * hs.H.matrix() * p.conjugate()).norm(), 1e-12);
  EXPECT_NEAR(volume(moved), volume(hs) * std::norm(p.determinant()), 1e-10 * volume(moved));
  EXPECT_NEAR(volume(catalog("so3c")), 1.0, 0.0);
}

TEST(FrameChange, RejectsSingularOrMisshapenMatrices) {
  const StructureConstants sc = catalog("so3c").sc;
  CMat p = CMat::Identity(3, 3);
  p(2, 2) = 0.0;
  EXPECT_THROW(frame_change(sc, p), SingularFrame);
  EXPECT_THROW(frame_change(sc, CMat::Identity(2, 2)), DimensionMismatch);
  EXPECT_TRUE(std::isinf(frame_condition_number(CMat::Zero(2, 2))));
  EXPECT_NEAR(frame_condition_number(CMat::Identity(3, 3)), 1.0, 1e-15);
}

TEST(UnitaryReduction, ProducesOrthonormalFrame) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianStructure hs = random_structure(rng, 4);
    const UnitaryReduction u = unitary_reduction(hs);
    const int n = hs.sc.n;
    EXPECT_LT((u.P.transpose() * hs.H.matrix() * u.P.conjugate() - CMat::Identity(n, n)).norm(), 1e-11);
    EXPECT_LT(constants_distance(u.sc, frame_change(hs.sc, u.P)), 1e-12);
  }
}

TEST(MakeStructure, RejectsBadMetrics) {
  const StructureConstants sc = catalog("kodaira-thurston").sc;
  CMat m(2, 2);
  m << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(make_structure(sc, m), NotPositiveDefinite);
  EXPECT_THROW(make_structure(sc, CMat::Identity(3, 3)), DimensionMismatch);
  m << 1.0, Complex(0.0, 0.1), Complex(0.0, 0.1), 1.0;
  EXPECT_THROW(make_structure(sc, m), InvalidInput);
}

TEST(RealForms, RealifyComplexifyRoundTrip) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianStructure hs = random_structure(rng, 4);
    const RealLieData rl = realify(hs.sc);
    EXPECT_LT(real_jacobi_residual(rl), 1e-10);
    EXPECT_LT(constants_distance(complexify(rl), hs.sc), 1e-11);
  }
}

TEST(RealForms, KodairaThurstonRealData) {
  const StructureConstants sc = complexify(kodaira_thurston_real());
  EXPECT_LT(constants_distance(sc, catalog("kodaira-thurston").sc), 1e-14);
}

TEST(RealForms, RandomPresentationsComplexifyToValidStructures) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto names = small_catalog(3);
    const std::string& name = names[trial % names.size()];
    const StructureConstants base = catalog(name).sc;
    const StructureConstants sc = complexify(random_real_presentation(rng, base));
    EXPECT_EQ(sc.n, base.n);
    const ValidationReport r = validate(sc);
    EXPECT_TRUE(r.ok()) << name;
    // unimodularity is basis independent
    EXPECT_TRUE(r.get("unimodular").passed) << name;
  }
}

TEST(RealForms, RejectsNonIntegrableJ) {
  // h3 + R with [X1, X2] = X3 and J X1 = X3, J X2 = X4
  RealLieData rl(4);
  set_real_bracket(rl, 2, 0, 1, 1.0);
  rl.J(2, 0) = 1.0;
  rl.J(0, 2) = -1.0;
  rl.J(3, 1) = 1.0;
  rl.J(1, 3) = -1.0;
  EXPECT_THROW(complexify(rl), NotIntegrable);
}

TEST(RealForms, RejectsJacobiViolationAndBadJ) {
  RealLieData rl = standard_j(4);
  set_real_bracket(rl, 2, 0, 1, 1.0);
  set_real_bracket(rl, 3, 0, 2, 1.0);
  set_real_bracket(rl, 1, 1, 2, 1.0);
  EXPECT_THROW(complexify(rl), JacobiViolation);

  RealLieData j2 = standard_j(4);
  j2.J = Eigen::MatrixXd::Identity(4, 4);
  EXPECT_THROW(complexify(j2), InvalidInput);
  RealLieData odd(3);
  EXPECT_THROW(complexify(odd), InvalidInput);
}

}  // namespace
}  // namespace htorsion
