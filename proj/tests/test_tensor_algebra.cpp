#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "htorsion/errors.hpp"
#include "htorsion/random.hpp"
#include "htorsion/tensor_algebra.hpp"
#include "oracles.hpp"

namespace htorsion {
namespace {

using testing::dense_distance;
using testing::dense_wedge;
using testing::to_dense;

// Random form of pure degree p in 2n generators.
InvariantForm random_form(Rng& rng, int n, int p) {
  InvariantForm f(n);
  for (InvariantForm::Mask mask = 0; mask < (InvariantForm::Mask{1} << (2 * n)); ++mask) {
    if (std::popcount(mask) == p && rng.uniform() < 0.6) f.add(mask, rng.complex_normal());
  }
  return f;
}

int degree(const InvariantForm& f) {
  return f.empty() ? 0 : std::popcount(f.terms().begin()->first);
}

TEST(HermMat, RejectsNonHermitianAndNonSquare) {
  CMat m(2, 2);
  m << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 1.0;
  EXPECT_THROW(HermMat::from(m), InvalidInput);
  EXPECT_THROW(HermMat::from(CMat::Zero(2, 3)), InvalidInput);
  CMat nan = CMat::Identity(2, 2);
  nan(0, 0) = std::nan("");
  EXPECT_THROW(HermMat::from(nan), InvalidInput);
}

TEST(HermMat, SymmetrizesAndDetectsPositivity) {
  CMat m(2, 2);
  m << 2.0, Complex(0.5, 1.0), Complex(0.5, -1.0 + 1e-14), 3.0;
  const HermMat h = HermMat::from(m);
  EXPECT_TRUE(h.positive_definite());
  EXPECT_EQ(h.matrix(), h.matrix().adjoint());
  CMat indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -1.0;
  EXPECT_FALSE(HermMat::from(indefinite).positive_definite());
  EXPECT_TRUE(HermMat::identity(4).positive_definite());
}

TEST(Cholesky, ReconstructsRandomPositiveMatrices) {
  Rng rng(11);
  for (int n = 1; n <= 5; ++n) {
    const HermMat h = random_positive_definite(rng, n, 1.5);
    const CMat l = cholesky(h);
    EXPECT_LT((l * l.adjoint() - h.matrix()).norm(), 1e-12 * h.matrix().norm());
    for (int i = 0; i < n; ++i) {
      EXPECT_GT(l(i, i).real(), 0.0);
      EXPECT_EQ(l(i, i).imag(), 0.0);
      for (int j = i + 1; j < n; ++j) EXPECT_EQ(l(i, j), Complex{});
    }
  }
}

TEST(Cholesky, ThrowsOnIndefiniteOrSingular) {
  CMat m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  EXPECT_THROW(cholesky(HermMat::from(m)), NotPositiveDefinite);
  m << 1.0, 1.0, 1.0, 1.0;
  EXPECT_THROW(cholesky(HermMat::from(m)), NotPositiveDefinite);
}

TEST(HermitianFunctions, ExpAndSqrt) {
  CMat s = CMat::Zero(2, 2);
  s(0, 0) = std::log(2.0);
  const CMat e = hermitian_exp(s);
  EXPECT_NEAR(std::abs(e(0, 0) - 2.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(e(1, 1) - 1.0), 0.0, 1e-14);

  Rng rng(5);
  const HermMat dir = random_hermitian_direction(rng, 4);
  EXPECT_NEAR(dir.matrix().norm(), 1.0, 1e-14);
  const CMat ex = hermitian_exp(dir.matrix());
  EXPECT_NEAR(std::abs(ex.determinant() - std::exp(dir.matrix().trace().real())), 0.0, 1e-12);

  const HermMat h = random_positive_definite(rng, 4);
  const CMat r = hermitian_sqrt(h.matrix());
  EXPECT_LT((r * r - h.matrix()).norm(), 1e-12);
  EXPECT_LT((r - r.adjoint()).norm(), 1e-14);
  EXPECT_GT(hermitian_eigenvalues(r).minCoeff(), 0.0);
  EXPECT_THROW(hermitian_sqrt(-h.matrix()), NotPositiveDefinite);
}

TEST(CTensor, Arithmetic) {
  CTensor3 a(2), b(2);
  a(0, 1, 0) = Complex(3.0, 4.0);
  b(1, 1, 1) = 2.0;
  EXPECT_DOUBLE_EQ(a.max_abs(), 5.0);
  EXPECT_DOUBLE_EQ((a + b).squared_norm(), 29.0);
  EXPECT_DOUBLE_EQ((a - b)(1, 1, 1).real(), -2.0);
  EXPECT_DOUBLE_EQ((a * 2.0).max_abs(), 10.0);
  EXPECT_TRUE(a.all_finite());
  a(0, 0, 0) = Complex(std::nan(""), 0.0);
  EXPECT_FALSE(a.all_finite());
  EXPECT_THROW(a + CTensor3(3), DimensionMismatch);
}

TEST(InvariantForm, WedgeMatchesShuffleOracle) {
  Rng rng(2024);
  for (int n = 1; n <= 3; ++n)
    for (int p = 0; p <= 3; ++p)
      for (int q = 0; q + p <= 2 * n && q <= 3; ++q) {
        const InvariantForm a = random_form(rng, n, p);
        const InvariantForm b = random_form(rng, n, q);
        const auto expected = dense_wedge(to_dense(a), p, to_dense(b), q);
        EXPECT_LT(dense_distance(to_dense(wedge(a, b)), expected), 1e-12) << "n=" << n << " p=" << p << " q=" << q;
      }
}

TEST(InvariantForm, GradedCommutativityAndAssociativity) {
  Rng rng(7);
  const int n = 3;
  for (int trial = 0; trial < 10; ++trial) {
    const int p = 1 + trial % 3, q = 1 + (trial / 3) % 3;
    const InvariantForm a = random_form(rng, n, p);
    const InvariantForm b = random_form(rng, n, q);
    const InvariantForm c = random_form(rng, n, 1);
    const double sign = ((p * q) % 2 == 0) ? 1.0 : -1.0;
    EXPECT_LT((wedge(a, b) - wedge(b, a) * sign).max_abs(), 1e-12);
    EXPECT_LT((wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).max_abs(), 1e-12);
  }
}

TEST(InvariantForm, KahlerFormSquare) {
  const InvariantForm w = InvariantForm::kahler_form(2);
  const InvariantForm w2 = wedge(w, w);
  // (i phi1 phibar1 + i phi2 phibar2)^2 = 2 i^2 phi1 phibar1 phi2 phibar2
  EXPECT_NEAR(std::abs(w2.coefficient({0, 2, 1, 3}) - Complex(-2.0, 0.0)), 0.0, 1e-15);
  EXPECT_EQ(w2.terms().size(), 1u);
  EXPECT_EQ(degree(w2), 4);
}

TEST(InvariantForm, CoefficientOrderingAndRepeats) {
  const InvariantForm f = InvariantForm::monomial(3, {4, 1}, 2.0);
  EXPECT_EQ(f.coefficient({4, 1}), Complex(2.0));
  EXPECT_EQ(f.coefficient({1, 4}), Complex(-2.0));
  EXPECT_TRUE(InvariantForm::monomial(3, {2, 2}).empty());
  EXPECT_EQ(wedge_sign(0b01, 0b01), 0);
  EXPECT_EQ(wedge_sign(0b10, 0b01), -1);
  EXPECT_EQ(wedge_sign(0b01, 0b10), 1);
  EXPECT_THROW(InvariantForm(InvariantForm::kMaxDim + 1), DimensionMismatch);
  EXPECT_THROW(InvariantForm::generator(2, 4), DimensionMismatch);
}

TEST(InvariantForm, ConjugationAndRealKahlerForm) {
  Rng rng(3);
  const int n = 3;
  const InvariantForm w = InvariantForm::kahler_form(n);
  EXPECT_LT((conjugate_form(w) - w).max_abs(), 1e-15);
  const InvariantForm f = random_form(rng, n, 3);
  EXPECT_LT((conjugate_form(conjugate_form(f)) - f).max_abs(), 1e-15);
  const InvariantForm g = random_form(rng, n, 2);
  EXPECT_LT((conjugate_form(wedge(f, g)) - wedge(conjugate_form(f), conjugate_form(g))).max_abs(), 1e-12);
  EXPECT_EQ((conjugate_form(InvariantForm::phi(n, 1)) - InvariantForm::phibar(n, 1)).max_abs(), 0.0);
}

TEST(InvariantForm, HermitianCoefficientsRoundTrip) {
  Rng rng(19);
  const CMat m = random_complex_matrix(rng, 4);
  const InvariantForm f = InvariantForm::from_hermitian_coefficients(m);
  EXPECT_LT((f.hermitian_coefficients() - m).norm(), 1e-15);
  // a Hermitian coefficient matrix gives a real form
  const CMat h = m + m.adjoint();
  const InvariantForm r = InvariantForm::from_hermitian_coefficients(h);
  EXPECT_LT((conjugate_form(r) - r).max_abs(), 1e-14);
}

TEST(InvariantForm, BidegreeDecomposition) {
  Rng rng(23);
  const int n = 3;
  const InvariantForm f = random_form(rng, n, 3);
  InvariantForm sum(n);
  for (int p = 0; p <= 3; ++p) {
    const InvariantForm part = bidegree_part(f, p, 3 - p);
    for (const auto& [mask, c] : part.terms()) EXPECT_EQ(part.bidegree(mask), std::make_pair(p, 3 - p));
    sum += part;
  }
  EXPECT_LT((sum - f).max_abs(), 1e-15);
}

}  // namespace
}  // namespace htorsion
