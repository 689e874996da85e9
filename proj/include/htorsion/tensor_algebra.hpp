#pragma once

// Dense complex linear algebra and the invariant exterior algebra over a fixed
// (1,0)/(0,1) coframe.
//
// Index convention (used by every module):
//   * all indices are 0-based in code; JSON and text output use 1-based indices.
//   * CTensor3 entry (up, lo1, lo2) stores X^{up}_{lo1 lo2}.
//   * CTensor4 entry (up, lo1, lo2, bar) stores X^{up}_{lo1 lo2, bar}, the last
//     slot being the derivative direction.
//   * A (1,1)-coefficient matrix M at (i, j) is the coefficient of
//     sqrt(-1) phi_i ^ conj(phi_j).

#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace htorsion {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Largest absolute row sum.
double inf_norm(const CMat& m);
bool all_finite(const CMat& m);

/// Hermitian matrix, symmetrized on construction.
class HermMat {
 public:
  HermMat() = default;

  /// Throws InvalidInput if `m` is not square, not finite, or deviates from
  /// its adjoint by more than `rel_tol * max(1, |m|_inf)`.
  static HermMat from(const CMat& m, double rel_tol = 1e-12);
  static HermMat identity(int n);

  const CMat& matrix() const { return base_; }
  bool positive_definite() const { return positive_definite_; }
  int dim() const { return static_cast<int>(base_.rows()); }

 private:
  CMat base_;
  bool positive_definite_ = false;
};

/// Lower-triangular L with real positive diagonal and H = L L*.
/// Throws NotPositiveDefinite when a pivot is not strictly positive.
CMat cholesky(const HermMat& h);

/// Eigen-decomposition based functions of a Hermitian matrix.
CMat hermitian_exp(const CMat& s);
CMat hermitian_sqrt(const CMat& h);
Eigen::VectorXd hermitian_eigenvalues(const CMat& h);

/// Dense rank-3 tensor X^{up}_{lo1 lo2}.
class CTensor3 {
 public:
  CTensor3() = default;
  explicit CTensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n) {}

  int dim() const { return n_; }
  Complex& operator()(int up, int lo1, int lo2) { return data_[index(up, lo1, lo2)]; }
  Complex operator()(int up, int lo1, int lo2) const { return data_[index(up, lo1, lo2)]; }

  double max_abs() const;
  double squared_norm() const;
  bool all_finite() const;

  CTensor3 operator-() const;
  CTensor3 operator+(const CTensor3& other) const;
  CTensor3 operator-(const CTensor3& other) const;
  CTensor3 operator*(double s) const;

 private:
  std::size_t index(int up, int lo1, int lo2) const {
    return (static_cast<std::size_t>(up) * n_ + lo1) * n_ + lo2;
  }

  int n_ = 0;
  std::vector<Complex> data_;
};

/// Dense rank-4 tensor X^{up}_{lo1 lo2, bar}.
class CTensor4 {
 public:
  CTensor4() = default;
  explicit CTensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n) {}

  int dim() const { return n_; }
  Complex& operator()(int up, int lo1, int lo2, int bar) { return data_[index(up, lo1, lo2, bar)]; }
  Complex operator()(int up, int lo1, int lo2, int bar) const {
    return data_[index(up, lo1, lo2, bar)];
  }

  double max_abs() const;

 private:
  std::size_t index(int up, int lo1, int lo2, int bar) const {
    return ((static_cast<std::size_t>(up) * n_ + lo1) * n_ + lo2) * n_ + bar;
  }

  int n_ = 0;
  std::vector<Complex> data_;
};

/// Left-invariant complex form in the generators phi_1..phi_n, conj(phi_1)..conj(phi_n).
///
/// Generator g in [0, n) is phi_{g}, g in [n, 2n) is conj(phi_{g-n}). A monomial
/// is stored as a bitmask of its generators, which is the same thing as a
/// strictly increasing index list; coefficients refer to the wedge product in
/// increasing generator order.
class InvariantForm {
 public:
  using Mask = std::uint32_t;
  static constexpr int kMaxDim = 15;

  InvariantForm() = default;
  explicit InvariantForm(int n);

  static InvariantForm scalar(int n, Complex c);
  static InvariantForm generator(int n, int g);
  static InvariantForm phi(int n, int i) { return generator(n, i); }
  static InvariantForm phibar(int n, int i) { return generator(n, n + i); }
  /// Product of the generators in the given order, times `c`.
  static InvariantForm monomial(int n, const std::vector<int>& gens, Complex c = 1.0);
  /// sqrt(-1) sum_{ij} m(i,j) phi_i ^ conj(phi_j).
  static InvariantForm from_hermitian_coefficients(const CMat& m);
  /// The fundamental form sqrt(-1) sum_i phi_i ^ conj(phi_i).
  static InvariantForm kahler_form(int n);

  int dim() const { return n_; }
  const std::map<Mask, Complex>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Coefficient of the product of `gens` taken in the given order.
  Complex coefficient(const std::vector<int>& gens) const;
  /// Coefficient matrix m of the (1,1)-part, written as sqrt(-1) sum m_ij phi_i ^ conj(phi_j).
  CMat hermitian_coefficients() const;

  void add(Mask mask, Complex c);

  double max_abs() const;
  double squared_norm() const;

  InvariantForm& operator+=(const InvariantForm& other);
  InvariantForm& operator-=(const InvariantForm& other);
  InvariantForm operator+(const InvariantForm& other) const;
  InvariantForm operator-(const InvariantForm& other) const;
  InvariantForm operator*(Complex c) const;

  static std::vector<int> generators_of(Mask mask);
  std::pair<int, int> bidegree(Mask mask) const;

 private:
  int n_ = 0;
  std::map<Mask, Complex> terms_;
};

InvariantForm operator*(Complex c, const InvariantForm& f);

InvariantForm wedge(const InvariantForm& a, const InvariantForm& b);
InvariantForm conjugate_form(const InvariantForm& a);
InvariantForm bidegree_part(const InvariantForm& a, int p, int q);

/// Sign of moving the generators of `b` past those of `a` into sorted order,
/// or 0 when the monomials share a generator.
int wedge_sign(InvariantForm::Mask a, InvariantForm::Mask b);

}  // namespace htorsion
