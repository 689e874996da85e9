#include "htorsion/tensor_algebra.hpp"

#include <bit>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "htorsion/errors.hpp"

namespace htorsion {

double inf_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

bool all_finite(const CMat& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

HermMat HermMat::from(const CMat& m, double rel_tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidInput("Hermitian matrix must be square and non-empty");
  }
  if (!all_finite(m)) throw InvalidInput("Hermitian matrix has non-finite entries");
  const double scale = std::max(1.0, inf_norm(m));
  if (inf_norm(m - m.adjoint()) > rel_tol * scale) {
    throw InvalidInput("matrix is not Hermitian");
  }
  HermMat h;
  h.base_ = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h.base_, Eigen::EigenvaluesOnly);
  h.positive_definite_ = es.eigenvalues().minCoeff() > 0.0;
  return h;
}

HermMat HermMat::identity(int n) { return from(CMat::Identity(n, n)); }

CMat cholesky(const HermMat& h) {
  const CMat& a = h.matrix();
  const Eigen::Index n = a.rows();
  CMat l = CMat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = a(j, j).real();
    for (Eigen::Index k = 0; k < j; ++k) pivot -= std::norm(l(j, k));
    if (!(pivot > 0.0)) {
      throw NotPositiveDefinite("metric is not positive definite (Cholesky pivot " +
                                std::to_string(j + 1) + " is not positive)");
    }
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      Complex s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / d;
    }
  }
  return l;
}

CMat hermitian_exp(const CMat& s) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (s + s.adjoint()));
  const Eigen::VectorXd ev = es.eigenvalues().array().exp();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

CMat hermitian_sqrt(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (h + h.adjoint()));
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw NotPositiveDefinite("square root requires a positive definite matrix");
  }
  const Eigen::VectorXd ev = es.eigenvalues().array().sqrt();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::VectorXd hermitian_eigenvalues(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// --- CTensor3 / CTensor4 ---------------------------------------------------

double CTensor3::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double CTensor3::squared_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return s;
}

bool CTensor3::all_finite() const {
  for (const auto& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

CTensor3 CTensor3::operator-() const { return *this * -1.0; }

CTensor3 CTensor3::operator+(const CTensor3& other) const {
  if (other.n_ != n_) throw DimensionMismatch("tensor dimensions differ");
  CTensor3 r(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += other.data_[i];
  return r;
}

CTensor3 CTensor3::operator-(const CTensor3& other) const { return *this + (-other); }

CTensor3 CTensor3::operator*(double s) const {
  CTensor3 r(*this);
  for (auto& z : r.data_) z *= s;
  return r;
}

double CTensor4::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

// --- InvariantForm ---------------------------------------------------------

int wedge_sign(InvariantForm::Mask a, InvariantForm::Mask b) {
  if (a & b) return 0;
  int swaps = 0;
  while (b) {
    const int j = std::countr_zero(b);
    b &= b - 1;
    // generators of a that sit above j must be moved past it
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

InvariantForm::InvariantForm(int n) : n_(n) {
  if (n < 0 || n > kMaxDim) throw DimensionMismatch("form dimension out of range");
}

InvariantForm InvariantForm::scalar(int n, Complex c) {
  InvariantForm f(n);
  f.add(0, c);
  return f;
}

InvariantForm InvariantForm::generator(int n, int g) {
  if (g < 0 || g >= 2 * n) throw DimensionMismatch("generator index out of range");
  InvariantForm f(n);
  f.add(Mask{1} << g, 1.0);
  return f;
}

InvariantForm InvariantForm::monomial(int n, const std::vector<int>& gens, Complex c) {
  InvariantForm f = scalar(n, c);
  for (int g : gens) f = wedge(f, generator(n, g));
  return f;
}

InvariantForm InvariantForm::from_hermitian_coefficients(const CMat& m) {
  const int n = static_cast<int>(m.rows());
  InvariantForm f(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // phi_i ^ conj(phi_j) is already in increasing generator order
      f.add((Mask{1} << i) | (Mask{1} << (n + j)), kI * m(i, j));
    }
  }
  return f;
}

InvariantForm InvariantForm::kahler_form(int n) {
  return from_hermitian_coefficients(CMat::Identity(n, n));
}

Complex InvariantForm::coefficient(const std::vector<int>& gens) const {
  Mask mask = 0;
  int sign = 1;
  for (int g : gens) {
    const Mask bit = Mask{1} << g;
    const int s = wedge_sign(mask, bit);
    if (s == 0) return 0.0;
    sign *= s;
    mask |= bit;
  }
  const auto it = terms_.find(mask);
  return it == terms_.end() ? Complex{} : static_cast<double>(sign) * it->second;
}

CMat InvariantForm::hermitian_coefficients() const {
  CMat m = CMat::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const auto it = terms_.find((Mask{1} << i) | (Mask{1} << (n_ + j)));
      if (it != terms_.end()) m(i, j) = -kI * it->second;
    }
  }
  return m;
}

void InvariantForm::add(Mask mask, Complex c) {
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.try_emplace(mask, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

double InvariantForm::max_abs() const {
  double m = 0.0;
  for (const auto& [mask, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

double InvariantForm::squared_norm() const {
  double s = 0.0;
  for (const auto& [mask, c] : terms_) s += std::norm(c);
  return s;
}

InvariantForm& InvariantForm::operator+=(const InvariantForm& other) {
  if (other.n_ != n_) throw DimensionMismatch("form dimensions differ");
  for (const auto& [mask, c] : other.terms_) add(mask, c);
  return *this;
}

InvariantForm& InvariantForm::operator-=(const InvariantForm& other) {
  if (other.n_ != n_) throw DimensionMismatch("form dimensions differ");
  for (const auto& [mask, c] : other.terms_) add(mask, -c);
  return *this;
}

InvariantForm InvariantForm::operator+(const InvariantForm& other) const {
  InvariantForm r(*this);
  r += other;
  return r;
}

InvariantForm InvariantForm::operator-(const InvariantForm& other) const {
  InvariantForm r(*this);
  r -= other;
  return r;
}

InvariantForm InvariantForm::operator*(Complex c) const {
  InvariantForm r(n_);
  for (const auto& [mask, v] : terms_) r.add(mask, c * v);
  return r;
}

InvariantForm operator*(Complex c, const InvariantForm& f) { return f * c; }

std::vector<int> InvariantForm::generators_of(Mask mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

std::pair<int, int> InvariantForm::bidegree(Mask mask) const {
  const Mask low = (Mask{1} << n_) - 1;
  return {std::popcount(mask & low), std::popcount(mask & ~low)};
}

InvariantForm wedge(const InvariantForm& a, const InvariantForm& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("wedge of forms with different dimensions");
  InvariantForm r(a.dim());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      const int s = wedge_sign(ma, mb);
      if (s != 0) r.add(ma | mb, static_cast<double>(s) * ca * cb);
    }
  }
  return r;
}

InvariantForm conjugate_form(const InvariantForm& a) {
  const int n = a.dim();
  InvariantForm r(n);
  for (const auto& [mask, c] : a.terms()) {
    InvariantForm::Mask acc = 0;
    int sign = 1;
    for (int g : InvariantForm::generators_of(mask)) {
      const int cg = g < n ? g + n : g - n;
      const InvariantForm::Mask bit = InvariantForm::Mask{1} << cg;
      sign *= wedge_sign(acc, bit);
      acc |= bit;
    }
    r.add(acc, static_cast<double>(sign) * std::conj(c));
  }
  return r;
}

InvariantForm bidegree_part(const InvariantForm& a, int p, int q) {
  InvariantForm r(a.dim());
  for (const auto& [mask, c] : a.terms()) {
    if (a.bidegree(mask) == std::pair{p, q}) r.add(mask, c);
  }
  return r;
}

}  // namespace htorsion
