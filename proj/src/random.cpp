#include "htorsion/random.hpp"

#include <cmath>
#include <numbers>

#include "htorsion/lie_hermitian.hpp"

namespace htorsion {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = uniform();
  while (u == 0.0) u = uniform();
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double a = 2.0 * std::numbers::pi * v;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

CMat random_complex_matrix(Rng& rng, int n) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.complex_normal();
  return m;
}

HermMat random_hermitian_direction(Rng& rng, int n) {
  const CMat g = random_complex_matrix(rng, n);
  CMat h = 0.5 * (g + g.adjoint());
  h /= h.norm();
  return HermMat::from(h);
}

HermMat random_positive_definite(Rng& rng, int n, double spread) {
  const HermMat s = random_hermitian_direction(rng, n);
  return HermMat::from(hermitian_exp(spread * s.matrix()));
}

CMat random_unitary(Rng& rng, int n) {
  const CMat g = random_complex_matrix(rng, n);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ() * CMat::Identity(n, n);
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

CMat random_invertible(Rng& rng, int n, double scale) {
  for (;;) {
    const CMat p = CMat::Identity(n, n) + scale * random_complex_matrix(rng, n) / std::sqrt(double(n));
    if (frame_condition_number(p) < 50.0) return p;
  }
}

}  // namespace htorsion
