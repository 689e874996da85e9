#pragma once

// Descent over the cone of invariant metrics on a fixed Lie algebra.
//
// Each iteration works in the chart H(S) = H0^{1/2} exp(S) H0^{1/2} anchored
// at the current metric H0, with S Hermitian, and re-anchors after every
// accepted step. Gradients are Riesz representatives for the real inner
// product Re tr(X Y^*) on Hermitian matrices.

#include <string>
#include <vector>

#include "htorsion/lie_hermitian.hpp"
#include "htorsion/random.hpp"

namespace htorsion {

enum class Objective {
  torsion_functional,
  gauduchon_functional,
  residual_norm,       ///< |Q_F|^2
  gauduchon_residual,  ///< |Q_G|^2
};

std::string to_string(Objective o);
/// Throws InvalidInput on unknown names.
Objective objective_from_string(const std::string& name);

struct OptimConfig {
  Objective objective = Objective::torsion_functional;
  int max_iter = 500;
  double grad_tol = 1e-8;
  double fd_step = 1e-4;
  double initial_step = 1.0;
  double max_step = 1.0;  ///< cap on the chart step |t G|
  double shrink = 0.5;
  double armijo = 1e-4;
  int max_backtracks = 60;
  bool det_normalized = false;

  /// Throws InvalidInput when a parameter is out of range.
  void check() const;
};

struct OptimStep {
  int iteration = 0;
  double value = 0.0;
  double grad_norm = 0.0;
  double residual_norm = 0.0;  ///< |Q_G| for the Gauduchon objectives, |Q_F| otherwise
  double det = 0.0;
  double step = 0.0;  ///< accepted step length leading to this point (0 for the start)
};

struct OptimTrace {
  std::vector<OptimStep> steps;
  HermMat final_metric;
  bool converged = false;
  /// gradient_tolerance, max_iter, stagnated, line_search_failed, degenerate_metric
  std::string reason;
};

double objective_value(const HermitianStructure& hs, Objective o);

/// H0^{1/2} exp(S) H0^{1/2}; S is first projected to trace zero when
/// det_normalized is set.
HermMat parametrize(const HermMat& h0, const HermMat& s, bool det_normalized = false);

/// Orthonormal basis of the n^2-dimensional real space of Hermitian matrices.
std::vector<CMat> hermitian_basis(int n);

/// Central five-point finite-difference gradient at S = 0 in the chart anchored
/// at hs.H. Throws NumericalFailure on non-finite evaluations.
HermMat gradient(const HermitianStructure& hs, const OptimConfig& cfg);

/// Gradient of the torsion functional from the first-variation tensor.
HermMat analytic_gradient(const HermitianStructure& hs, bool det_normalized = false);

OptimTrace minimize(const HermitianStructure& hs0, const OptimConfig& cfg);

/// Start point H0^{1/2} exp(S) H0^{1/2} with a random Hermitian S of norm `size`.
HermitianStructure perturb_metric(const HermitianStructure& hs, Rng& rng, double size,
                                  bool det_normalized = false);

}  // namespace htorsion
