#include "htorsion/optimizer.hpp"

#include <cmath>

#include "htorsion/errors.hpp"
#include "htorsion/functionals.hpp"

namespace htorsion {

namespace {

// Objective values below this relative spread count as flat.
constexpr double kFlatTolerance = 1e-14;
// Beyond this the iterate is treated as having left the cone.
constexpr double kMaxMetricCondition = 1e12;

CMat trace_free(const CMat& s) {
  const int n = static_cast<int>(s.rows());
  return s - (s.trace() / double(n)) * CMat::Identity(n, n);
}

struct Chart {
  HermitianStructure base;
  CMat root;  // H0^{1/2}
  bool det_normalized = false;

  Chart(const HermitianStructure& hs, bool det_norm)
      : base(hs), root(hermitian_sqrt(hs.H.matrix())), det_normalized(det_norm) {}

  HermitianStructure at(const CMat& s) const {
    const CMat t = det_normalized ? trace_free(s) : s;
    HermitianStructure out = base;
    out.H = HermMat::from(root * hermitian_exp(t) * root);
    return out;
  }
};

struct FdGradient {
  HermMat g;
  double spread = 0.0;  // largest |f(S) - f(0)| over the stencil points
};

double checked_value(const HermitianStructure& hs, Objective o) {
  const double v = objective_value(hs, o);
  if (!std::isfinite(v)) throw NumericalFailure("objective is not finite");
  return v;
}

FdGradient fd_gradient(const HermitianStructure& hs, const OptimConfig& cfg, double f0) {
  const int n = hs.sc.n;
  const Chart chart(hs, cfg.det_normalized);
  const double h = cfg.fd_step;
  CMat g = CMat::Zero(n, n);
  double spread = 0.0;
  for (const CMat& b : hermitian_basis(n)) {
    const double fp1 = checked_value(chart.at(h * b), cfg.objective);
    const double fm1 = checked_value(chart.at(-h * b), cfg.objective);
    const double fp2 = checked_value(chart.at(2.0 * h * b), cfg.objective);
    const double fm2 = checked_value(chart.at(-2.0 * h * b), cfg.objective);
    const double deriv = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    g += deriv * b;
    for (double f : {fp1, fm1, fp2, fm2}) spread = std::max(spread, std::abs(f - f0));
  }
  if (cfg.det_normalized) g = trace_free(g);
  return {HermMat::from(g), spread};
}

}  // namespace

std::string to_string(Objective o) {
  switch (o) {
    case Objective::torsion_functional: return "torsion";
    case Objective::gauduchon_functional: return "gauduchon";
    case Objective::residual_norm: return "residual_norm";
    case Objective::gauduchon_residual: return "gauduchon_residual";
  }
  return "unknown";
}

Objective objective_from_string(const std::string& name) {
  if (name == "torsion") return Objective::torsion_functional;
  if (name == "gauduchon") return Objective::gauduchon_functional;
  if (name == "residual_norm") return Objective::residual_norm;
  if (name == "gauduchon_residual") return Objective::gauduchon_residual;
  throw InvalidInput("unknown objective: " + name);
}

void OptimConfig::check() const {
  if (!(fd_step > 0.0)) throw InvalidInput("fd_step must be positive");
  if (!(grad_tol > 0.0)) throw InvalidInput("grad_tol must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw InvalidInput("shrink factor must lie in (0, 1)");
  if (!(initial_step > 0.0)) throw InvalidInput("initial step must be positive");
  if (!(max_step > 0.0)) throw InvalidInput("max_step must be positive");
  if (!(armijo > 0.0 && armijo < 1.0)) throw InvalidInput("sufficient-decrease constant must lie in (0, 1)");
  if (max_iter < 0) throw InvalidInput("max_iter must be non-negative");
  if (max_backtracks < 1) throw InvalidInput("max_backtracks must be positive");
}

double objective_value(const HermitianStructure& hs, Objective o) {
  switch (o) {
    case Objective::torsion_functional: return torsion_functional(hs);
    case Objective::gauduchon_functional: return gauduchon_functional(hs);
    case Objective::residual_norm: {
      const double r = torsion_critical_residual(hs).norm;
      return r * r;
    }
    case Objective::gauduchon_residual: {
      const double r = gauduchon_critical_residual(hs).norm;
      return r * r;
    }
  }
  throw InvalidInput("unknown objective");
}

HermMat parametrize(const HermMat& h0, const HermMat& s, bool det_normalized) {
  if (h0.dim() != s.dim()) throw DimensionMismatch("chart parameter has wrong size");
  const CMat root = hermitian_sqrt(h0.matrix());
  const CMat t = det_normalized ? trace_free(s.matrix()) : s.matrix();
  return HermMat::from(root * hermitian_exp(t) * root);
}

std::vector<CMat> hermitian_basis(int n) {
  std::vector<CMat> basis;
  basis.reserve(static_cast<std::size_t>(n) * n);
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    CMat e = CMat::Zero(n, n);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      CMat re = CMat::Zero(n, n);
      re(i, j) = r;
      re(j, i) = r;
      basis.push_back(re);
      CMat im = CMat::Zero(n, n);
      im(i, j) = Complex(0.0, r);
      im(j, i) = Complex(0.0, -r);
      basis.push_back(im);
    }
  return basis;
}

HermMat gradient(const HermitianStructure& hs, const OptimConfig& cfg) {
  cfg.check();
  return fd_gradient(hs, cfg, checked_value(hs, cfg.objective)).g;
}

HermMat analytic_gradient(const HermitianStructure& hs, bool det_normalized) {
  // dF along h = R K R equals c Re tr(P^T h conj(P) Q^*), which is
  // Re tr(K G^*) with G = c R conj(P) Q P^T R.
  const TorsionPackage pkg = analyze(hs);
  const CMat root = hermitian_sqrt(hs.H.matrix());
  const CMat q = first_variation_tensor(pkg);
  CMat g = first_variation_normalization(hs) * root * pkg.frame.conjugate() * q *
           pkg.frame.transpose() * root;
  if (det_normalized) g = trace_free(g);
  return HermMat::from(0.5 * (g + g.adjoint()));
}

OptimTrace minimize(const HermitianStructure& hs0, const OptimConfig& cfg) {
  cfg.check();
  OptimTrace trace;
  HermitianStructure current = hs0;
  double f = checked_value(current, cfg.objective);
  const bool gauduchon_side =
      cfg.objective == Objective::gauduchon_functional || cfg.objective == Objective::gauduchon_residual;
  auto residual_of = [&](const HermitianStructure& hs) {
    return gauduchon_side ? gauduchon_critical_residual(hs).norm : torsion_critical_residual(hs).norm;
  };
  double accepted_step = 0.0;

  for (int iter = 0;; ++iter) {
    if (frame_condition_number(current.H.matrix()) > kMaxMetricCondition) {
      trace.steps.push_back({iter, f, 0.0, residual_of(current), volume(current), accepted_step});
      trace.reason = "degenerate_metric";
      break;
    }
    const FdGradient fd = fd_gradient(current, cfg, f);
    const CMat& g = fd.g.matrix();
    const double gnorm = g.norm();
    trace.steps.push_back({iter, f, gnorm, residual_of(current), volume(current), accepted_step});

    if (gnorm <= cfg.grad_tol) {
      trace.converged = true;
      trace.reason = "gradient_tolerance";
      break;
    }
    if (fd.spread <= kFlatTolerance * std::max(1.0, std::abs(f))) {
      trace.reason = "stagnated";
      break;
    }
    if (iter >= cfg.max_iter) {
      trace.reason = "max_iter";
      break;
    }

    const Chart chart(current, cfg.det_normalized);
    double t = std::min(cfg.initial_step, cfg.max_step / gnorm);
    bool accepted = false;
    for (int k = 0; k < cfg.max_backtracks; ++k, t *= cfg.shrink) {
      HermitianStructure trial;
      double ft = 0.0;
      try {
        trial = chart.at(-t * g);
        ft = objective_value(trial, cfg.objective);
      } catch (const Error&) {
        continue;  // overshoot into a degenerate metric counts as a rejected step
      }
      if (std::isfinite(ft) && ft <= f - cfg.armijo * t * gnorm * gnorm) {
        current = std::move(trial);
        f = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      trace.reason = "line_search_failed";
      break;
    }
    accepted_step = t;
  }
  trace.final_metric = current.H;
  return trace;
}

HermitianStructure perturb_metric(const HermitianStructure& hs, Rng& rng, double size, bool det_normalized) {
  const int n = hs.sc.n;
  HermitianStructure out = hs;
  if (size == 0.0) return out;
  const HermMat s = HermMat::from(size * random_hermitian_direction(rng, n).matrix());
  out.H = parametrize(hs.H, s, det_normalized);
  return out;
}

}  // namespace htorsion
