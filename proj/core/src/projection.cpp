#include "extphase/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "extphase/errors.hpp"

namespace extphase {
namespace {

void require_on_diagonal(const ExtendedPoint& zeta, const char* where) {
  const double defect = apply_constraint(zeta).lpNorm<Eigen::Infinity>();
  const double scale = std::max(1.0, zeta.packed().lpNorm<Eigen::Infinity>());
  if (!(defect <= kDiagonalTolerance * scale)) {
    throw NotOnDiagonal(std::string(where) + ": starting point is off the diagonal", defect);
  }
}

// Overwrites `out` with Phi(zeta_n + A^T mu) and returns f(mu).
Vector evaluate_residual(Evaluator& ev, const ExtendedStepFn& step, double dt,
                         const ExtendedPoint& zeta_n, const Vector& mu, ExtendedPoint& out) {
  out = zeta_n;
  shift_by_constraint(out, mu);
  step(ev, dt, out);
  Vector f = apply_constraint(out);
  f += 2.0 * mu;
  return f;
}

}  // namespace

std::string_view to_string(SolverMethod m) noexcept {
  switch (m) {
    case SolverMethod::simplified_newton: return "simplified_newton";
    case SolverMethod::broyden: return "broyden";
  }
  return "unknown";
}

SolverConfig::SolverConfig(double tol, int max_iter, SolverMethod method, bool warm_start)
    : tol_(tol), max_iter_(max_iter), method_(method), warm_start_(warm_start) {
  if (!(tol >= std::numeric_limits<double>::epsilon()) || !std::isfinite(tol)) {
    throw InvalidArgument("SolverConfig: tolerance must be finite and at least machine epsilon");
  }
  if (max_iter < 1) {
    throw InvalidArgument("SolverConfig: max_iter must be at least 1, got " +
                          std::to_string(max_iter));
  }
}

Vector projection_residual(Evaluator& ev, const ExtendedStepFn& step, double dt,
                           const ExtendedPoint& zeta_n, const Vector& mu) {
  require_on_diagonal(zeta_n, "projection_residual");
  ExtendedPoint scratch = zeta_n;
  return evaluate_residual(ev, step, dt, zeta_n, mu, scratch);
}

MuSolution solve_mu(Evaluator& ev, const ExtendedStepFn& step, double dt,
                    const ExtendedPoint& zeta_n, const SolverConfig& cfg,
                    const std::optional<Vector>& initial_mu) {
  require_on_diagonal(zeta_n, "solve_mu");
  const int n = 2 * zeta_n.dim();
  const std::uint64_t evals_before = ev.counter().gradient_evals();

  Vector mu = initial_mu ? *initial_mu : Vector::Zero(n);
  if (mu.size() != n) {
    throw DimensionMismatch("solve_mu: initial mu has length " + std::to_string(mu.size()) +
                            ", expected " + std::to_string(n));
  }

  ExtendedPoint propagated = zeta_n;
  Vector f = evaluate_residual(ev, step, dt, zeta_n, mu, propagated);
  int iterations = 1;
  double residual = f.lpNorm<Eigen::Infinity>();
  const double first_residual = residual;

  Vector best_mu = mu;
  double best_residual = residual;

  Matrix inverse_jacobian;
  if (cfg.method() == SolverMethod::broyden) {
    inverse_jacobian = 0.25 * Matrix::Identity(n, n);
  }

  while (!(residual <= cfg.tol())) {
    if (!std::isfinite(residual) || residual > kDivergenceFactor * first_residual) {
      throw NonConvergence("solve_mu: residual diverged to " + std::to_string(residual) +
                               " after " + std::to_string(iterations) + " iterations",
                           best_mu, best_residual, iterations);
    }
    if (iterations >= cfg.max_iter()) {
      throw NonConvergence("solve_mu: no convergence in " + std::to_string(iterations) +
                               " iterations (residual " + std::to_string(residual) + ")",
                           best_mu, best_residual, iterations);
    }

    Vector mu_next;
    if (cfg.method() == SolverMethod::simplified_newton) {
      mu_next = mu - 0.25 * f;
    } else {
      mu_next = mu - inverse_jacobian * f;
    }
    Vector f_next = evaluate_residual(ev, step, dt, zeta_n, mu_next, propagated);
    ++iterations;

    if (cfg.method() == SolverMethod::broyden) {
      // Good Broyden update of the inverse Jacobian.
      const Vector s = mu_next - mu;
      const Vector dy = f_next - f;
      const Vector h_dy = inverse_jacobian * dy;
      const double denom = s.dot(h_dy);
      if (std::abs(denom) > std::numeric_limits<double>::min()) {
        inverse_jacobian += ((s - h_dy) / denom) * (s.transpose() * inverse_jacobian);
      }
    }

    mu = std::move(mu_next);
    f = std::move(f_next);
    residual = f.lpNorm<Eigen::Infinity>();
    if (residual < best_residual) {
      best_residual = residual;
      best_mu = mu;
    }
  }

  StepStats stats;
  stats.iterations = iterations;
  stats.vf_evals = ev.counter().gradient_evals() - evals_before;
  stats.converged = true;
  stats.final_residual = residual;
  return MuSolution{std::move(mu), stats, std::move(propagated)};
}

ProjectedStep semiexplicit_step(Evaluator& ev, const ExtendedStepFn& step, double dt,
                                const PhasePoint& z, const SolverConfig& cfg) {
  SemiexplicitStepper stepper(step, SolverConfig(cfg.tol(), cfg.max_iter(), cfg.method(), false));
  return stepper.step(ev, dt, z);
}

SemiexplicitStepper::SemiexplicitStepper(ExtendedStepFn step, SolverConfig cfg)
    : step_(std::move(step)), cfg_(cfg) {}

ProjectedStep SemiexplicitStepper::step(Evaluator& ev, double dt, const PhasePoint& z) {
  const ExtendedPoint zeta_n = embed(z);
  std::optional<Vector> guess;
  if (cfg_.warm_start() && last_mu_ && last_mu_->size() == 2 * z.dim()) {
    guess = last_mu_;
  }
  MuSolution solution = solve_mu(ev, step_, dt, zeta_n, cfg_, guess);

  ExtendedPoint zeta_next = std::move(solution.propagated);
  shift_by_constraint(zeta_next, solution.mu);
  // The solver guarantees ||A zeta_next||_inf <= tol up to rounding.
  const double defect = defect_norm(zeta_next);
  PhasePoint z_next =
      restrict_to_phase(zeta_next, std::max(2.0 * cfg_.tol(), kDiagonalTolerance));

  if (cfg_.warm_start()) {
    last_mu_ = solution.mu;
  }
  return ProjectedStep{std::move(z_next), solution.stats, std::move(solution.mu), defect};
}

}  // namespace extphase
