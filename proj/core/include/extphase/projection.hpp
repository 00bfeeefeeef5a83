#pragma once

// Semiexplicit integrator: symmetric projection of an extended-space step onto
// the diagonal N = ker A.
//
// Given z_n, embed it as zeta_n, find mu with
//   f(mu) = A( Phi(zeta_n + A^T mu) + A^T mu ) = A Phi(zeta_n + A^T mu) + 2 mu = 0,
// then zeta_{n+1} = Phi(zeta_n + A^T mu) + A^T mu lies on N and z_{n+1} is its
// (q, p) block.

#include <cstdint>
#include <optional>
#include <string_view>

#include "extphase/core.hpp"
#include "extphase/hamiltonians.hpp"
#include "extphase/splitting.hpp"

namespace extphase {

enum class SolverMethod { simplified_newton, broyden };

[[nodiscard]] std::string_view to_string(SolverMethod m) noexcept;

/// Settings shared by the projection solver and the Gauss-Legendre stage solver.
class SolverConfig {
 public:
  SolverConfig() = default;
  /// Throws InvalidArgument if tol < machine epsilon or max_iter < 1.
  SolverConfig(double tol, int max_iter, SolverMethod method = SolverMethod::simplified_newton,
               bool warm_start = false);

  [[nodiscard]] double tol() const noexcept { return tol_; }
  [[nodiscard]] int max_iter() const noexcept { return max_iter_; }
  [[nodiscard]] SolverMethod method() const noexcept { return method_; }
  [[nodiscard]] bool warm_start() const noexcept { return warm_start_; }

 private:
  double tol_ = 1e-12;
  int max_iter_ = 100;
  SolverMethod method_ = SolverMethod::simplified_newton;
  bool warm_start_ = false;
};

struct StepStats {
  int iterations = 0;
  std::uint64_t vf_evals = 0;
  bool converged = true;
  double final_residual = 0.0;
};

/// Solver aborts once the residual exceeds this multiple of its first value.
inline constexpr double kDivergenceFactor = 1e4;

/// f(mu) = A Phi(zeta_n + A^T mu) + 2 mu. One extended-step evaluation.
[[nodiscard]] Vector projection_residual(Evaluator& ev, const ExtendedStepFn& step, double dt,
                                         const ExtendedPoint& zeta_n, const Vector& mu);

struct MuSolution {
  Vector mu;
  StepStats stats;
  /// Phi(zeta_n + A^T mu) at the returned mu.
  ExtendedPoint propagated;
};

/// Solves f(mu) = 0 to ||f||_inf <= tol.
///
/// Every iteration evaluates f once; iteration k = 1 evaluates at the initial
/// guess (zero unless given). Simplified Newton uses Df ~ 4I; Broyden updates an
/// inverse Jacobian seeded with I/4. Throws NonConvergence when max_iter is
/// exhausted or the residual grows past kDivergenceFactor times its first value.
[[nodiscard]] MuSolution solve_mu(Evaluator& ev, const ExtendedStepFn& step, double dt,
                                  const ExtendedPoint& zeta_n, const SolverConfig& cfg,
                                  const std::optional<Vector>& initial_mu = std::nullopt);

struct ProjectedStep {
  PhasePoint z;
  StepStats stats;
  Vector mu;
  /// ||A zeta_{n+1}||_2 before restriction to (q, p).
  double defect = 0.0;
};

/// One semiexplicit step from z with a cold start (mu_0 = 0).
[[nodiscard]] ProjectedStep semiexplicit_step(Evaluator& ev, const ExtendedStepFn& step, double dt,
                                              const PhasePoint& z, const SolverConfig& cfg);

/// Semiexplicit stepping with optional warm start from the previous multiplier.
class SemiexplicitStepper {
 public:
  SemiexplicitStepper(ExtendedStepFn step, SolverConfig cfg);

  [[nodiscard]] ProjectedStep step(Evaluator& ev, double dt, const PhasePoint& z);
  [[nodiscard]] const SolverConfig& config() const noexcept { return cfg_; }

 private:
  ExtendedStepFn step_;
  SolverConfig cfg_;
  std::optional<Vector> last_mu_;
};

}  // namespace extphase
