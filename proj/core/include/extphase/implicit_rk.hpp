#pragma once

#include <optional>

#include "extphase/core.hpp"
#include "extphase/hamiltonians.hpp"
#include "extphase/projection.hpp"

namespace extphase {

struct ButcherTableau {
  int stages = 0;
  Matrix a;
  Vector b;
  Vector c;
};

/// Gauss-Legendre collocation tableau of order 2, 4 or 6 (1, 2 or 3 stages).
/// Throws UnsupportedOrder otherwise.
[[nodiscard]] ButcherTableau gl_tableau(int order);

struct GlStep {
  PhasePoint z;
  StepStats stats;
  /// dt * sum_i b_i k_i, so that z = z_n + increment before rounding.
  Vector increment;
};

/// One Gauss-Legendre step solved by Jacobi fixed-point sweeps on the stage slopes
///   k_i <- J DH(z + dt sum_j a_ij k_j),
/// starting from k = 0, until the max-norm change of k is <= cfg.tol().
/// Each sweep costs `stages` gradient evaluations.
[[nodiscard]] GlStep gl_step(Evaluator& ev, double dt, const PhasePoint& z,
                             const ButcherTableau& tableau, const SolverConfig& cfg);

/// Gauss-Legendre stepping; with cfg.warm_start() the sweeps start from the
/// previous step's stage slopes instead of zero.
class GaussLegendreStepper {
 public:
  GaussLegendreStepper(ButcherTableau tableau, SolverConfig cfg);

  [[nodiscard]] GlStep step(Evaluator& ev, double dt, const PhasePoint& z);
  [[nodiscard]] const ButcherTableau& tableau() const noexcept { return tableau_; }

 private:
  ButcherTableau tableau_;
  SolverConfig cfg_;
  std::optional<Matrix> last_slopes_;
};

}  // namespace extphase
