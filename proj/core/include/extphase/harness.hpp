#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "extphase/config.hpp"
#include "extphase/core.hpp"
#include "extphase/hamiltonians.hpp"
#include "extphase/implicit_rk.hpp"
#include "extphase/invariants.hpp"
#include "extphase/projection.hpp"
#include "extphase/splitting.hpp"

namespace extphase {

/// Advances one trajectory of any method by a fixed step.
///
/// Pihajoki and Tao evolve embed(z0) in the extended space; semiexplicit and
/// Gauss-Legendre evolve z0 in the original space. After every step the
/// gradient-evaluation count is checked against the method's accounting rule
/// (explicit: fixed cost per step; implicit: cost per iteration x iterations).
/// Gauss-Legendre increments are accumulated with compensated summation, which
/// keeps round-off from dominating long runs with small steps.
class Propagator {
 public:
  Propagator(const ExperimentSpec& spec, const HamiltonianSystem& system, const PhasePoint& z0);

  /// Takes one step; throws NonConvergence or SingularConfiguration from the
  /// underlying solver or system.
  StepStats step();

  /// The (q, p) state, the (q, p) block for extended methods.
  [[nodiscard]] PhasePoint state() const;
  /// Defect norm of the latest extended point (0 for Gauss-Legendre).
  [[nodiscard]] double defect() const noexcept { return defect_; }
  [[nodiscard]] bool is_extended() const noexcept;
  [[nodiscard]] const ExtendedPoint* extended_state() const noexcept;
  [[nodiscard]] const EvalCounter& counter() const noexcept { return ev_.counter(); }
  /// Gradient evaluations per iteration: extended-step cost, or stage count for GL.
  [[nodiscard]] int vf_per_iteration() const noexcept { return vf_per_iteration_; }

 private:
  struct Explicit {
    ExtendedStep step;
    ExtendedPoint zeta;
  };
  struct Projected {
    SemiexplicitStepper stepper;
    PhasePoint z;
  };
  struct Collocation {
    GaussLegendreStepper stepper;
    PhasePoint z;
    Vector carry;  // compensated-summation remainder of z
  };

  Evaluator ev_;
  double dt_;
  int vf_per_iteration_ = 0;
  double defect_ = 0.0;
  std::variant<Explicit, Projected, Collocation> impl_;
};

enum class RunStatus { complete, non_convergence, singular };

struct TrajectoryRecord {
  std::string label;
  int dim = 0;
  std::vector<std::string> invariant_names;

  // One entry per recorded row; step 0 is not recorded.
  std::vector<long long> steps;
  std::vector<double> times;
  std::vector<double> defect;
  std::vector<double> energy_rel_err;
  /// invariant_drift[k][row]
  std::vector<std::vector<double>> invariant_drift;
  std::vector<int> itr;
  std::vector<std::uint64_t> vf_evals;
  /// Packed (q, p) per row when state recording is on.
  std::vector<Vector> states;

  // Maxima over every step, recorded or not.
  double max_defect = 0.0;
  double max_energy_rel_err = 0.0;
  std::vector<double> max_invariant_drift;

  long long total_steps = 0;
  long long completed_steps = 0;
  long long converged_steps = 0;
  std::uint64_t total_iterations = 0;
  std::uint64_t total_vf_evals = 0;
  double elapsed_s = 0.0;

  RunStatus status = RunStatus::complete;
  std::string failure;

  [[nodiscard]] bool complete() const noexcept { return status == RunStatus::complete; }
  [[nodiscard]] double itr_avg() const noexcept;
  [[nodiscard]] double vf_avg() const noexcept;
  [[nodiscard]] std::size_t rows() const noexcept { return steps.size(); }
};

/// Integrates the experiment from t = 0 to t_end. Solver failures and singular
/// configurations end the run early with status set and the partial record kept.
[[nodiscard]] TrajectoryRecord run_experiment(const ExperimentSpec& spec);
[[nodiscard]] TrajectoryRecord run_experiment(const ExperimentSpec& spec,
                                              const HamiltonianSystem& system,
                                              const PhasePoint& z0);

struct BenchmarkRow {
  std::string label;
  MethodKind method = MethodKind::semiexplicit;
  int order = 2;
  double dt = 0.0;
  double t_end = 0.0;
  double tol = 0.0;
  double time_s = 0.0;
  double itr_avg = 0.0;
  double vf_avg = 0.0;
  long long converged_steps = 0;
  long long total_steps = 0;
};

/// Times pure stepping (no diagnostics) averaged over `repetitions` runs.
/// Repetitions run one after another so they do not compete for cores.
[[nodiscard]] BenchmarkRow benchmark(const ExperimentSpec& spec, int repetitions);

struct ConvergenceResult {
  std::vector<double> dts;
  std::vector<double> errors;
  double slope = 0.0;
  double reference_dt = 0.0;
};

/// Error of the final (q, p) against a gl6 reference at min(dts)/20, and the
/// least-squares slope of log(error) against log(dt). Step sizes run in parallel.
/// The slope is NaN when some error is exactly zero (below double resolution).
[[nodiscard]] ConvergenceResult convergence_study(const ExperimentSpec& spec,
                                                  const std::vector<double>& dts);

/// Least-squares slope of log(y) against log(x).
[[nodiscard]] double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace extphase
