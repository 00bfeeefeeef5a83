#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "extphase/hamiltonians.hpp"
#include "extphase/projection.hpp"
#include "extphase/splitting.hpp"

namespace extphase {

enum class SystemKind { testcase, nls, vortices };
enum class MethodKind { pihajoki, tao, semiexplicit, gl2, gl4, gl6 };

[[nodiscard]] std::string_view to_string(SystemKind s) noexcept;
[[nodiscard]] std::string_view to_string(MethodKind m) noexcept;

/// Parsers throw ConfigError on unknown names.
[[nodiscard]] SystemKind parse_system(std::string_view name);
[[nodiscard]] MethodKind parse_method(std::string_view name);
[[nodiscard]] Composition parse_composition(std::string_view name);
[[nodiscard]] SolverMethod parse_solver(std::string_view name);

[[nodiscard]] bool is_gauss_legendre(MethodKind m) noexcept;

/// Everything needed to run one trajectory.
struct ExperimentSpec {
  SystemKind system = SystemKind::testcase;
  int d = 2;                                   // NLS lattice size
  std::vector<double> circulations;            // vortices
  std::vector<PlanarPosition> planar_positions;  // vortices
  std::vector<double> q0;                      // testcase / NLS
  std::vector<double> p0;

  MethodKind method = MethodKind::semiexplicit;
  int order = 2;
  /// Composition for order 4 or 6; defaults to triple_jump (4) and yoshida (6).
  std::optional<Composition> composition;
  double dt = 0.1;
  double t_end = 1.0;
  double omega = 10.0;

  double tol = 1e-12;
  int max_iter = 100;
  SolverMethod solver = SolverMethod::simplified_newton;
  bool warm_start = false;

  /// 0 selects the default stride.
  int record_stride = 0;
  bool record_state = false;
  std::string out;
  std::string svg;

  /// Throws ConfigError if the experiment cannot be run.
  void validate() const;

  [[nodiscard]] long long n_steps() const;
  /// record_stride if set, otherwise 1 for at most 1e5 steps and the smallest
  /// stride giving at most 1e5 rows beyond that.
  [[nodiscard]] long long effective_stride() const;
  [[nodiscard]] int effective_order() const noexcept;
  [[nodiscard]] Composition effective_composition() const;
  [[nodiscard]] SolverConfig solver_config() const;
  /// Human-readable method label, e.g. "semiexplicit-yoshida-6" or "gl4".
  [[nodiscard]] std::string label() const;
};

[[nodiscard]] std::vector<std::string> preset_names();
/// testcase, vortex4, nls_bench or vortex10; throws ConfigError otherwise.
[[nodiscard]] ExperimentSpec preset(std::string_view name);

/// Parses a flat JSON object. A "preset" key seeds the experiment before the other
/// keys are applied; unknown keys are rejected.
[[nodiscard]] ExperimentSpec parse_spec_json(std::string_view text);
[[nodiscard]] ExperimentSpec load_spec(const std::filesystem::path& path);

[[nodiscard]] std::unique_ptr<HamiltonianSystem> make_system(const ExperimentSpec& spec);
[[nodiscard]] PhasePoint initial_state(const ExperimentSpec& spec);

}  // namespace extphase
