#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "extphase/core.hpp"

namespace extphase {

/// A Hamiltonian H(q, p) on T*R^d with analytic partial gradients.
///
/// Implementations are immutable and may be shared across threads. Gradient
/// evaluations are counted by Evaluator, never by the system itself.
class HamiltonianSystem {
 public:
  virtual ~HamiltonianSystem() = default;

  [[nodiscard]] virtual int dim() const noexcept = 0;
  [[nodiscard]] virtual std::string_view name() const noexcept = 0;
  [[nodiscard]] virtual double energy(ConstVectorRef q, ConstVectorRef p) const = 0;

  /// Writes D1H(q, p) into dq and D2H(q, p) into dp.
  virtual void gradient(ConstVectorRef q, ConstVectorRef p, VectorRef dq, VectorRef dp) const = 0;

  [[nodiscard]] double energy(const PhasePoint& z) const;
  /// Packed (D1H, D2H) at z.
  [[nodiscard]] Vector gradient(const PhasePoint& z) const;
};

/// Number of joint (D1H, D2H) evaluations; one unit is one vector-field evaluation.
class EvalCounter {
 public:
  void record_gradient() noexcept { ++n_grad_; }
  [[nodiscard]] std::uint64_t gradient_evals() const noexcept { return n_grad_; }

 private:
  std::uint64_t n_grad_ = 0;
};

/// Per-trajectory evaluation context: a system, its counter, and scratch buffers.
///
/// Not thread-safe; give every concurrently integrated trajectory its own Evaluator.
class Evaluator {
 public:
  explicit Evaluator(const HamiltonianSystem& system);

  [[nodiscard]] int dim() const noexcept { return system_->dim(); }
  [[nodiscard]] const HamiltonianSystem& system() const noexcept { return *system_; }
  [[nodiscard]] const EvalCounter& counter() const noexcept { return counter_; }

  /// Evaluates (D1H, D2H) at (q, p) into dq()/dp(); valid until the next call.
  void gradient(ConstVectorRef q, ConstVectorRef p);
  [[nodiscard]] const Vector& dq() const noexcept { return dq_; }
  [[nodiscard]] const Vector& dp() const noexcept { return dp_; }

  /// Energy is diagnostic only and is not counted.
  [[nodiscard]] double energy(ConstVectorRef q, ConstVectorRef p) const {
    return system_->energy(q, p);
  }

 private:
  const HamiltonianSystem* system_;
  EvalCounter counter_;
  Vector dq_;
  Vector dp_;
};

// ---------------------------------------------------------------------------
// Test case with a linear and a quadratic invariant (d = 2):
//   H = exp(f(q1, p1)) sin(g(q2, p2)),  f(a, b) = (2a - 3b)/10,  g(a, b) = (a^2 + 2b^2)/4.
// ---------------------------------------------------------------------------
class TestCaseSystem final : public HamiltonianSystem {
 public:
  [[nodiscard]] int dim() const noexcept override { return 2; }
  [[nodiscard]] std::string_view name() const noexcept override { return "testcase"; }
  [[nodiscard]] double energy(ConstVectorRef q, ConstVectorRef p) const override;
  void gradient(ConstVectorRef q, ConstVectorRef p, VectorRef dq, VectorRef dp) const override;
  using HamiltonianSystem::energy;
  using HamiltonianSystem::gradient;

  /// f(q1, p1), the linear invariant.
  [[nodiscard]] static double linear_part(double q1, double p1) noexcept;
  /// g(q2, p2), the quadratic invariant.
  [[nodiscard]] static double quadratic_part(double q2, double p2) noexcept;
};

[[nodiscard]] TestCaseSystem make_testcase();

// ---------------------------------------------------------------------------
// Finite-dimensional nonlinear Schroedinger lattice with quartic coupling.
// ---------------------------------------------------------------------------
class NlsSystem final : public HamiltonianSystem {
 public:
  explicit NlsSystem(int sites);

  [[nodiscard]] int dim() const noexcept override { return sites_; }
  [[nodiscard]] std::string_view name() const noexcept override { return "nls"; }
  [[nodiscard]] double energy(ConstVectorRef q, ConstVectorRef p) const override;
  void gradient(ConstVectorRef q, ConstVectorRef p, VectorRef dq, VectorRef dp) const override;
  using HamiltonianSystem::energy;
  using HamiltonianSystem::gradient;

 private:
  int sites_;
};

[[nodiscard]] NlsSystem make_nls(int d);

// ---------------------------------------------------------------------------
// Point vortices in the plane, written in canonical coordinates
//   (q_i, p_i) = (sqrt|G_i| x_i, sqrt|G_i| sgn(G_i) y_i).
// ---------------------------------------------------------------------------

/// Minimum planar separation before two vortices count as collided.
inline constexpr double kVortexCollisionDistance = 1e-12;

struct PlanarPosition {
  double x = 0.0;
  double y = 0.0;
};

/// Circulations and initial planar positions of N point vortices.
class VortexConfig {
 public:
  VortexConfig(std::vector<double> circulations, std::vector<PlanarPosition> positions);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(circulations_.size()); }
  [[nodiscard]] const std::vector<double>& circulations() const noexcept { return circulations_; }
  [[nodiscard]] const std::vector<PlanarPosition>& positions() const noexcept { return positions_; }

  /// sqrt|G_i|
  [[nodiscard]] double scale(int i) const;
  /// sgn(G_i) in {+1, -1}
  [[nodiscard]] double sign(int i) const;

 private:
  std::vector<double> circulations_;
  std::vector<PlanarPosition> positions_;
};

/// Planar positions -> canonical (q, p); lengths must match cfg.size().
[[nodiscard]] PhasePoint canonical_from_planar(const VortexConfig& cfg,
                                               const std::vector<PlanarPosition>& planar);
[[nodiscard]] std::vector<PlanarPosition> planar_from_canonical(const VortexConfig& cfg,
                                                                const PhasePoint& z);

class VortexSystem final : public HamiltonianSystem {
 public:
  explicit VortexSystem(VortexConfig cfg);

  [[nodiscard]] int dim() const noexcept override { return cfg_.size(); }
  [[nodiscard]] std::string_view name() const noexcept override { return "vortices"; }
  [[nodiscard]] double energy(ConstVectorRef q, ConstVectorRef p) const override;
  void gradient(ConstVectorRef q, ConstVectorRef p, VectorRef dq, VectorRef dp) const override;
  using HamiltonianSystem::energy;
  using HamiltonianSystem::gradient;

  [[nodiscard]] const VortexConfig& config() const noexcept { return cfg_; }
  /// The configured initial positions in canonical coordinates.
  [[nodiscard]] PhasePoint initial_state() const;

 private:
  VortexConfig cfg_;
  Vector scale_;     // sqrt|G_i|
  Vector sign_;      // sgn(G_i)
};

[[nodiscard]] VortexSystem make_vortices(VortexConfig cfg);

/// Max-norm relative error between the analytic gradient and central differences
/// with absolute step h per component, relative to max(||grad||_inf, 1e-300).
[[nodiscard]] double check_gradient(const HamiltonianSystem& system, const PhasePoint& z, double h);

}  // namespace extphase
