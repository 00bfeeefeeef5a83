#pragma once

// Linear and quadratic first integrals, their lifts to the extended space,
// Poisson brackets and symplecticity measurements.
//
// Extended points are canonical with positions (q, x) and momenta (p, y), so
// every bracket and symplectic form below uses the standard J on a packed
// vector split into a position half and a momentum half.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "extphase/core.hpp"
#include "extphase/hamiltonians.hpp"

namespace extphase {

/// L_a(z) = a^T z with a = (a_q, a_p).
class LinearInvariant {
 public:
  explicit LinearInvariant(Vector a);

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(a_.size() / 2); }
  [[nodiscard]] const Vector& a() const noexcept { return a_; }
  [[nodiscard]] auto a_q() const { return a_.head(dim()); }
  [[nodiscard]] auto a_p() const { return a_.tail(dim()); }

 private:
  Vector a_;
};

/// Q(z) = 1/2 q^T k11 q + q^T k12 p + 1/2 p^T k22 p.
class QuadraticInvariant {
 public:
  /// k11 and k22 must be symmetric to 1e-14 entrywise.
  QuadraticInvariant(Matrix k11, Matrix k12, Matrix k22);

  /// From the full symmetric 2d x 2d matrix kappa.
  [[nodiscard]] static QuadraticInvariant from_full(const Matrix& kappa);

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(k11_.rows()); }
  [[nodiscard]] const Matrix& k11() const noexcept { return k11_; }
  [[nodiscard]] const Matrix& k12() const noexcept { return k12_; }
  [[nodiscard]] const Matrix& k22() const noexcept { return k22_; }
  [[nodiscard]] Matrix full() const;

 private:
  Matrix k11_;
  Matrix k12_;
  Matrix k22_;
};

[[nodiscard]] double eval_linear(const LinearInvariant& inv, const PhasePoint& z);
[[nodiscard]] double eval_quadratic(const QuadraticInvariant& inv, const PhasePoint& z);

/// DQ(z) = kappa z, packed as (D_q Q, D_p Q).
[[nodiscard]] Vector quadratic_gradient(const QuadraticInvariant& inv, const PhasePoint& z);

/// a_hat = 1/2 (a_q, a_q, a_p, a_p) in (q, x, p, y) order.
[[nodiscard]] Vector lift_linear(const LinearInvariant& inv);
[[nodiscard]] double eval_extended_linear(const Vector& a_hat, const ExtendedPoint& zeta);

/// kappa_hat, the symmetric 4d x 4d matrix with Q_hat(zeta) = 1/2 zeta^T kappa_hat zeta.
/// Only meant for tests; evaluation never forms it.
[[nodiscard]] Matrix lift_quadratic(const QuadraticInvariant& inv);

/// Q_hat(zeta) = 1/2 eta^T kappa xi
///             = 1/2 (q^T k11 x + q^T k12 p + y^T k12^T x + y^T k22 p).
[[nodiscard]] double eval_extended_quadratic(const QuadraticInvariant& inv,
                                             const ExtendedPoint& zeta);
/// Gradient of Q_hat in (q, x, p, y) order.
[[nodiscard]] Vector extended_quadratic_gradient(const QuadraticInvariant& inv,
                                                 const ExtendedPoint& zeta);

/// J kappa z = (k12^T q + k22 p, -k11 q - k12 p).
[[nodiscard]] Vector infinitesimal_generator(const QuadraticInvariant& inv, const PhasePoint& z);

/// DF^T J DG for packed gradients of equal even length.
[[nodiscard]] double poisson_bracket(const Vector& grad_f, const Vector& grad_g);

using GradientFn = std::function<Vector(const Vector&)>;

/// {F, G}(z) from gradient providers evaluated at the packed point z.
[[nodiscard]] double poisson_bracket(const GradientFn& grad_f, const GradientFn& grad_g,
                                     const Vector& z);

/// Gradient of H_hat(q, x, p, y) = H(q, y) + H(x, p) in (q, x, p, y) order.
[[nodiscard]] Vector extended_energy_gradient(const HamiltonianSystem& system,
                                              const ExtendedPoint& zeta);

/// Gradient of H_C = (omega/2)(|x - q|^2 + |y - p|^2) in (q, x, p, y) order.
[[nodiscard]] Vector coupling_energy_gradient(double omega, const ExtendedPoint& zeta);

/// Whether Q_hat is conserved by the coupling flow, i.e. {Q_hat, H_C} = 0 for
/// every extended point. With u = x - q and v = y - p,
///   {Q_hat, H_C} = -(omega/2) (u^T k12 u - v^T k12 v + v^T (k11 - k22) u),
/// which vanishes identically iff k12 is antisymmetric and k22 = k11.
/// Both conditions are checked to `tol` entrywise.
[[nodiscard]] bool tao_compatibility(const QuadraticInvariant& inv, double tol = 1e-12);

using PointMap = std::function<Vector(const Vector&)>;

/// ||M^T J M - J||_inf for the central-difference Jacobian M of `map` at `point`.
/// The default step is eps^(1/3) * max(1, ||point||_inf).
[[nodiscard]] double symplecticity_defect(const PointMap& map, const Vector& point,
                                          std::optional<double> fd_step = std::nullopt);

/// A linear or quadratic invariant of a concrete system, addressable by name.
struct NamedInvariant {
  std::string name;
  std::variant<LinearInvariant, QuadraticInvariant> form;

  [[nodiscard]] double eval(const PhasePoint& z) const;
  [[nodiscard]] double eval_extended(const ExtendedPoint& zeta) const;
  [[nodiscard]] Vector gradient(const PhasePoint& z) const;
  [[nodiscard]] bool is_linear() const noexcept {
    return std::holds_alternative<LinearInvariant>(form);
  }
};

/// f(q1, p1) = (2 q1 - 3 p1) / 10 of the test case.
[[nodiscard]] NamedInvariant testcase_L();
/// g(q2, p2) = (q2^2 + 2 p2^2) / 4 of the test case.
[[nodiscard]] NamedInvariant testcase_Q();
/// Total mass sum(q_i^2 + p_i^2), kappa = 2I.
[[nodiscard]] NamedInvariant nls_mass(int d);
/// sum G_i x_i in canonical coordinates.
[[nodiscard]] NamedInvariant vortex_linear_impulse_x(const VortexConfig& cfg);
/// sum G_i y_i in canonical coordinates.
[[nodiscard]] NamedInvariant vortex_linear_impulse_y(const VortexConfig& cfg);
/// sum G_i (x_i^2 + y_i^2) in canonical coordinates.
[[nodiscard]] NamedInvariant vortex_angular_impulse(const VortexConfig& cfg);

/// The known invariants of a built-in system (empty for unknown systems).
[[nodiscard]] std::vector<NamedInvariant> system_invariants(const HamiltonianSystem& system);

/// Looks up one of the names above for `system`; throws InvalidArgument if it
/// does not apply.
[[nodiscard]] NamedInvariant named_invariant(const std::string& name,
                                             const HamiltonianSystem& system);

/// Relative-error floor used when the reference value is zero.
inline constexpr double kDriftFloor = 1e-300;

/// |value - reference| / max(|reference|, kDriftFloor).
[[nodiscard]] double relative_drift(double value, double reference) noexcept;

struct DriftSeries {
  std::vector<std::string> names;
  /// drifts[k][n]: relative drift of invariant k at trajectory index n.
  std::vector<std::vector<double>> drifts;
  /// Euclidean defect norm per point; empty for original-space trajectories.
  std::vector<double> defect;
};

/// Relative drift of each invariant against the first trajectory point.
[[nodiscard]] DriftSeries drift_series(const std::vector<PhasePoint>& trajectory,
                                       const std::vector<NamedInvariant>& invariants);
/// As above with invariants evaluated on the (q, p) block; also fills `defect`.
[[nodiscard]] DriftSeries drift_series(const std::vector<ExtendedPoint>& trajectory,
                                       const std::vector<NamedInvariant>& invariants);

}  // namespace extphase
