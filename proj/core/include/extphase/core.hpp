#pragma once

// Phase-space points, extended-phase-space points, and the diagonal constraint
//
//   N = ker A,   A = [ I  -I  0   0 ]
//                    [ 0   0  I  -I ]
//
// acting on extended points stored in the block order (q, x, p, y).

#include <Eigen/Dense>

namespace extphase {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<Vector>;
using ConstVectorRef = Eigen::Ref<const Vector>;

/// Default relative tolerance for membership of the diagonal N.
inline constexpr double kDiagonalTolerance = 1e-12;

/// Canonical state z = (q, p) in T*R^d, stored packed as a vector of length 2d.
class PhasePoint {
 public:
  PhasePoint(const Vector& q, const Vector& p);

  /// Builds from a packed (q, p) vector; its length must be even and positive.
  [[nodiscard]] static PhasePoint from_packed(Vector z);

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(z_.size() / 2); }
  [[nodiscard]] auto q() const { return z_.head(dim()); }
  [[nodiscard]] auto p() const { return z_.tail(dim()); }
  [[nodiscard]] const Vector& packed() const noexcept { return z_; }

  friend bool operator==(const PhasePoint& a, const PhasePoint& b) {
    return a.z_.size() == b.z_.size() && a.z_ == b.z_;
  }

 private:
  explicit PhasePoint(Vector z);
  Vector z_;
};

/// Extended state zeta = (q, x, p, y) in T*R^{2d}.
///
/// (q, y) and (x, p) are the two copies eta and xi of the original phase space.
/// Construction validates shape and finiteness; the mutable block accessors are
/// for in-place stepping.
class ExtendedPoint {
 public:
  ExtendedPoint(const Vector& q, const Vector& x, const Vector& p, const Vector& y);

  /// Builds from a packed (q, x, p, y) vector; its length must be a positive multiple of 4.
  [[nodiscard]] static ExtendedPoint from_packed(Vector zeta);

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(zeta_.size() / 4); }

  [[nodiscard]] auto q() const { return zeta_.segment(0, dim()); }
  [[nodiscard]] auto x() const { return zeta_.segment(dim(), dim()); }
  [[nodiscard]] auto p() const { return zeta_.segment(2 * dim(), dim()); }
  [[nodiscard]] auto y() const { return zeta_.segment(3 * dim(), dim()); }
  [[nodiscard]] auto q() { return zeta_.segment(0, dim()); }
  [[nodiscard]] auto x() { return zeta_.segment(dim(), dim()); }
  [[nodiscard]] auto p() { return zeta_.segment(2 * dim(), dim()); }
  [[nodiscard]] auto y() { return zeta_.segment(3 * dim(), dim()); }

  /// eta = (q, y), gathered into a new vector.
  [[nodiscard]] Vector eta() const;
  /// xi = (x, p), gathered into a new vector.
  [[nodiscard]] Vector xi() const;

  [[nodiscard]] const Vector& packed() const noexcept { return zeta_; }
  [[nodiscard]] Vector& packed() noexcept { return zeta_; }

  friend bool operator==(const ExtendedPoint& a, const ExtendedPoint& b) {
    return a.zeta_.size() == b.zeta_.size() && a.zeta_ == b.zeta_;
  }

 private:
  explicit ExtendedPoint(Vector zeta);
  Vector zeta_;
};

/// Multiplier mu in R^{2d} of the symmetric projection, split as (mu_q, mu_p).
class ConstraintVector {
 public:
  explicit ConstraintVector(Vector mu);
  [[nodiscard]] static ConstraintVector zero(int d);

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(mu_.size() / 2); }
  [[nodiscard]] auto position_part() const { return mu_.head(dim()); }
  [[nodiscard]] auto momentum_part() const { return mu_.tail(dim()); }
  [[nodiscard]] const Vector& packed() const noexcept { return mu_; }

 private:
  Vector mu_;
};

/// (q, p) -> (q, q, p, p).
[[nodiscard]] ExtendedPoint embed(const PhasePoint& z);

/// Returns the (q, p) block of zeta after checking it lies on the diagonal:
/// ||A zeta||_inf <= tol * max(1, ||zeta||_inf), otherwise throws NotOnDiagonal.
[[nodiscard]] PhasePoint restrict_to_phase(const ExtendedPoint& zeta,
                                           double tol = kDiagonalTolerance);

/// A zeta = (q - x, p - y).
[[nodiscard]] Vector apply_constraint(const ExtendedPoint& zeta);

/// A^T mu = (mu_q, -mu_q, mu_p, -mu_p), as a packed extended-space vector.
[[nodiscard]] Vector apply_constraint_transpose(const ConstraintVector& mu);
[[nodiscard]] Vector apply_constraint_transpose(const Vector& mu);

/// zeta += scale * A^T mu, without allocating.
void shift_by_constraint(ExtendedPoint& zeta, const Vector& mu, double scale = 1.0);

/// Euclidean norm of the defect (x - q, y - p).
[[nodiscard]] double defect_norm(const ExtendedPoint& zeta);

}  // namespace extphase
