#include "extphase/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "extphase/errors.hpp"

namespace extphase {
namespace {

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw InvalidArgument(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

PhasePoint::PhasePoint(Vector z) : z_(std::move(z)) {
  if (z_.size() == 0 || z_.size() % 2 != 0) {
    throw InvalidArgument("PhasePoint: packed length must be 2d with d >= 1, got " +
                          std::to_string(z_.size()));
  }
  require_finite(z_, "PhasePoint");
}

PhasePoint::PhasePoint(const Vector& q, const Vector& p) {
  if (q.size() != p.size()) {
    throw DimensionMismatch("PhasePoint: q has length " + std::to_string(q.size()) +
                            " but p has length " + std::to_string(p.size()));
  }
  Vector z(q.size() + p.size());
  z << q, p;
  *this = PhasePoint(std::move(z));
}

PhasePoint PhasePoint::from_packed(Vector z) { return PhasePoint(std::move(z)); }

ExtendedPoint::ExtendedPoint(Vector zeta) : zeta_(std::move(zeta)) {
  if (zeta_.size() == 0 || zeta_.size() % 4 != 0) {
    throw InvalidArgument("ExtendedPoint: packed length must be 4d with d >= 1, got " +
                          std::to_string(zeta_.size()));
  }
  require_finite(zeta_, "ExtendedPoint");
}

ExtendedPoint::ExtendedPoint(const Vector& q, const Vector& x, const Vector& p, const Vector& y) {
  const auto d = q.size();
  if (x.size() != d || p.size() != d || y.size() != d) {
    throw DimensionMismatch("ExtendedPoint: blocks (q, x, p, y) must share one length");
  }
  Vector zeta(4 * d);
  zeta << q, x, p, y;
  *this = ExtendedPoint(std::move(zeta));
}

ExtendedPoint ExtendedPoint::from_packed(Vector zeta) { return ExtendedPoint(std::move(zeta)); }

Vector ExtendedPoint::eta() const {
  Vector out(2 * dim());
  out << q(), y();
  return out;
}

Vector ExtendedPoint::xi() const {
  Vector out(2 * dim());
  out << x(), p();
  return out;
}

ConstraintVector::ConstraintVector(Vector mu) : mu_(std::move(mu)) {
  if (mu_.size() == 0 || mu_.size() % 2 != 0) {
    throw InvalidArgument("ConstraintVector: length must be 2d with d >= 1");
  }
  require_finite(mu_, "ConstraintVector");
}

ConstraintVector ConstraintVector::zero(int d) { return ConstraintVector(Vector::Zero(2 * d)); }

ExtendedPoint embed(const PhasePoint& z) {
  const int d = z.dim();
  Vector zeta(4 * d);
  zeta << z.q(), z.q(), z.p(), z.p();
  return ExtendedPoint::from_packed(std::move(zeta));
}

Vector apply_constraint(const ExtendedPoint& zeta) {
  const int d = zeta.dim();
  Vector out(2 * d);
  out.head(d) = zeta.q() - zeta.x();
  out.tail(d) = zeta.p() - zeta.y();
  return out;
}

Vector apply_constraint_transpose(const Vector& mu) {
  if (mu.size() == 0 || mu.size() % 2 != 0) {
    throw DimensionMismatch("apply_constraint_transpose: mu must have length 2d");
  }
  const auto d = mu.size() / 2;
  Vector out(4 * d);
  out << mu.head(d), -mu.head(d), mu.tail(d), -mu.tail(d);
  return out;
}

Vector apply_constraint_transpose(const ConstraintVector& mu) {
  return apply_constraint_transpose(mu.packed());
}

void shift_by_constraint(ExtendedPoint& zeta, const Vector& mu, double scale) {
  const int d = zeta.dim();
  if (mu.size() != 2 * d) {
    throw DimensionMismatch("shift_by_constraint: mu has length " + std::to_string(mu.size()) +
                            ", expected " + std::to_string(2 * d));
  }
  zeta.q() += scale * mu.head(d);
  zeta.x() -= scale * mu.head(d);
  zeta.p() += scale * mu.tail(d);
  zeta.y() -= scale * mu.tail(d);
}

double defect_norm(const ExtendedPoint& zeta) {
  return std::sqrt((zeta.x() - zeta.q()).squaredNorm() + (zeta.y() - zeta.p()).squaredNorm());
}

PhasePoint restrict_to_phase(const ExtendedPoint& zeta, double tol) {
  const double defect = apply_constraint(zeta).lpNorm<Eigen::Infinity>();
  const double scale = std::max(1.0, zeta.packed().lpNorm<Eigen::Infinity>());
  if (!(defect <= tol * scale)) {
    throw NotOnDiagonal("restrict_to_phase: defect " + std::to_string(defect) +
                            " exceeds tolerance " + std::to_string(tol * scale),
                        defect);
  }
  return PhasePoint(zeta.q(), zeta.p());
}

}  // namespace extphase
