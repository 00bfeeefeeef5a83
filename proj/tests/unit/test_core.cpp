#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "extphase/core.hpp"
#include "extphase/errors.hpp"

namespace extphase {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const double x : v) {
    out[i++] = x;
  }
  return out;
}

TEST(PhasePoint, StoresPackedQThenP) {
  const PhasePoint z(vec({1, 2}), vec({3, 4}));
  EXPECT_EQ(z.dim(), 2);
  EXPECT_EQ(z.packed(), vec({1, 2, 3, 4}));
  EXPECT_EQ(Vector(z.q()), vec({1, 2}));
  EXPECT_EQ(Vector(z.p()), vec({3, 4}));
}

TEST(PhasePoint, RejectsBadShapesAndNonFiniteEntries) {
  EXPECT_THROW(PhasePoint(Vector(0), Vector(0)), InvalidArgument);
  EXPECT_THROW(PhasePoint(vec({1, 2}), vec({1})), DimensionMismatch);
  EXPECT_THROW(PhasePoint(vec({std::nan("")}), vec({1})), InvalidArgument);
  EXPECT_THROW(PhasePoint(vec({1}), vec({std::numeric_limits<double>::infinity()})),
               InvalidArgument);
  EXPECT_THROW((void)PhasePoint::from_packed(vec({1, 2, 3})), InvalidArgument);
}

TEST(ExtendedPoint, BlockLayoutIsQXPY) {
  const ExtendedPoint zeta(vec({1}), vec({2}), vec({3}), vec({4}));
  EXPECT_EQ(zeta.packed(), vec({1, 2, 3, 4}));
  EXPECT_EQ(zeta.eta(), vec({1, 4}));
  EXPECT_EQ(zeta.xi(), vec({2, 3}));
  EXPECT_THROW((void)ExtendedPoint::from_packed(vec({1, 2, 3, 4, 5, 6})), InvalidArgument);
  EXPECT_THROW(ExtendedPoint(vec({1}), vec({2, 3}), vec({3}), vec({4})), DimensionMismatch);
}

TEST(Embedding, EmbedThenRestrictIsIdentity) {
  const PhasePoint z(vec({-1, 2}), vec({1, -1}));
  const ExtendedPoint zeta = embed(z);
  EXPECT_EQ(zeta.packed(), vec({-1, 2, -1, 2, 1, -1, 1, -1}));
  EXPECT_EQ(defect_norm(zeta), 0.0);
  EXPECT_EQ(restrict_to_phase(zeta), z);
}

TEST(Embedding, RestrictRejectsOffDiagonalPoint) {
  const ExtendedPoint zeta(vec({1}), vec({1.1}), vec({0}), vec({0}));
  try {
    (void)restrict_to_phase(zeta);
    FAIL() << "expected NotOnDiagonal";
  } catch (const NotOnDiagonal& e) {
    EXPECT_NEAR(e.defect(), 0.1, 1e-15);
  }
  EXPECT_NO_THROW((void)restrict_to_phase(zeta, 0.2));
}

TEST(Embedding, RestrictToleranceScalesWithMagnitude) {
  const ExtendedPoint zeta(vec({1e6}), vec({1e6 + 1e-7}), vec({0}), vec({0}));
  EXPECT_NO_THROW((void)restrict_to_phase(zeta));
}

TEST(Constraint, ApplyAndTranspose) {
  const ExtendedPoint zeta(vec({1, 2}), vec({0.5, 2.5}), vec({3, 4}), vec({1, 1}));
  EXPECT_EQ(apply_constraint(zeta), vec({0.5, -0.5, 2, 3}));
  const ConstraintVector mu(vec({1, 2, 3, 4}));
  EXPECT_EQ(mu.dim(), 2);
  EXPECT_EQ(apply_constraint_transpose(mu), vec({1, 2, -1, -2, 3, 4, -3, -4}));
  EXPECT_EQ(apply_constraint_transpose(vec({1, 2, 3, 4})), apply_constraint_transpose(mu));
  EXPECT_DOUBLE_EQ(defect_norm(zeta), std::sqrt(0.25 + 0.25 + 4 + 9));
}

TEST(Constraint, AAtIsTwiceIdentity) {
  const Vector mu = vec({0.3, -1.7, 2.2, 0.9});
  const ExtendedPoint shifted = ExtendedPoint::from_packed(apply_constraint_transpose(mu));
  EXPECT_EQ(apply_constraint(shifted), 2.0 * mu);
}

TEST(Constraint, ShiftMatchesTranspose) {
  ExtendedPoint zeta(vec({1}), vec({2}), vec({3}), vec({4}));
  shift_by_constraint(zeta, vec({0.5, -1}), 2.0);
  EXPECT_EQ(zeta.packed(), vec({2, 1, 1, 6}));
  EXPECT_THROW(shift_by_constraint(zeta, vec({1, 2, 3, 4})), DimensionMismatch);
}

TEST(ConstraintVector, ZeroHasRequestedDimension) {
  const ConstraintVector mu = ConstraintVector::zero(3);
  EXPECT_EQ(mu.packed(), Vector::Zero(6));
  EXPECT_THROW(ConstraintVector(vec({1, 2, 3})), InvalidArgument);
}

}  // namespace
}  // namespace extphase
