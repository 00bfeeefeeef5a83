#include <gtest/gtest.h>

#include <cmath>

#include "extphase/errors.hpp"
#include "extphase/invariants.hpp"
#include "extphase/splitting.hpp"
#include "test_systems.hpp"

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

VortexConfig vortex4() {
  return VortexConfig({4.0, -3.0, -2.0, 7.0}, {{1.0, 2.0}, {-1.5, 1.0}, {-3.0, -1.0}, {2.0, 0.5}});
}

QuadraticInvariant random_quadratic(std::mt19937_64& rng, int d) {
  return QuadraticInvariant(test::random_symmetric(rng, d), test::random_matrix(rng, d),
                            test::random_symmetric(rng, d));
}

Vector finite_difference_gradient(const std::function<double(const Vector&)>& f, const Vector& x) {
  const double h = 1e-6;
  Vector g(x.size());
  Vector shifted = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    shifted[k] = x[k] + h;
    const double up = f(shifted);
    shifted[k] = x[k] - h;
    const double down = f(shifted);
    shifted[k] = x[k];
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

TEST(QuadraticInvariant, FullRoundTripAndValidation) {
  auto rng = test::seeded_rng("QuadraticInvariant.FullRoundTrip", 1);
  const Matrix kappa = test::random_symmetric(rng, 6);
  const auto inv = QuadraticInvariant::from_full(kappa);
  EXPECT_EQ(inv.dim(), 3);
  EXPECT_EQ(inv.full(), kappa);
  Matrix asymmetric = Matrix::Identity(4, 4);
  asymmetric(0, 1) = 1.0;
  EXPECT_THROW((void)QuadraticInvariant::from_full(asymmetric), InvalidArgument);
  EXPECT_THROW(QuadraticInvariant(Matrix::Zero(2, 2), Matrix::Zero(2, 2), Matrix::Zero(3, 3)),
               InvalidArgument);
  EXPECT_THROW(LinearInvariant(vec({1, 2, 3})), InvalidArgument);
}

TEST(Invariants, EvaluationMatchesClosedForm) {
  auto rng = test::seeded_rng("Invariants.EvaluationMatchesClosedForm", 2);
  const auto inv = random_quadratic(rng, 3);
  const PhasePoint z = PhasePoint::from_packed(test::random_vector(rng, 6));
  EXPECT_NEAR(eval_quadratic(inv, z), 0.5 * z.packed().dot(inv.full() * z.packed()), 1e-14);
  EXPECT_LT((quadratic_gradient(inv, z) - inv.full() * z.packed()).lpNorm<Eigen::Infinity>(),
            1e-14);
  Matrix j = Matrix::Zero(6, 6);
  j.topRightCorner(3, 3).setIdentity();
  j.bottomLeftCorner(3, 3) = -Matrix::Identity(3, 3);
  EXPECT_LT((infinitesimal_generator(inv, z) - j * inv.full() * z.packed())
                .lpNorm<Eigen::Infinity>(),
            1e-14);
}

TEST(Invariants, FourVortexImpulses) {
  const VortexSystem sys(vortex4());
  const PhasePoint z = sys.initial_state();
  EXPECT_NEAR(vortex_linear_impulse_x(vortex4()).eval(z), 28.5, 1e-13);
  EXPECT_NEAR(vortex_linear_impulse_y(vortex4()).eval(z), 10.5, 1e-13);
  EXPECT_NEAR(vortex_angular_impulse(vortex4()).eval(z), 20.0, 1e-13);
}

TEST(Invariants, TestCaseAndMassValues) {
  const PhasePoint z(vec({-1, 2}), vec({1, -1}));
  EXPECT_DOUBLE_EQ(testcase_L().eval(z), -0.5);
  EXPECT_DOUBLE_EQ(testcase_Q().eval(z), 1.5);
  EXPECT_DOUBLE_EQ(nls_mass(2).eval(z), 7.0);
  EXPECT_THROW((void)nls_mass(0), InvalidArgument);
}

TEST(Lifts, AgreeWithOriginalOnDiagonal) {
  auto rng = test::seeded_rng("Lifts.AgreeWithOriginalOnDiagonal", 3);
  const auto quad = random_quadratic(rng, 3);
  const LinearInvariant lin(test::random_vector(rng, 6));
  const PhasePoint z = PhasePoint::from_packed(test::random_vector(rng, 6));
  const ExtendedPoint zeta = embed(z);
  EXPECT_NEAR(eval_extended_quadratic(quad, zeta), eval_quadratic(quad, z), 1e-14);
  EXPECT_NEAR(eval_extended_linear(lift_linear(lin), zeta), eval_linear(lin, z), 1e-14);
}

TEST(Lifts, LiftedMatrixIsSymmetricAndReproducesEvaluation) {
  auto rng = test::seeded_rng("Lifts.LiftedMatrix", 4);
  const auto quad = random_quadratic(rng, 2);
  const Matrix kappa_hat = lift_quadratic(quad);
  ASSERT_EQ(kappa_hat.rows(), 8);
  EXPECT_LT((kappa_hat - kappa_hat.transpose()).lpNorm<Eigen::Infinity>(), 1e-15);
  for (int trial = 0; trial < 5; ++trial) {
    const ExtendedPoint zeta = ExtendedPoint::from_packed(test::random_vector(rng, 8));
    EXPECT_NEAR(eval_extended_quadratic(quad, zeta),
                0.5 * zeta.packed().dot(kappa_hat * zeta.packed()), 1e-14);
    EXPECT_LT((extended_quadratic_gradient(quad, zeta) - kappa_hat * zeta.packed())
                  .lpNorm<Eigen::Infinity>(),
              1e-14);
  }
}

TEST(PoissonBracket, CanonicalPairsAndAntisymmetry) {
  EXPECT_DOUBLE_EQ(poisson_bracket(vec({1, 0}), vec({0, 1})), 1.0);
  EXPECT_DOUBLE_EQ(poisson_bracket(vec({0, 1}), vec({1, 0})), -1.0);
  EXPECT_THROW((void)poisson_bracket(vec({1, 0}), vec({1, 0, 0, 0})), DimensionMismatch);
}

TEST(PoissonBracket, SystemInvariantsCommuteWithEnergy) {
  auto rng = test::seeded_rng("PoissonBracket.SystemInvariants", 5);
  const TestCaseSystem testcase;
  const NlsSystem nls(4);
  const VortexSystem vortices(vortex4());
  struct Case {
    const HamiltonianSystem* sys;
    Vector centre;
    double spread;
  };
  const Case cases[] = {{&testcase, Vector::Zero(4), 2.0},
                        {&nls, Vector::Zero(8), 1.0},
                        {&vortices, vortices.initial_state().packed(), 0.2}};
  for (const auto& c : cases) {
    for (const auto& inv : system_invariants(*c.sys)) {
      for (int trial = 0; trial < 5; ++trial) {
        const Vector z = c.centre + test::random_vector(rng, c.centre.size(), -c.spread, c.spread);
        const double b = poisson_bracket(
            [&](const Vector& x) { return inv.gradient(PhasePoint::from_packed(x)); },
            [&](const Vector& x) { return c.sys->gradient(PhasePoint::from_packed(x)); }, z);
        EXPECT_NEAR(b, 0.0, 1e-12) << c.sys->name() << " " << inv.name;
      }
    }
  }
}

TEST(ExtendedGradients, MatchFiniteDifferences) {
  auto rng = test::seeded_rng("ExtendedGradients.MatchFiniteDifferences", 6);
  const TestCaseSystem sys;
  const ExtendedPoint zeta = ExtendedPoint::from_packed(test::random_vector(rng, 8));
  const Vector fd = finite_difference_gradient(
      [&](const Vector& v) {
        const auto e = ExtendedPoint::from_packed(v);
        return sys.energy(e.q(), e.y()) + sys.energy(e.x(), e.p());
      },
      zeta.packed());
  EXPECT_LT((extended_energy_gradient(sys, zeta) - fd).lpNorm<Eigen::Infinity>(), 1e-8);

  const double omega = 2.5;
  const Vector fd_c = finite_difference_gradient(
      [&](const Vector& v) {
        const auto e = ExtendedPoint::from_packed(v);
        return 0.5 * omega * ((e.x() - e.q()).squaredNorm() + (e.y() - e.p()).squaredNorm());
      },
      zeta.packed());
  EXPECT_LT((coupling_energy_gradient(omega, zeta) - fd_c).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(ExtendedGradients, LiftedInvariantsCommuteWithExtendedEnergy) {
  auto rng = test::seeded_rng("ExtendedGradients.LiftedCommute", 7);
  const TestCaseSystem sys;
  const auto q_inv = testcase_Q();
  const auto& quad = std::get<QuadraticInvariant>(q_inv.form);
  const Vector a_hat = lift_linear(std::get<LinearInvariant>(testcase_L().form));
  for (int trial = 0; trial < 5; ++trial) {
    const ExtendedPoint zeta = ExtendedPoint::from_packed(test::random_vector(rng, 8, -2, 2));
    const Vector grad_h = extended_energy_gradient(sys, zeta);
    EXPECT_NEAR(poisson_bracket(extended_quadratic_gradient(quad, zeta), grad_h), 0.0, 1e-13);
    EXPECT_NEAR(poisson_bracket(a_hat, grad_h), 0.0, 1e-13);
  }
}

TEST(TaoCompatibility, BracketWithCouplingMatchesCorrectedIdentity) {
  auto rng = test::seeded_rng("TaoCompatibility.BracketIdentity", 8);
  const double omega = 1.7;
  for (int trial = 0; trial < 10; ++trial) {
    const auto quad = random_quadratic(rng, 3);
    const ExtendedPoint zeta = ExtendedPoint::from_packed(test::random_vector(rng, 12));
    const Vector u = zeta.x() - zeta.q();
    const Vector v = zeta.y() - zeta.p();
    const double expected =
        -0.5 * omega *
        (u.dot(quad.k12() * u) - v.dot(quad.k12() * v) + v.dot((quad.k11() - quad.k22()) * u));
    const double bracket = poisson_bracket(extended_quadratic_gradient(quad, zeta),
                                           coupling_energy_gradient(omega, zeta));
    EXPECT_NEAR(bracket, expected, 1e-13);
  }
}

TEST(TaoCompatibility, Classification) {
  auto rng = test::seeded_rng("TaoCompatibility.Classification", 9);
  EXPECT_TRUE(tao_compatibility(std::get<QuadraticInvariant>(nls_mass(4).form)));
  EXPECT_TRUE(tao_compatibility(std::get<QuadraticInvariant>(vortex_angular_impulse(vortex4()).form)));
  EXPECT_FALSE(tao_compatibility(std::get<QuadraticInvariant>(testcase_Q().form)));

  const Matrix s = test::random_symmetric(rng, 3);
  const Matrix m = test::random_matrix(rng, 3);
  const Matrix antisym = m - m.transpose();
  const QuadraticInvariant compatible(s, antisym, s);
  EXPECT_TRUE(tao_compatibility(compatible));
  EXPECT_FALSE(tao_compatibility(QuadraticInvariant(s, Matrix::Zero(3, 3), -s)));
  EXPECT_FALSE(tao_compatibility(QuadraticInvariant(s, m + m.transpose(), s)));

  // A compatible lift is exactly conserved by the coupling flow.
  const ExtendedPoint start = ExtendedPoint::from_packed(test::random_vector(rng, 12));
  ExtendedPoint zeta = start;
  coupling_flow(4.0, 0.3, zeta);
  EXPECT_NEAR(eval_extended_quadratic(compatible, zeta), eval_extended_quadratic(compatible, start),
              1e-14);
}

TEST(Symplecticity, DetectsSymplecticAndNonSymplecticMaps) {
  auto rng = test::seeded_rng("Symplecticity.Detects", 10);
  const Vector point = test::random_vector(rng, 4);
  const double angle = 0.3;
  const PointMap rotation = [&](const Vector& z) {
    Vector out(4);
    out << std::cos(angle) * z[0] + std::sin(angle) * z[2], z[1] + 0.5 * z[3],
        -std::sin(angle) * z[0] + std::cos(angle) * z[2], z[3];
    return out;
  };
  EXPECT_LT(symplecticity_defect(rotation, point), 1e-9);
  const PointMap stretch = [](const Vector& z) {
    Vector out = z;
    out[0] *= 2.0;
    return out;
  };
  EXPECT_NEAR(symplecticity_defect(stretch, point), 1.0, 1e-8);

  const TestCaseSystem sys;
  const PointMap pihajoki = [&](const Vector& v) {
    Evaluator ev(sys);
    ExtendedPoint zeta = ExtendedPoint::from_packed(v);
    pihajoki_step(ev, 0.1, zeta);
    return zeta.packed();
  };
  EXPECT_LT(symplecticity_defect(pihajoki, test::random_vector(rng, 8)), 1e-8);
}

TEST(NamedInvariants, LookupBySystem) {
  const TestCaseSystem testcase;
  const NlsSystem nls(3);
  EXPECT_EQ(system_invariants(testcase).size(), 2u);
  EXPECT_EQ(named_invariant("nls_mass", nls).name, "nls_mass");
  EXPECT_TRUE(named_invariant("testcase_L", testcase).is_linear());
  EXPECT_THROW((void)named_invariant("nls_mass", testcase), InvalidArgument);
  EXPECT_TRUE(system_invariants(test::HarmonicOscillator(1)).empty());
}

TEST(Drift, RelativeDriftUsesFloorForZeroReference) {
  EXPECT_NEAR(relative_drift(1.1, 1.0), 0.1, 1e-15);
  EXPECT_NEAR(relative_drift(-3.0, -2.0), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(relative_drift(0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(relative_drift(1e-310, 0.0), 1e-310 / kDriftFloor);
}

TEST(Drift, SeriesOverPhaseAndExtendedTrajectories) {
  const std::vector<PhasePoint> traj = {PhasePoint(vec({-1, 2}), vec({1, -1})),
                                        PhasePoint(vec({-1, 2}), vec({1, -2}))};
  const auto series = drift_series(traj, {testcase_L(), testcase_Q()});
  ASSERT_EQ(series.names.size(), 2u);
  EXPECT_EQ(series.drifts[0][0], 0.0);
  EXPECT_EQ(series.drifts[0][1], 0.0);
  EXPECT_DOUBLE_EQ(series.drifts[1][1], 1.0);
  EXPECT_TRUE(series.defect.empty());

  const std::vector<ExtendedPoint> ext = {embed(traj[0]),
                                          ExtendedPoint(vec({-1, 2}), vec({-1, 2.5}), vec({1, -1}),
                                                        vec({1, -1}))};
  const auto ext_series = drift_series(ext, {testcase_L()});
  ASSERT_EQ(ext_series.defect.size(), 2u);
  EXPECT_DOUBLE_EQ(ext_series.defect[1], 0.5);
  EXPECT_EQ(ext_series.drifts[0][1], 0.0);
}

}  // namespace
}  // namespace extphase
