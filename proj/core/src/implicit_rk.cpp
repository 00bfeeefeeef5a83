#include "extphase/implicit_rk.hpp"

#include <cmath>
#include <string>

#include "extphase/errors.hpp"

namespace extphase {
namespace {

constexpr double kSqrt3 = 1.7320508075688772935274463415058723669;
constexpr double kSqrt15 = 3.8729833462074168851792653997823996108;

}  // namespace

ButcherTableau gl_tableau(int order) {
  ButcherTableau t;
  switch (order) {
    case 2:
      t.stages = 1;
      t.a = Matrix::Constant(1, 1, 0.5);
      t.b = Vector::Constant(1, 1.0);
      t.c = Vector::Constant(1, 0.5);
      break;
    case 4:
      t.stages = 2;
      t.a.resize(2, 2);
      t.a << 0.25, 0.25 - kSqrt3 / 6.0,
             0.25 + kSqrt3 / 6.0, 0.25;
      t.b.resize(2);
      t.b << 0.5, 0.5;
      t.c.resize(2);
      t.c << 0.5 - kSqrt3 / 6.0, 0.5 + kSqrt3 / 6.0;
      break;
    case 6:
      t.stages = 3;
      t.a.resize(3, 3);
      t.a << 5.0 / 36.0, 2.0 / 9.0 - kSqrt15 / 15.0, 5.0 / 36.0 - kSqrt15 / 30.0,
             5.0 / 36.0 + kSqrt15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - kSqrt15 / 24.0,
             5.0 / 36.0 + kSqrt15 / 30.0, 2.0 / 9.0 + kSqrt15 / 15.0, 5.0 / 36.0;
      t.b.resize(3);
      t.b << 5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0;
      t.c.resize(3);
      t.c << 0.5 - kSqrt15 / 10.0, 0.5, 0.5 + kSqrt15 / 10.0;
      break;
    default:
      throw UnsupportedOrder("gl_tableau: Gauss-Legendre order must be 2, 4 or 6, got " +
                             std::to_string(order));
  }
  return t;
}

GaussLegendreStepper::GaussLegendreStepper(ButcherTableau tableau, SolverConfig cfg)
    : tableau_(std::move(tableau)), cfg_(cfg) {}

GlStep GaussLegendreStepper::step(Evaluator& ev, double dt, const PhasePoint& z) {
  const int d = z.dim();
  if (d != ev.dim()) {
    throw DimensionMismatch("gl_step: state dimension " + std::to_string(d) +
                            " does not match system dimension " + std::to_string(ev.dim()));
  }
  const int s = tableau_.stages;
  const std::uint64_t evals_before = ev.counter().gradient_evals();

  // Column i holds the slope k_i = (dq/dt, dp/dt) of stage i.
  Matrix slopes = Matrix::Zero(2 * d, s);
  if (cfg_.warm_start() && last_slopes_ && last_slopes_->rows() == 2 * d) {
    slopes = *last_slopes_;
  }
  Matrix next(2 * d, s);
  Vector stage(2 * d);

  int sweeps = 0;
  double change = 0.0;
  while (true) {
    for (int i = 0; i < s; ++i) {
      stage = z.packed() + dt * (slopes * tableau_.a.row(i).transpose());
      ev.gradient(stage.head(d), stage.tail(d));
      next.col(i).head(d) = ev.dp();
      next.col(i).tail(d) = -ev.dq();
    }
    ++sweeps;
    change = (next - slopes).lpNorm<Eigen::Infinity>();
    slopes.swap(next);
    if (change <= cfg_.tol()) {
      break;
    }
    if (!std::isfinite(change) || sweeps >= cfg_.max_iter()) {
      throw NonConvergence("gl_step: fixed-point sweeps did not converge in " +
                               std::to_string(sweeps) + " sweeps (change " +
                               std::to_string(change) + ")",
                           Eigen::Map<const Vector>(slopes.data(), slopes.size()), change, sweeps);
    }
  }

  if (cfg_.warm_start()) {
    last_slopes_ = slopes;
  }

  Vector increment = dt * (slopes * tableau_.b);
  Vector z_next = z.packed() + increment;
  StepStats stats;
  stats.iterations = sweeps;
  stats.vf_evals = ev.counter().gradient_evals() - evals_before;
  stats.converged = true;
  stats.final_residual = change;
  return GlStep{PhasePoint::from_packed(std::move(z_next)), stats, std::move(increment)};
}

GlStep gl_step(Evaluator& ev, double dt, const PhasePoint& z, const ButcherTableau& tableau,
               const SolverConfig& cfg) {
  GaussLegendreStepper stepper(tableau, SolverConfig(cfg.tol(), cfg.max_iter(), cfg.method()));
  return stepper.step(ev, dt, z);
}

}  // namespace extphase
