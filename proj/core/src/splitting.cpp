#include "extphase/splitting.hpp"

#include <cmath>
#include <string>

#include "extphase/errors.hpp"

namespace extphase {
namespace {

void require_dim(const Evaluator& ev, const ExtendedPoint& zeta) {
  if (ev.dim() != zeta.dim()) {
    throw DimensionMismatch("extended step: state dimension " + std::to_string(zeta.dim()) +
                            " does not match system dimension " + std::to_string(ev.dim()));
  }
}

}  // namespace

void flow_a(Evaluator& ev, double t, ExtendedPoint& zeta) {
  require_dim(ev, zeta);
  ev.gradient(zeta.q(), zeta.y());
  zeta.x() += t * ev.dp();
  zeta.p() -= t * ev.dq();
}

void flow_b(Evaluator& ev, double t, ExtendedPoint& zeta) {
  require_dim(ev, zeta);
  ev.gradient(zeta.x(), zeta.p());
  zeta.q() += t * ev.dp();
  zeta.y() -= t * ev.dq();
}

void pihajoki_step(Evaluator& ev, double dt, ExtendedPoint& zeta) {
  flow_a(ev, 0.5 * dt, zeta);
  flow_b(ev, dt, zeta);
  flow_a(ev, 0.5 * dt, zeta);
}

void coupling_flow(double omega, double t, ExtendedPoint& zeta) {
  const double angle = 2.0 * omega * t;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const int d = zeta.dim();
  auto q = zeta.q();
  auto x = zeta.x();
  auto p = zeta.p();
  auto y = zeta.y();
  for (int i = 0; i < d; ++i) {
    const double sum_q = q[i] + x[i];
    const double sum_p = p[i] + y[i];
    const double u = q[i] - x[i];
    const double v = p[i] - y[i];
    const double u_new = c * u + s * v;
    const double v_new = c * v - s * u;
    q[i] = 0.5 * (sum_q + u_new);
    x[i] = 0.5 * (sum_q - u_new);
    p[i] = 0.5 * (sum_p + v_new);
    y[i] = 0.5 * (sum_p - v_new);
  }
}

void TaoParams::validate() const {
  if (!std::isfinite(omega) || omega < 0.0) {
    throw InvalidArgument("TaoParams: omega must be finite and non-negative");
  }
}

void tao_step(Evaluator& ev, double dt, ExtendedPoint& zeta, const TaoParams& params) {
  if (params.omega == 0.0) {
    pihajoki_step(ev, dt, zeta);
    return;
  }
  flow_a(ev, 0.5 * dt, zeta);
  flow_b(ev, 0.5 * dt, zeta);
  coupling_flow(params.omega, dt, zeta);
  flow_b(ev, 0.5 * dt, zeta);
  flow_a(ev, 0.5 * dt, zeta);
}

std::string_view to_string(Composition c) noexcept {
  switch (c) {
    case Composition::single: return "single";
    case Composition::triple_jump_4: return "triple_jump";
    case Composition::suzuki_4: return "suzuki";
    case Composition::yoshida_6: return "yoshida";
  }
  return "unknown";
}

CompositionScheme::CompositionScheme(Composition kind) : kind_(kind) {
  switch (kind) {
    case Composition::single:
      gammas_ = {1.0};
      break;
    case Composition::triple_jump_4: {
      const double g = 1.0 / (2.0 - std::cbrt(2.0));
      gammas_ = {g, 1.0 - 2.0 * g, g};
      break;
    }
    case Composition::suzuki_4: {
      const double g = 1.0 / (4.0 - std::cbrt(4.0));
      gammas_ = {g, g, 1.0 - 4.0 * g, g, g};
      break;
    }
    case Composition::yoshida_6: {
      // Yoshida's sixth-order solution A.
      constexpr double w1 = -1.17767998417887;
      constexpr double w2 = 0.235573213359357;
      constexpr double w3 = 0.784513610477560;
      const double w0 = 1.0 - 2.0 * (w1 + w2 + w3);
      gammas_ = {w3, w2, w1, w0, w1, w2, w3};
      break;
    }
  }
}

int CompositionScheme::order() const noexcept {
  switch (kind_) {
    case Composition::single: return 2;
    case Composition::triple_jump_4:
    case Composition::suzuki_4: return 4;
    case Composition::yoshida_6: return 6;
  }
  return 2;
}

ExtendedStep::ExtendedStep(bool tao, TaoParams params, CompositionScheme scheme)
    : tao_(tao), params_(params), scheme_(std::move(scheme)) {
  params_.validate();
}

ExtendedStep ExtendedStep::pihajoki(CompositionScheme scheme) {
  return ExtendedStep(false, TaoParams{}, std::move(scheme));
}

ExtendedStep ExtendedStep::tao(TaoParams params, CompositionScheme scheme) {
  return ExtendedStep(true, params, std::move(scheme));
}

void ExtendedStep::operator()(Evaluator& ev, double dt, ExtendedPoint& zeta) const {
  if (tao_) {
    compose([&](double h, ExtendedPoint& s) { tao_step(ev, h, s, params_); }, scheme_, dt, zeta);
  } else {
    compose([&](double h, ExtendedPoint& s) { pihajoki_step(ev, h, s); }, scheme_, dt, zeta);
  }
}

int ExtendedStep::vf_per_step() const noexcept {
  const int base = (tao_ && params_.omega != 0.0) ? 4 : 3;
  return base * scheme_.substeps();
}

}  // namespace extphase
