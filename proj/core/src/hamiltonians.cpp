#include "extphase/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "extphase/errors.hpp"

namespace extphase {

double HamiltonianSystem::energy(const PhasePoint& z) const {
  if (z.dim() != dim()) {
    throw DimensionMismatch("energy: state dimension " + std::to_string(z.dim()) +
                            " does not match system dimension " + std::to_string(dim()));
  }
  return energy(z.q(), z.p());
}

Vector HamiltonianSystem::gradient(const PhasePoint& z) const {
  if (z.dim() != dim()) {
    throw DimensionMismatch("gradient: state dimension " + std::to_string(z.dim()) +
                            " does not match system dimension " + std::to_string(dim()));
  }
  const int d = dim();
  Vector g(2 * d);
  gradient(z.q(), z.p(), g.head(d), g.tail(d));
  return g;
}

Evaluator::Evaluator(const HamiltonianSystem& system)
    : system_(&system), dq_(Vector::Zero(system.dim())), dp_(Vector::Zero(system.dim())) {}

void Evaluator::gradient(ConstVectorRef q, ConstVectorRef p) {
  counter_.record_gradient();
  system_->gradient(q, p, dq_, dp_);
}

// ---------------------------------------------------------------------------
// TestCaseSystem

double TestCaseSystem::linear_part(double q1, double p1) noexcept {
  return (2.0 * q1 - 3.0 * p1) / 10.0;
}

double TestCaseSystem::quadratic_part(double q2, double p2) noexcept {
  return (q2 * q2 + 2.0 * p2 * p2) / 4.0;
}

double TestCaseSystem::energy(ConstVectorRef q, ConstVectorRef p) const {
  return std::exp(linear_part(q[0], p[0])) * std::sin(quadratic_part(q[1], p[1]));
}

void TestCaseSystem::gradient(ConstVectorRef q, ConstVectorRef p, VectorRef dq,
                              VectorRef dp) const {
  const double ef = std::exp(linear_part(q[0], p[0]));
  const double g = quadratic_part(q[1], p[1]);
  const double h = ef * std::sin(g);
  const double hc = ef * std::cos(g);
  dq[0] = 0.2 * h;
  dq[1] = 0.5 * q[1] * hc;
  dp[0] = -0.3 * h;
  dp[1] = p[1] * hc;
}

TestCaseSystem make_testcase() { return TestCaseSystem{}; }

// ---------------------------------------------------------------------------
// NlsSystem
//
// H = 1/4 sum_i (q_i^2 + p_i^2)^2
//     - sum_{i>=2} (P^2 p^2 + Q^2 q^2 - Q^2 p^2 - P^2 q^2 + 4 P p Q q)
// with (Q, P) = (q_{i-1}, p_{i-1}) and (q, p) = (q_i, p_i).

NlsSystem::NlsSystem(int sites) : sites_(sites) {
  if (sites < 1) {
    throw InvalidArgument("NlsSystem: need at least one site, got " + std::to_string(sites));
  }
}

double NlsSystem::energy(ConstVectorRef q, ConstVectorRef p) const {
  double h = 0.0;
  for (int i = 0; i < sites_; ++i) {
    const double r2 = q[i] * q[i] + p[i] * p[i];
    h += 0.25 * r2 * r2;
  }
  for (int i = 1; i < sites_; ++i) {
    const double Q = q[i - 1], P = p[i - 1], qi = q[i], pi = p[i];
    h -= P * P * pi * pi + Q * Q * qi * qi - Q * Q * pi * pi - P * P * qi * qi +
         4.0 * P * pi * Q * qi;
  }
  return h;
}

void NlsSystem::gradient(ConstVectorRef q, ConstVectorRef p, VectorRef dq, VectorRef dp) const {
  for (int i = 0; i < sites_; ++i) {
    const double r2 = q[i] * q[i] + p[i] * p[i];
    dq[i] = r2 * q[i];
    dp[i] = r2 * p[i];
  }
  for (int i = 1; i < sites_; ++i) {
    const double Q = q[i - 1], P = p[i - 1], qi = q[i], pi = p[i];
    dq[i - 1] -= 2.0 * Q * qi * qi - 2.0 * Q * pi * pi + 4.0 * P * pi * qi;
    dq[i] -= 2.0 * Q * Q * qi - 2.0 * P * P * qi + 4.0 * P * pi * Q;
    dp[i - 1] -= 2.0 * P * pi * pi - 2.0 * P * qi * qi + 4.0 * pi * Q * qi;
    dp[i] -= 2.0 * P * P * pi - 2.0 * Q * Q * pi + 4.0 * P * Q * qi;
  }
}

NlsSystem make_nls(int d) { return NlsSystem(d); }

// ---------------------------------------------------------------------------
// Point vortices

VortexConfig::VortexConfig(std::vector<double> circulations, std::vector<PlanarPosition> positions)
    : circulations_(std::move(circulations)), positions_(std::move(positions)) {
  if (circulations_.empty()) {
    throw InvalidArgument("VortexConfig: need at least one vortex");
  }
  if (circulations_.size() != positions_.size()) {
    throw DimensionMismatch("VortexConfig: " + std::to_string(circulations_.size()) +
                            " circulations but " + std::to_string(positions_.size()) +
                            " positions");
  }
  for (std::size_t i = 0; i < circulations_.size(); ++i) {
    if (!std::isfinite(circulations_[i]) || circulations_[i] == 0.0) {
      throw InvalidArgument("VortexConfig: circulation " + std::to_string(i + 1) +
                            " must be finite and nonzero");
    }
    if (!std::isfinite(positions_[i].x) || !std::isfinite(positions_[i].y)) {
      throw InvalidArgument("VortexConfig: position " + std::to_string(i + 1) + " is not finite");
    }
  }
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    for (std::size_t j = i + 1; j < positions_.size(); ++j) {
      const double dx = positions_[i].x - positions_[j].x;
      const double dy = positions_[i].y - positions_[j].y;
      if (std::hypot(dx, dy) < kVortexCollisionDistance) {
        throw VortexCollision("VortexConfig: vortices " + std::to_string(i + 1) + " and " +
                                  std::to_string(j + 1) + " coincide",
                              static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
}

double VortexConfig::scale(int i) const {
  return std::sqrt(std::abs(circulations_.at(static_cast<std::size_t>(i))));
}

double VortexConfig::sign(int i) const {
  return circulations_.at(static_cast<std::size_t>(i)) > 0.0 ? 1.0 : -1.0;
}

PhasePoint canonical_from_planar(const VortexConfig& cfg,
                                 const std::vector<PlanarPosition>& planar) {
  const int n = cfg.size();
  if (static_cast<int>(planar.size()) != n) {
    throw DimensionMismatch("canonical_from_planar: expected " + std::to_string(n) +
                            " positions, got " + std::to_string(planar.size()));
  }
  Vector q(n), p(n);
  for (int i = 0; i < n; ++i) {
    q[i] = cfg.scale(i) * planar[static_cast<std::size_t>(i)].x;
    p[i] = cfg.scale(i) * cfg.sign(i) * planar[static_cast<std::size_t>(i)].y;
  }
  return PhasePoint(q, p);
}

std::vector<PlanarPosition> planar_from_canonical(const VortexConfig& cfg, const PhasePoint& z) {
  const int n = cfg.size();
  if (z.dim() != n) {
    throw DimensionMismatch("planar_from_canonical: state dimension " + std::to_string(z.dim()) +
                            " does not match " + std::to_string(n) + " vortices");
  }
  std::vector<PlanarPosition> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = {z.q()[i] / cfg.scale(i),
                                        z.p()[i] / (cfg.scale(i) * cfg.sign(i))};
  }
  return out;
}

VortexSystem::VortexSystem(VortexConfig cfg) : cfg_(std::move(cfg)) {
  const int n = cfg_.size();
  scale_.resize(n);
  sign_.resize(n);
  for (int i = 0; i < n; ++i) {
    scale_[i] = cfg_.scale(i);
    sign_[i] = cfg_.sign(i);
  }
}

PhasePoint VortexSystem::initial_state() const {
  return canonical_from_planar(cfg_, cfg_.positions());
}

namespace {

constexpr double kCollisionDistanceSquared = kVortexCollisionDistance * kVortexCollisionDistance;

[[noreturn]] void throw_collision(int i, int j, double r2) {
  throw VortexCollision("point vortices " + std::to_string(i + 1) + " and " +
                            std::to_string(j + 1) + " collided (planar distance " +
                            std::to_string(std::sqrt(r2)) + ")",
                        i, j);
}

}  // namespace

double VortexSystem::energy(ConstVectorRef q, ConstVectorRef p) const {
  const int n = dim();
  const auto& gamma = cfg_.circulations();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double xi = q[i] / scale_[i];
    const double yi = p[i] / (scale_[i] * sign_[i]);
    for (int j = i + 1; j < n; ++j) {
      const double dx = xi - q[j] / scale_[j];
      const double dy = yi - p[j] / (scale_[j] * sign_[j]);
      const double r2 = dx * dx + dy * dy;
      if (r2 < kCollisionDistanceSquared) throw_collision(i, j, r2);
      sum += gamma[static_cast<std::size_t>(i)] * gamma[static_cast<std::size_t>(j)] *
             std::log(r2);
    }
  }
  return -sum / (4.0 * std::numbers::pi);
}

void VortexSystem::gradient(ConstVectorRef q, ConstVectorRef p, VectorRef dq, VectorRef dp) const {
  const int n = dim();
  const auto& gamma = cfg_.circulations();
  // Accumulate dH/dx_i, dH/dy_i in dq/dp, then chain-rule into canonical variables.
  dq.setZero();
  dp.setZero();
  for (int i = 0; i < n; ++i) {
    const double xi = q[i] / scale_[i];
    const double yi = p[i] / (scale_[i] * sign_[i]);
    for (int j = i + 1; j < n; ++j) {
      const double dx = xi - q[j] / scale_[j];
      const double dy = yi - p[j] / (scale_[j] * sign_[j]);
      const double r2 = dx * dx + dy * dy;
      if (r2 < kCollisionDistanceSquared) throw_collision(i, j, r2);
      const double w = gamma[static_cast<std::size_t>(i)] * gamma[static_cast<std::size_t>(j)] /
                       (2.0 * std::numbers::pi * r2);
      dq[i] -= w * dx;
      dq[j] += w * dx;
      dp[i] -= w * dy;
      dp[j] += w * dy;
    }
  }
  for (int i = 0; i < n; ++i) {
    dq[i] /= scale_[i];
    dp[i] /= scale_[i] * sign_[i];
  }
}

VortexSystem make_vortices(VortexConfig cfg) { return VortexSystem(std::move(cfg)); }

// ---------------------------------------------------------------------------

double check_gradient(const HamiltonianSystem& system, const PhasePoint& z, double h) {
  if (!(h > 0.0)) {
    throw InvalidArgument("check_gradient: step must be positive");
  }
  const Vector analytic = system.gradient(z);
  const int d = z.dim();
  Vector numeric(2 * d);
  Vector shifted = z.packed();
  for (int k = 0; k < 2 * d; ++k) {
    const double saved = shifted[k];
    shifted[k] = saved + h;
    const double up = system.energy(shifted.head(d), shifted.tail(d));
    shifted[k] = saved - h;
    const double down = system.energy(shifted.head(d), shifted.tail(d));
    shifted[k] = saved;
    numeric[k] = (up - down) / (2.0 * h);
  }
  const double scale = std::max(analytic.lpNorm<Eigen::Infinity>(), 1e-300);
  return (analytic - numeric).lpNorm<Eigen::Infinity>() / scale;
}

}  // namespace extphase
