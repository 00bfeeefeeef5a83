#include "extphase/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

#include "extphase/errors.hpp"

namespace extphase {
namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidArgument(std::string(what) + ": entries must be finite");
  }
}

void require_symmetric(const Matrix& m, const char* what) {
  if ((m - m.transpose()).lpNorm<Eigen::Infinity>() > 1e-14) {
    throw InvalidArgument(std::string(what) + " must be symmetric");
  }
}

void require_dim(int expected, int got, const char* where) {
  if (expected != got) {
    throw DimensionMismatch(std::string(where) + ": invariant dimension " +
                            std::to_string(expected) + " does not match point dimension " +
                            std::to_string(got));
  }
}

Matrix standard_j(int n) {
  const int m = n / 2;
  Matrix j = Matrix::Zero(n, n);
  j.topRightCorner(m, m).setIdentity();
  j.bottomLeftCorner(m, m) = -Matrix::Identity(m, m);
  return j;
}

}  // namespace

LinearInvariant::LinearInvariant(Vector a) : a_(std::move(a)) {
  if (a_.size() == 0 || a_.size() % 2 != 0) {
    throw InvalidArgument("LinearInvariant: coefficient length must be even and positive");
  }
  require_finite(a_, "LinearInvariant");
}

QuadraticInvariant::QuadraticInvariant(Matrix k11, Matrix k12, Matrix k22)
    : k11_(std::move(k11)), k12_(std::move(k12)), k22_(std::move(k22)) {
  const auto d = k11_.rows();
  if (d == 0 || k11_.cols() != d || k12_.rows() != d || k12_.cols() != d || k22_.rows() != d ||
      k22_.cols() != d) {
    throw InvalidArgument("QuadraticInvariant: blocks must be square and of equal size d >= 1");
  }
  require_finite(k11_, "QuadraticInvariant k11");
  require_finite(k12_, "QuadraticInvariant k12");
  require_finite(k22_, "QuadraticInvariant k22");
  require_symmetric(k11_, "QuadraticInvariant k11");
  require_symmetric(k22_, "QuadraticInvariant k22");
}

QuadraticInvariant QuadraticInvariant::from_full(const Matrix& kappa) {
  if (kappa.rows() != kappa.cols() || kappa.rows() == 0 || kappa.rows() % 2 != 0) {
    throw InvalidArgument("QuadraticInvariant: kappa must be square with even positive size");
  }
  const auto d = kappa.rows() / 2;
  require_symmetric(kappa, "QuadraticInvariant kappa");
  return QuadraticInvariant(kappa.topLeftCorner(d, d), kappa.topRightCorner(d, d),
                            kappa.bottomRightCorner(d, d));
}

Matrix QuadraticInvariant::full() const {
  const int d = dim();
  Matrix kappa(2 * d, 2 * d);
  kappa << k11_, k12_, k12_.transpose(), k22_;
  return kappa;
}

double eval_linear(const LinearInvariant& inv, const PhasePoint& z) {
  require_dim(inv.dim(), z.dim(), "eval_linear");
  return inv.a().dot(z.packed());
}

double eval_quadratic(const QuadraticInvariant& inv, const PhasePoint& z) {
  require_dim(inv.dim(), z.dim(), "eval_quadratic");
  const auto q = z.q();
  const auto p = z.p();
  return 0.5 * q.dot(inv.k11() * q) + q.dot(inv.k12() * p) + 0.5 * p.dot(inv.k22() * p);
}

Vector quadratic_gradient(const QuadraticInvariant& inv, const PhasePoint& z) {
  require_dim(inv.dim(), z.dim(), "quadratic_gradient");
  const int d = z.dim();
  Vector g(2 * d);
  g.head(d) = inv.k11() * z.q() + inv.k12() * z.p();
  g.tail(d) = inv.k12().transpose() * z.q() + inv.k22() * z.p();
  return g;
}

Vector lift_linear(const LinearInvariant& inv) {
  const int d = inv.dim();
  Vector a_hat(4 * d);
  a_hat << inv.a_q(), inv.a_q(), inv.a_p(), inv.a_p();
  return 0.5 * a_hat;
}

double eval_extended_linear(const Vector& a_hat, const ExtendedPoint& zeta) {
  if (a_hat.size() != zeta.packed().size()) {
    throw DimensionMismatch("eval_extended_linear: coefficient length " +
                            std::to_string(a_hat.size()) + " does not match extended point length " +
                            std::to_string(zeta.packed().size()));
  }
  return a_hat.dot(zeta.packed());
}

Matrix lift_quadratic(const QuadraticInvariant& inv) {
  const int d = inv.dim();
  const Matrix zero = Matrix::Zero(d, d);
  const Matrix k12t = inv.k12().transpose();
  Matrix kappa_hat(4 * d, 4 * d);
  kappa_hat << zero, inv.k11(), inv.k12(), zero,
               inv.k11(), zero, zero, inv.k12(),
               k12t, zero, zero, inv.k22(),
               zero, k12t, inv.k22(), zero;
  return 0.5 * kappa_hat;
}

double eval_extended_quadratic(const QuadraticInvariant& inv, const ExtendedPoint& zeta) {
  require_dim(inv.dim(), zeta.dim(), "eval_extended_quadratic");
  const auto q = zeta.q();
  const auto x = zeta.x();
  const auto p = zeta.p();
  const auto y = zeta.y();
  // 1/2 eta^T kappa xi with eta = (q, y), xi = (x, p).
  return 0.5 * (q.dot(inv.k11() * x + inv.k12() * p) +
                y.dot(inv.k12().transpose() * x + inv.k22() * p));
}

Vector extended_quadratic_gradient(const QuadraticInvariant& inv, const ExtendedPoint& zeta) {
  require_dim(inv.dim(), zeta.dim(), "extended_quadratic_gradient");
  const int d = zeta.dim();
  const Matrix k12t = inv.k12().transpose();
  Vector g(4 * d);
  g.segment(0, d) = inv.k11() * zeta.x() + inv.k12() * zeta.p();
  g.segment(d, d) = inv.k11() * zeta.q() + inv.k12() * zeta.y();
  g.segment(2 * d, d) = k12t * zeta.q() + inv.k22() * zeta.y();
  g.segment(3 * d, d) = k12t * zeta.x() + inv.k22() * zeta.p();
  return 0.5 * g;
}

Vector infinitesimal_generator(const QuadraticInvariant& inv, const PhasePoint& z) {
  require_dim(inv.dim(), z.dim(), "infinitesimal_generator");
  const int d = z.dim();
  Vector v(2 * d);
  v.head(d) = inv.k12().transpose() * z.q() + inv.k22() * z.p();
  v.tail(d) = -inv.k11() * z.q() - inv.k12() * z.p();
  return v;
}

double poisson_bracket(const Vector& grad_f, const Vector& grad_g) {
  if (grad_f.size() != grad_g.size() || grad_f.size() % 2 != 0) {
    throw DimensionMismatch("poisson_bracket: gradients must have equal even length");
  }
  const auto m = grad_f.size() / 2;
  return grad_f.head(m).dot(grad_g.tail(m)) - grad_f.tail(m).dot(grad_g.head(m));
}

double poisson_bracket(const GradientFn& grad_f, const GradientFn& grad_g, const Vector& z) {
  return poisson_bracket(grad_f(z), grad_g(z));
}

Vector extended_energy_gradient(const HamiltonianSystem& system, const ExtendedPoint& zeta) {
  if (system.dim() != zeta.dim()) {
    throw DimensionMismatch("extended_energy_gradient: system dimension " +
                            std::to_string(system.dim()) + " does not match point dimension " +
                            std::to_string(zeta.dim()));
  }
  const int d = zeta.dim();
  Vector g(4 * d);
  Vector dq(d);
  Vector dp(d);
  system.gradient(zeta.q(), zeta.y(), dq, dp);
  g.segment(0, d) = dq;
  g.segment(3 * d, d) = dp;
  system.gradient(zeta.x(), zeta.p(), dq, dp);
  g.segment(d, d) = dq;
  g.segment(2 * d, d) = dp;
  return g;
}

Vector coupling_energy_gradient(double omega, const ExtendedPoint& zeta) {
  const int d = zeta.dim();
  const Vector u = zeta.q() - zeta.x();
  const Vector v = zeta.p() - zeta.y();
  Vector g(4 * d);
  g << u, -u, v, -v;
  return omega * g;
}

bool tao_compatibility(const QuadraticInvariant& inv, double tol) {
  const double antisym = (inv.k12() + inv.k12().transpose()).lpNorm<Eigen::Infinity>();
  const double equal = (inv.k22() - inv.k11()).lpNorm<Eigen::Infinity>();
  return antisym <= tol && equal <= tol;
}

double symplecticity_defect(const PointMap& map, const Vector& point,
                            std::optional<double> fd_step) {
  const auto n = point.size();
  if (n == 0 || n % 2 != 0) {
    throw DimensionMismatch("symplecticity_defect: point length must be even and positive");
  }
  const double h =
      fd_step.value_or(std::cbrt(std::numeric_limits<double>::epsilon()) *
                       std::max(1.0, point.lpNorm<Eigen::Infinity>()));
  if (!(h > 0.0)) {
    throw InvalidArgument("symplecticity_defect: finite-difference step must be positive");
  }

  Matrix jac(n, n);
  Vector probe = point;
  for (Eigen::Index k = 0; k < n; ++k) {
    probe[k] = point[k] + h;
    const Vector plus = map(probe);
    probe[k] = point[k] - h;
    const Vector minus = map(probe);
    probe[k] = point[k];
    if (plus.size() != n || minus.size() != n) {
      throw DimensionMismatch("symplecticity_defect: map changed the dimension");
    }
    jac.col(k) = (plus - minus) / (2.0 * h);
  }
  const Matrix j = standard_j(static_cast<int>(n));
  return (jac.transpose() * j * jac - j).lpNorm<Eigen::Infinity>();
}

double NamedInvariant::eval(const PhasePoint& z) const {
  return std::visit(
      [&](const auto& inv) -> double {
        using T = std::decay_t<decltype(inv)>;
        if constexpr (std::is_same_v<T, LinearInvariant>) {
          return eval_linear(inv, z);
        } else {
          return eval_quadratic(inv, z);
        }
      },
      form);
}

double NamedInvariant::eval_extended(const ExtendedPoint& zeta) const {
  return std::visit(
      [&](const auto& inv) -> double {
        using T = std::decay_t<decltype(inv)>;
        if constexpr (std::is_same_v<T, LinearInvariant>) {
          return eval_extended_linear(lift_linear(inv), zeta);
        } else {
          return eval_extended_quadratic(inv, zeta);
        }
      },
      form);
}

Vector NamedInvariant::gradient(const PhasePoint& z) const {
  return std::visit(
      [&](const auto& inv) -> Vector {
        using T = std::decay_t<decltype(inv)>;
        if constexpr (std::is_same_v<T, LinearInvariant>) {
          require_dim(inv.dim(), z.dim(), "NamedInvariant::gradient");
          return inv.a();
        } else {
          return quadratic_gradient(inv, z);
        }
      },
      form);
}

NamedInvariant testcase_L() {
  Vector a(4);
  a << 0.2, 0.0, -0.3, 0.0;
  return NamedInvariant{"testcase_L", LinearInvariant(std::move(a))};
}

NamedInvariant testcase_Q() {
  Matrix k11 = Matrix::Zero(2, 2);
  Matrix k22 = Matrix::Zero(2, 2);
  k11(1, 1) = 0.5;
  k22(1, 1) = 1.0;
  return NamedInvariant{"testcase_Q", QuadraticInvariant(k11, Matrix::Zero(2, 2), k22)};
}

NamedInvariant nls_mass(int d) {
  if (d < 1) {
    throw InvalidArgument("nls_mass: d must be at least 1");
  }
  const Matrix two = 2.0 * Matrix::Identity(d, d);
  return NamedInvariant{"nls_mass", QuadraticInvariant(two, Matrix::Zero(d, d), two)};
}

NamedInvariant vortex_linear_impulse_x(const VortexConfig& cfg) {
  const int n = cfg.size();
  Vector a = Vector::Zero(2 * n);
  for (int i = 0; i < n; ++i) {
    a[i] = cfg.sign(i) * cfg.scale(i);
  }
  return NamedInvariant{"vortex_linear_impulse_x", LinearInvariant(std::move(a))};
}

NamedInvariant vortex_linear_impulse_y(const VortexConfig& cfg) {
  const int n = cfg.size();
  Vector a = Vector::Zero(2 * n);
  for (int i = 0; i < n; ++i) {
    a[n + i] = cfg.scale(i);
  }
  return NamedInvariant{"vortex_linear_impulse_y", LinearInvariant(std::move(a))};
}

NamedInvariant vortex_angular_impulse(const VortexConfig& cfg) {
  const int n = cfg.size();
  Vector signs(n);
  for (int i = 0; i < n; ++i) {
    signs[i] = 2.0 * cfg.sign(i);
  }
  const Matrix block = signs.asDiagonal();
  return NamedInvariant{"vortex_angular_impulse",
                        QuadraticInvariant(block, Matrix::Zero(n, n), block)};
}

std::vector<NamedInvariant> system_invariants(const HamiltonianSystem& system) {
  if (dynamic_cast<const TestCaseSystem*>(&system) != nullptr) {
    return {testcase_L(), testcase_Q()};
  }
  if (dynamic_cast<const NlsSystem*>(&system) != nullptr) {
    return {nls_mass(system.dim())};
  }
  if (const auto* v = dynamic_cast<const VortexSystem*>(&system)) {
    return {vortex_linear_impulse_x(v->config()), vortex_linear_impulse_y(v->config()),
            vortex_angular_impulse(v->config())};
  }
  return {};
}

NamedInvariant named_invariant(const std::string& name, const HamiltonianSystem& system) {
  for (auto& inv : system_invariants(system)) {
    if (inv.name == name) {
      return inv;
    }
  }
  throw InvalidArgument("named_invariant: '" + name + "' is not an invariant of system '" +
                        std::string(system.name()) + "'");
}

double relative_drift(double value, double reference) noexcept {
  return std::abs(value - reference) / std::max(std::abs(reference), kDriftFloor);
}

namespace {

template <class Point, class Eval>
DriftSeries drift_series_impl(const std::vector<Point>& trajectory,
                              const std::vector<NamedInvariant>& invariants, Eval&& eval) {
  DriftSeries out;
  out.drifts.resize(invariants.size());
  for (std::size_t k = 0; k < invariants.size(); ++k) {
    out.names.push_back(invariants[k].name);
    if (trajectory.empty()) {
      continue;
    }
    const double reference = eval(invariants[k], trajectory.front());
    out.drifts[k].reserve(trajectory.size());
    for (const auto& point : trajectory) {
      out.drifts[k].push_back(relative_drift(eval(invariants[k], point), reference));
    }
  }
  return out;
}

}  // namespace

DriftSeries drift_series(const std::vector<PhasePoint>& trajectory,
                         const std::vector<NamedInvariant>& invariants) {
  return drift_series_impl(trajectory, invariants,
                           [](const NamedInvariant& inv, const PhasePoint& z) { return inv.eval(z); });
}

DriftSeries drift_series(const std::vector<ExtendedPoint>& trajectory,
                         const std::vector<NamedInvariant>& invariants) {
  DriftSeries out = drift_series_impl(
      trajectory, invariants, [](const NamedInvariant& inv, const ExtendedPoint& zeta) {
        return inv.eval(PhasePoint(zeta.q(), zeta.p()));
      });
  out.defect.reserve(trajectory.size());
  for (const auto& zeta : trajectory) {
    out.defect.push_back(defect_norm(zeta));
  }
  return out;
}

}  // namespace extphase
