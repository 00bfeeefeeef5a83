#pragma once

// Explicit integrators on the extended phase space.
//
// Pihajoki's extended Hamiltonian H^(q, x, p, y) = H(q, y) + H(x, p) splits into
// two exactly solvable pieces:
//   flow A: eta = (q, y) frozen, xi = (x, p) += t J DH(eta)
//   flow B: xi frozen,           eta += t J DH(xi)
// Tao's variant adds the coupling (omega/2)(|x - q|^2 + |y - p|^2), whose flow
// rotates the defect (q - x, p - y) at angular frequency 2 omega.

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "extphase/core.hpp"
#include "extphase/hamiltonians.hpp"

namespace extphase {

void flow_a(Evaluator& ev, double t, ExtendedPoint& zeta);
void flow_b(Evaluator& ev, double t, ExtendedPoint& zeta);

/// Strang step A(dt/2) B(dt) A(dt/2); three gradient evaluations.
void pihajoki_step(Evaluator& ev, double dt, ExtendedPoint& zeta);

/// Exact flow of the coupling Hamiltonian for time t. No gradient evaluations.
void coupling_flow(double omega, double t, ExtendedPoint& zeta);

struct TaoParams {
  double omega = 0.0;

  /// Throws InvalidArgument unless omega is finite and non-negative.
  void validate() const;
};

/// A(dt/2) B(dt/2) C(dt) B(dt/2) A(dt/2); four gradient evaluations.
///
/// omega = 0 is a degenerate configuration: C is the identity, the two half
/// B-flows fuse, and the step is exactly pihajoki_step (three evaluations).
void tao_step(Evaluator& ev, double dt, ExtendedPoint& zeta, const TaoParams& params);

enum class Composition { single, triple_jump_4, suzuki_4, yoshida_6 };

[[nodiscard]] std::string_view to_string(Composition c) noexcept;

/// Symmetric composition gamma_1 dt, ..., gamma_m dt of a second-order base step.
class CompositionScheme {
 public:
  explicit CompositionScheme(Composition kind = Composition::single);

  [[nodiscard]] Composition kind() const noexcept { return kind_; }
  [[nodiscard]] std::span<const double> coefficients() const noexcept { return gammas_; }
  [[nodiscard]] int substeps() const noexcept { return static_cast<int>(gammas_.size()); }
  [[nodiscard]] int order() const noexcept;

 private:
  Composition kind_;
  std::vector<double> gammas_;
};

/// Applies base(gamma_i dt, state) for each coefficient in order. Adjacent
/// half-flows of consecutive substeps are not fused.
template <class BaseStep, class State>
void compose(BaseStep&& base, const CompositionScheme& scheme, double dt, State& state) {
  for (const double gamma : scheme.coefficients()) {
    base(gamma * dt, state);
  }
}

/// Signature shared by all symmetric one-step maps on the extended space.
using ExtendedStepFn = std::function<void(Evaluator&, double, ExtendedPoint&)>;

/// Pihajoki or Tao base step, optionally composed to order 4 or 6.
class ExtendedStep {
 public:
  [[nodiscard]] static ExtendedStep pihajoki(CompositionScheme scheme = CompositionScheme{});
  [[nodiscard]] static ExtendedStep tao(TaoParams params,
                                        CompositionScheme scheme = CompositionScheme{});

  void operator()(Evaluator& ev, double dt, ExtendedPoint& zeta) const;

  [[nodiscard]] bool is_tao() const noexcept { return tao_; }
  [[nodiscard]] const TaoParams& tao_params() const noexcept { return params_; }
  [[nodiscard]] const CompositionScheme& scheme() const noexcept { return scheme_; }
  /// Gradient evaluations per call: (3 or 4) x substeps.
  [[nodiscard]] int vf_per_step() const noexcept;

 private:
  ExtendedStep(bool tao, TaoParams params, CompositionScheme scheme);

  bool tao_;
  TaoParams params_;
  CompositionScheme scheme_;
};

}  // namespace extphase
