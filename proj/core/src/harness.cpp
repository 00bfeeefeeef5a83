#include "extphase/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "extphase/errors.hpp"

namespace extphase {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

Propagator::Propagator(const ExperimentSpec& spec, const HamiltonianSystem& system,
                       const PhasePoint& z0)
    : ev_(system),
      dt_(spec.dt),
      impl_([&]() -> std::variant<Explicit, Projected, Collocation> {
        if (z0.dim() != system.dim()) {
          throw DimensionMismatch("Propagator: initial state dimension " +
                                  std::to_string(z0.dim()) + " does not match system dimension " +
                                  std::to_string(system.dim()));
        }
        const CompositionScheme scheme(spec.effective_composition());
        switch (spec.method) {
          case MethodKind::pihajoki:
            return Explicit{ExtendedStep::pihajoki(scheme), embed(z0)};
          case MethodKind::tao:
            return Explicit{ExtendedStep::tao(TaoParams{spec.omega}, scheme), embed(z0)};
          case MethodKind::semiexplicit:
            return Projected{SemiexplicitStepper(ExtendedStep::pihajoki(scheme),
                                                 spec.solver_config()),
                             z0};
          case MethodKind::gl2:
          case MethodKind::gl4:
          case MethodKind::gl6:
            return Collocation{
                GaussLegendreStepper(gl_tableau(spec.effective_order()), spec.solver_config()),
                z0, Vector::Zero(2 * z0.dim())};
        }
        throw ConfigError("Propagator: unknown method");
      }()) {
  vf_per_iteration_ = std::visit(
      overloaded{
          [](const Explicit& e) { return e.step.vf_per_step(); },
          [&](const Projected&) {
            return ExtendedStep::pihajoki(CompositionScheme(spec.effective_composition()))
                .vf_per_step();
          },
          [](const Collocation& c) { return c.stepper.tableau().stages; },
      },
      impl_);
}

StepStats Propagator::step() {
  const std::uint64_t before = ev_.counter().gradient_evals();
  StepStats stats = std::visit(
      overloaded{
          [&](Explicit& e) {
            e.step(ev_, dt_, e.zeta);
            defect_ = defect_norm(e.zeta);
            StepStats s;
            s.iterations = 1;
            return s;
          },
          [&](Projected& p) {
            ProjectedStep r = p.stepper.step(ev_, dt_, p.z);
            p.z = std::move(r.z);
            defect_ = r.defect;
            return r.stats;
          },
          [&](Collocation& c) {
            GlStep r = c.stepper.step(ev_, dt_, c.z);
            // Kahan summation of z += increment.
            const Vector y = r.increment - c.carry;
            Vector t = c.z.packed() + y;
            c.carry = (t - c.z.packed()) - y;
            c.z = PhasePoint::from_packed(std::move(t));
            return r.stats;
          },
      },
      impl_);
  stats.vf_evals = ev_.counter().gradient_evals() - before;
  const auto expected = static_cast<std::uint64_t>(vf_per_iteration_) *
                        static_cast<std::uint64_t>(stats.iterations);
  if (stats.vf_evals != expected) {
    throw std::logic_error("Propagator: " + std::to_string(stats.vf_evals) +
                           " gradient evaluations in one step, expected " +
                           std::to_string(expected));
  }
  return stats;
}

PhasePoint Propagator::state() const {
  return std::visit(overloaded{
                        [](const Explicit& e) { return PhasePoint(e.zeta.q(), e.zeta.p()); },
                        [](const Projected& p) { return p.z; },
                        [](const Collocation& c) { return c.z; },
                    },
                    impl_);
}

bool Propagator::is_extended() const noexcept {
  return std::holds_alternative<Explicit>(impl_);
}

const ExtendedPoint* Propagator::extended_state() const noexcept {
  const auto* e = std::get_if<Explicit>(&impl_);
  return e != nullptr ? &e->zeta : nullptr;
}

double TrajectoryRecord::itr_avg() const noexcept {
  return completed_steps > 0
             ? static_cast<double>(total_iterations) / static_cast<double>(completed_steps)
             : 0.0;
}

double TrajectoryRecord::vf_avg() const noexcept {
  return completed_steps > 0
             ? static_cast<double>(total_vf_evals) / static_cast<double>(completed_steps)
             : 0.0;
}

TrajectoryRecord run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const auto system = make_system(spec);
  return run_experiment(spec, *system, initial_state(spec));
}

TrajectoryRecord run_experiment(const ExperimentSpec& spec, const HamiltonianSystem& system,
                                const PhasePoint& z0) {
  spec.validate();
  const std::vector<NamedInvariant> invariants = system_invariants(system);

  TrajectoryRecord rec;
  rec.label = spec.label();
  rec.dim = system.dim();
  rec.total_steps = spec.n_steps();
  rec.invariant_drift.resize(invariants.size());
  rec.max_invariant_drift.assign(invariants.size(), 0.0);
  for (const auto& inv : invariants) {
    rec.invariant_names.push_back(inv.name);
  }

  double energy0 = 0.0;
  try {
    energy0 = system.energy(z0);
  } catch (const SingularConfiguration& e) {
    rec.status = RunStatus::singular;
    rec.failure = std::string("initial state: ") + e.what();
    return rec;
  }
  std::vector<double> reference;
  for (const auto& inv : invariants) {
    reference.push_back(inv.eval(z0));
  }

  Propagator prop(spec, system, z0);
  const long long stride = spec.effective_stride();
  std::vector<double> drift(invariants.size());

  for (long long n = 1; n <= rec.total_steps; ++n) {
    StepStats stats;
    try {
      const auto start = Clock::now();
      stats = prop.step();
      rec.elapsed_s += seconds_since(start);

      const PhasePoint z = prop.state();
      const double energy_err = relative_drift(system.energy(z), energy0);
      for (std::size_t k = 0; k < invariants.size(); ++k) {
        drift[k] = relative_drift(invariants[k].eval(z), reference[k]);
        rec.max_invariant_drift[k] = std::max(rec.max_invariant_drift[k], drift[k]);
      }
      rec.max_defect = std::max(rec.max_defect, prop.defect());
      rec.max_energy_rel_err = std::max(rec.max_energy_rel_err, energy_err);

      ++rec.completed_steps;
      if (stats.converged) {
        ++rec.converged_steps;
      }
      rec.total_iterations += static_cast<std::uint64_t>(stats.iterations);
      rec.total_vf_evals += stats.vf_evals;

      if (n % stride == 0 || n == rec.total_steps) {
        rec.steps.push_back(n);
        rec.times.push_back(static_cast<double>(n) * spec.dt);
        rec.defect.push_back(prop.defect());
        rec.energy_rel_err.push_back(energy_err);
        for (std::size_t k = 0; k < invariants.size(); ++k) {
          rec.invariant_drift[k].push_back(drift[k]);
        }
        rec.itr.push_back(stats.iterations);
        rec.vf_evals.push_back(stats.vf_evals);
        if (spec.record_state) {
          rec.states.push_back(z.packed());
        }
      }
    } catch (const NonConvergence& e) {
      rec.status = RunStatus::non_convergence;
      rec.failure = "step " + std::to_string(n) + ": " + e.what();
      break;
    } catch (const SingularConfiguration& e) {
      rec.status = RunStatus::singular;
      rec.failure = "step " + std::to_string(n) + ": " + e.what();
      break;
    }
  }
  return rec;
}

BenchmarkRow benchmark(const ExperimentSpec& spec, int repetitions) {
  if (repetitions < 1) {
    throw InvalidArgument("benchmark: repetitions must be at least 1");
  }
  spec.validate();
  const auto system = make_system(spec);
  const PhasePoint z0 = initial_state(spec);

  BenchmarkRow row;
  row.label = spec.label();
  row.method = spec.method;
  row.order = spec.effective_order();
  row.dt = spec.dt;
  row.t_end = spec.t_end;
  row.tol = spec.tol;
  row.total_steps = spec.n_steps();

  double total_time = 0.0;
  std::uint64_t iterations = 0;
  std::uint64_t vf = 0;
  long long steps_done = 0;
  long long converged_min = row.total_steps;

  for (int rep = 0; rep < repetitions; ++rep) {
    Propagator prop(spec, *system, z0);
    long long converged = 0;
    const auto start = Clock::now();
    try {
      for (long long n = 0; n < row.total_steps; ++n) {
        const StepStats s = prop.step();
        iterations += static_cast<std::uint64_t>(s.iterations);
        ++converged;
      }
    } catch (const NonConvergence&) {
    } catch (const SingularConfiguration&) {
    }
    total_time += seconds_since(start);
    vf += prop.counter().gradient_evals();
    steps_done += converged;
    converged_min = std::min(converged_min, converged);
  }

  row.time_s = total_time / repetitions;
  row.converged_steps = converged_min;
  if (steps_done > 0) {
    row.itr_avg = static_cast<double>(iterations) / static_cast<double>(steps_done);
    row.vf_avg = static_cast<double>(vf) / static_cast<double>(steps_done);
  }
  return row;
}

namespace {

PhasePoint final_state(const ExperimentSpec& spec, const HamiltonianSystem& system,
                       const PhasePoint& z0) {
  Propagator prop(spec, system, z0);
  const long long n = spec.n_steps();
  for (long long k = 0; k < n; ++k) {
    (void)prop.step();
  }
  return prop.state();
}

}  // namespace

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("log_log_slope: need at least two (x, y) pairs of equal count");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw InvalidArgument("log_log_slope: values must be positive");
    }
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (!(denom > 0.0)) {
    throw InvalidArgument("log_log_slope: x values must not all be equal");
  }
  return (n * sxy - sx * sy) / denom;
}

ConvergenceResult convergence_study(const ExperimentSpec& spec, const std::vector<double>& dts) {
  if (dts.size() < 4) {
    throw InvalidArgument("convergence_study: need at least four step sizes");
  }
  const double ratio = dts[1] / dts[0];
  for (std::size_t i = 1; i < dts.size(); ++i) {
    if (!(dts[i] > 0.0) || std::abs(dts[i] / dts[i - 1] - ratio) > 1e-9 * std::abs(ratio)) {
      throw InvalidArgument("convergence_study: step sizes must form a geometric progression");
    }
  }

  const auto system = make_system(spec);
  const PhasePoint z0 = initial_state(spec);

  ConvergenceResult result;
  result.dts = dts;
  result.reference_dt = *std::min_element(dts.begin(), dts.end()) / 20.0;

  ExperimentSpec ref = spec;
  ref.method = MethodKind::gl6;
  ref.dt = result.reference_dt;
  ref.tol = 1e-14;
  ref.max_iter = 200;
  ref.validate();
  auto reference_future =
      std::async(std::launch::async, [&] { return final_state(ref, *system, z0); });

  std::vector<std::future<PhasePoint>> runs;
  for (const double dt : dts) {
    ExperimentSpec s = spec;
    s.dt = dt;
    s.validate();
    runs.push_back(std::async(std::launch::async,
                              [s, &system, &z0] { return final_state(s, *system, z0); }));
  }

  const PhasePoint reference = reference_future.get();
  for (auto& run : runs) {
    const PhasePoint z = run.get();
    result.errors.push_back((z.packed() - reference.packed()).lpNorm<Eigen::Infinity>());
  }
  const bool resolved = std::all_of(result.errors.begin(), result.errors.end(),
                                    [](double e) { return e > 0.0; });
  result.slope =
      resolved ? log_log_slope(result.dts, result.errors) : std::numeric_limits<double>::quiet_NaN();
  return result;
}

}  // namespace extphase
