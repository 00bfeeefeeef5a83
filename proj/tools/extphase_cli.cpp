// Command-line harness: run, bench, converge, figure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "extphase/config.hpp"
#include "extphase/errors.hpp"
#include "extphase/harness.hpp"
#include "extphase/output.hpp"

namespace {

using namespace extphase;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitNonConvergence = 2;
constexpr int kExitSingular = 3;
constexpr int kExitConfig = 4;

struct Overrides {
  std::optional<std::string> method;
  std::optional<int> order;
  std::optional<std::string> composition;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<double> omega;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<std::string> solver;
  bool warm_start = false;
  std::optional<int> stride;
  bool record_state = false;
  std::optional<std::string> out;
  std::optional<std::string> svg;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--method", o.method, "pihajoki, tao, semiexplicit, gl2, gl4 or gl6");
  cmd->add_option("--order", o.order, "2, 4 or 6 (ignored for gl*)");
  cmd->add_option("--composition", o.composition, "triple_jump, suzuki or yoshida");
  cmd->add_option("--dt", o.dt, "time step");
  cmd->add_option("--t-end", o.t_end, "final time");
  cmd->add_option("--omega", o.omega, "Tao coupling strength");
  cmd->add_option("--tol", o.tol, "solver tolerance");
  cmd->add_option("--max-iter", o.max_iter, "solver iteration cap");
  cmd->add_option("--solver", o.solver, "simplified_newton or broyden");
  cmd->add_flag("--warm-start", o.warm_start, "start each solve from the previous solution");
  cmd->add_option("--stride", o.stride, "record every N-th step");
  cmd->add_flag("--record-state", o.record_state, "append q and p columns to the CSV");
  cmd->add_option("--out", o.out, "CSV output path");
  cmd->add_option("--svg", o.svg, "SVG output path");
}

void apply(const Overrides& o, ExperimentSpec& s) {
  if (o.method) s.method = parse_method(*o.method);
  if (o.order) s.order = *o.order;
  if (o.composition) s.composition = parse_composition(*o.composition);
  if (o.dt) s.dt = *o.dt;
  if (o.t_end) s.t_end = *o.t_end;
  if (o.omega) s.omega = *o.omega;
  if (o.tol) s.tol = *o.tol;
  if (o.max_iter) s.max_iter = *o.max_iter;
  if (o.solver) s.solver = parse_solver(*o.solver);
  if (o.warm_start) s.warm_start = true;
  if (o.stride) s.record_stride = *o.stride;
  if (o.record_state) s.record_state = true;
  if (o.out) s.out = *o.out;
  if (o.svg) s.svg = *o.svg;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + item + "' in list");
    }
  }
  return out;
}

int status_code(const TrajectoryRecord& rec) {
  switch (rec.status) {
    case RunStatus::complete: return kExitOk;
    case RunStatus::non_convergence: return kExitNonConvergence;
    case RunStatus::singular: return kExitSingular;
  }
  return kExitOther;
}

void print_summary(const TrajectoryRecord& rec) {
  std::printf("%s: %lld/%lld steps, %.3f s stepping\n", rec.label.c_str(), rec.completed_steps,
              rec.total_steps, rec.elapsed_s);
  std::printf("  max %-24s %.3e\n", "defect", rec.max_defect);
  std::printf("  max %-24s %.3e\n", "energy rel err", rec.max_energy_rel_err);
  for (std::size_t k = 0; k < rec.invariant_names.size(); ++k) {
    std::printf("  max %-24s %.3e\n", rec.invariant_names[k].c_str(), rec.max_invariant_drift[k]);
  }
  std::printf("  itr_avg %.4f  vf_avg %.4f\n", rec.itr_avg(), rec.vf_avg());
  if (!rec.complete()) {
    std::printf("  stopped early: %s\n", rec.failure.c_str());
  }
}

int cmd_run(const std::string& preset_name, const std::string& config_path, const Overrides& o) {
  ExperimentSpec spec = config_path.empty() ? preset(preset_name) : load_spec(config_path);
  apply(o, spec);
  spec.validate();
  const TrajectoryRecord rec = run_experiment(spec);
  print_summary(rec);
  if (!spec.out.empty()) {
    emit_csv(rec, spec.out);
  }
  if (!spec.svg.empty()) {
    emit_svg(rec, spec.svg);
  }
  return status_code(rec);
}

std::vector<ExperimentSpec> table_methods(const ExperimentSpec& base) {
  std::vector<ExperimentSpec> out;
  const auto add = [&](MethodKind m, int order) {
    ExperimentSpec s = base;
    s.method = m;
    s.order = order;
    s.composition.reset();
    out.push_back(s);
  };
  for (const int order : {2, 4, 6}) {
    add(MethodKind::tao, order);
    add(MethodKind::semiexplicit, order);
    add(order == 2 ? MethodKind::gl2 : order == 4 ? MethodKind::gl4 : MethodKind::gl6, order);
  }
  return out;
}

int cmd_bench(const std::string& preset_name, int reps, const std::string& out_path,
              const Overrides& o) {
  ExperimentSpec base = preset(preset_name);
  apply(o, base);
  std::vector<ExperimentSpec> specs;
  if (o.method) {
    specs.push_back(base);
  } else {
    specs = table_methods(base);
  }
  std::vector<BenchmarkRow> rows;
  std::printf("%-28s %10s %8s %8s %10s\n", "method", "time_s", "itr", "vf", "steps");
  for (const auto& s : specs) {
    s.validate();
    const BenchmarkRow row = benchmark(s, reps);
    std::printf("%-28s %10.3f %8.3f %8.3f %5lld/%lld\n", row.label.c_str(), row.time_s,
                row.itr_avg, row.vf_avg, row.converged_steps, row.total_steps);
    rows.push_back(row);
  }
  if (!out_path.empty()) {
    emit_benchmark_csv(rows, out_path);
  } else {
    write_benchmark_csv(rows, std::cout);
  }
  for (const auto& r : rows) {
    if (r.converged_steps < r.total_steps) {
      return kExitNonConvergence;
    }
  }
  return kExitOk;
}

int cmd_converge(const std::string& preset_name, const std::string& dt_list, double t_end,
                 const Overrides& o) {
  ExperimentSpec spec = preset(preset_name);
  apply(o, spec);
  spec.t_end = t_end;
  const std::vector<double> dts = parse_list(dt_list);
  const ConvergenceResult res = convergence_study(spec, dts);
  std::printf("%s, reference gl6 dt=%s\n", spec.label().c_str(),
              format_double(res.reference_dt).c_str());
  for (std::size_t i = 0; i < res.dts.size(); ++i) {
    std::printf("  dt=%-10s error=%.6e\n", format_double(res.dts[i]).c_str(), res.errors[i]);
  }
  if (std::isnan(res.slope)) {
    std::printf("slope undefined (an error is exactly zero)\n");
  } else {
    std::printf("slope %.4f\n", res.slope);
  }
  return kExitOk;
}

int cmd_figure(const std::string& preset_name, const std::string& svg_path, const Overrides& o) {
  ExperimentSpec base = preset(preset_name);
  apply(o, base);
  std::vector<TrajectoryRecord> records;
  int code = kExitOk;
  for (const MethodKind m : {MethodKind::pihajoki, MethodKind::tao, MethodKind::semiexplicit}) {
    ExperimentSpec s = base;
    s.method = m;
    s.validate();
    records.push_back(run_experiment(s));
    print_summary(records.back());
    if (code == kExitOk) {
      code = status_code(records.back());
    }
  }
  emit_comparison_svg(records, svg_path, preset_name + ", dt = " + format_double(base.dt));
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extended-phase-space symplectic integrators"};
  app.require_subcommand(1);

  std::string preset_name;
  std::string config_path;
  Overrides run_o;
  auto* run = app.add_subcommand("run", "integrate one trajectory and record drifts");
  auto* preset_opt = run->add_option("--preset", preset_name, "named setup");
  auto* config_opt = run->add_option("--config", config_path, "JSON config file");
  preset_opt->excludes(config_opt);
  add_overrides(run, run_o);

  std::string bench_preset;
  int reps = 1;
  std::string bench_out;
  Overrides bench_o;
  auto* bench = app.add_subcommand("bench", "time the method table on a preset");
  bench->add_option("--preset", bench_preset, "named setup")->required();
  bench->add_option("--reps", reps, "repetitions per method")->check(CLI::PositiveNumber);
  bench->add_option("--out", bench_out, "benchmark CSV path");
  bench->add_option("--method", bench_o.method, "single method instead of the table");
  bench->add_option("--order", bench_o.order, "order for --method");
  bench->add_option("--composition", bench_o.composition, "composition for --method");
  bench->add_option("--t-end", bench_o.t_end, "final time");
  bench->add_option("--tol", bench_o.tol, "solver tolerance");
  bench->add_option("--max-iter", bench_o.max_iter, "solver iteration cap");
  bench->add_option("--solver", bench_o.solver, "simplified_newton or broyden");
  bench->add_flag("--warm-start", bench_o.warm_start, "warm-start the solvers");

  std::string conv_preset = "testcase";
  std::string dt_list = "0.1,0.05,0.025,0.0125";
  double conv_t_end = 1.0;
  Overrides conv_o;
  auto* conv = app.add_subcommand("converge", "estimate the convergence order");
  conv->add_option("--preset", conv_preset, "named setup");
  conv->add_option("--method", conv_o.method, "method name")->required();
  conv->add_option("--order", conv_o.order, "2, 4 or 6");
  conv->add_option("--composition", conv_o.composition, "triple_jump, suzuki or yoshida");
  conv->add_option("--omega", conv_o.omega, "Tao coupling strength");
  conv->add_option("--tol", conv_o.tol, "solver tolerance");
  conv->add_option("--dt-list", dt_list, "comma-separated step sizes");
  conv->add_option("--t-end", conv_t_end, "final time");

  std::string fig_preset = "testcase";
  std::string fig_svg = "figure.svg";
  Overrides fig_o;
  auto* fig = app.add_subcommand("figure", "compare pihajoki, tao and semiexplicit drifts");
  fig->add_option("--preset", fig_preset, "named setup");
  fig->add_option("--svg", fig_svg, "SVG output path");
  fig->add_option("--dt", fig_o.dt, "time step");
  fig->add_option("--t-end", fig_o.t_end, "final time");
  fig->add_option("--omega", fig_o.omega, "Tao coupling strength");
  fig->add_option("--tol", fig_o.tol, "solver tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (run->parsed()) {
      if (preset_name.empty() && config_path.empty()) {
        throw ConfigError("run needs --preset or --config");
      }
      return cmd_run(preset_name, config_path, run_o);
    }
    if (bench->parsed()) {
      return cmd_bench(bench_preset, reps, bench_out, bench_o);
    }
    if (conv->parsed()) {
      return cmd_converge(conv_preset, dt_list, conv_t_end, conv_o);
    }
    if (fig->parsed()) {
      return cmd_figure(fig_preset, fig_svg, fig_o);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const NonConvergence& e) {
    std::fprintf(stderr, "solver did not converge: %s\n", e.what());
    return kExitNonConvergence;
  } catch (const SingularConfiguration& e) {
    std::fprintf(stderr, "singular configuration: %s\n", e.what());
    return kExitSingular;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitOther;
  }
  return kExitOther;
}
