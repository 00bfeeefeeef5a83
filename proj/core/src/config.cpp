#include "extphase/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "extphase/errors.hpp"

namespace extphase {
namespace {

using nlohmann::json;

constexpr long long kMaxRows = 100000;

std::vector<double> to_vector(const json& value, const std::string& key) {
  if (!value.is_array()) {
    throw ConfigError("config key '" + key + "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : value) {
    if (!v.is_number()) {
      throw ConfigError("config key '" + key + "' must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<PlanarPosition> to_positions(const json& value) {
  if (!value.is_array()) {
    throw ConfigError("config key 'planar_positions' must be an array of [x, y] pairs");
  }
  std::vector<PlanarPosition> out;
  for (const auto& v : value) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ConfigError("config key 'planar_positions' must be an array of [x, y] pairs");
    }
    out.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  return out;
}

double to_number(const json& value, const std::string& key) {
  if (!value.is_number()) {
    throw ConfigError("config key '" + key + "' must be a number");
  }
  return value.get<double>();
}

int to_int(const json& value, const std::string& key) {
  if (!value.is_number_integer()) {
    throw ConfigError("config key '" + key + "' must be an integer");
  }
  return value.get<int>();
}

std::string to_text(const json& value, const std::string& key) {
  if (!value.is_string()) {
    throw ConfigError("config key '" + key + "' must be a string");
  }
  return value.get<std::string>();
}

bool to_bool(const json& value, const std::string& key) {
  if (!value.is_boolean()) {
    throw ConfigError("config key '" + key + "' must be a boolean");
  }
  return value.get<bool>();
}

bool all_finite(const std::vector<double>& v) {
  for (const double x : v) {
    if (!std::isfinite(x)) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string_view to_string(SystemKind s) noexcept {
  switch (s) {
    case SystemKind::testcase: return "testcase";
    case SystemKind::nls: return "nls";
    case SystemKind::vortices: return "vortices";
  }
  return "unknown";
}

std::string_view to_string(MethodKind m) noexcept {
  switch (m) {
    case MethodKind::pihajoki: return "pihajoki";
    case MethodKind::tao: return "tao";
    case MethodKind::semiexplicit: return "semiexplicit";
    case MethodKind::gl2: return "gl2";
    case MethodKind::gl4: return "gl4";
    case MethodKind::gl6: return "gl6";
  }
  return "unknown";
}

SystemKind parse_system(std::string_view name) {
  for (auto s : {SystemKind::testcase, SystemKind::nls, SystemKind::vortices}) {
    if (name == to_string(s)) {
      return s;
    }
  }
  throw ConfigError("unknown system '" + std::string(name) + "'");
}

MethodKind parse_method(std::string_view name) {
  for (auto m : {MethodKind::pihajoki, MethodKind::tao, MethodKind::semiexplicit, MethodKind::gl2,
                 MethodKind::gl4, MethodKind::gl6}) {
    if (name == to_string(m)) {
      return m;
    }
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

Composition parse_composition(std::string_view name) {
  for (auto c : {Composition::single, Composition::triple_jump_4, Composition::suzuki_4,
                 Composition::yoshida_6}) {
    if (name == to_string(c)) {
      return c;
    }
  }
  throw ConfigError("unknown composition '" + std::string(name) + "'");
}

SolverMethod parse_solver(std::string_view name) {
  for (auto s : {SolverMethod::simplified_newton, SolverMethod::broyden}) {
    if (name == to_string(s)) {
      return s;
    }
  }
  throw ConfigError("unknown solver '" + std::string(name) + "'");
}

bool is_gauss_legendre(MethodKind m) noexcept {
  return m == MethodKind::gl2 || m == MethodKind::gl4 || m == MethodKind::gl6;
}

void ExperimentSpec::validate() const {
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw ConfigError("dt must be finite and positive");
  }
  if (!std::isfinite(t_end) || t_end <= 0.0) {
    throw ConfigError("t_end must be finite and positive");
  }
  if (dt > t_end) {
    throw ConfigError("dt must not exceed t_end");
  }
  if (!is_gauss_legendre(method)) {
    if (order != 2 && order != 4 && order != 6) {
      throw ConfigError("order must be 2, 4 or 6, got " + std::to_string(order));
    }
    const int composed = CompositionScheme(effective_composition()).order();
    if (composed != order) {
      throw ConfigError("composition '" + std::string(to_string(effective_composition())) +
                        "' has order " + std::to_string(composed) + ", not " +
                        std::to_string(order));
    }
  }
  if (method == MethodKind::tao && (!std::isfinite(omega) || omega < 0.0)) {
    throw ConfigError("omega must be finite and non-negative");
  }
  if (!std::isfinite(tol) || tol < std::numeric_limits<double>::epsilon()) {
    throw ConfigError("tol must be finite and at least machine epsilon");
  }
  if (max_iter < 1) {
    throw ConfigError("max_iter must be at least 1");
  }
  if (record_stride < 0) {
    throw ConfigError("record_stride must be positive (0 selects the default)");
  }
  if (!all_finite(q0) || !all_finite(p0) || !all_finite(circulations)) {
    throw ConfigError("initial data must be finite");
  }
  switch (system) {
    case SystemKind::testcase:
      if (q0.size() != 2 || p0.size() != 2) {
        throw ConfigError("testcase needs q0 and p0 of length 2");
      }
      break;
    case SystemKind::nls:
      if (d < 1) {
        throw ConfigError("nls needs d >= 1");
      }
      if (q0.size() != static_cast<std::size_t>(d) || p0.size() != static_cast<std::size_t>(d)) {
        throw ConfigError("nls needs q0 and p0 of length d = " + std::to_string(d));
      }
      break;
    case SystemKind::vortices:
      if (circulations.empty() || circulations.size() != planar_positions.size()) {
        throw ConfigError("vortices need one planar position per circulation");
      }
      break;
  }
  if (n_steps() < 1) {
    throw ConfigError("t_end / dt must round to at least one step");
  }
}

long long ExperimentSpec::n_steps() const { return std::llround(t_end / dt); }

long long ExperimentSpec::effective_stride() const {
  if (record_stride > 0) {
    return record_stride;
  }
  const long long n = n_steps();
  return std::max<long long>(1, (n + kMaxRows - 1) / kMaxRows);
}

int ExperimentSpec::effective_order() const noexcept {
  switch (method) {
    case MethodKind::gl2: return 2;
    case MethodKind::gl4: return 4;
    case MethodKind::gl6: return 6;
    default: return order;
  }
}

Composition ExperimentSpec::effective_composition() const {
  if (composition) {
    return *composition;
  }
  switch (order) {
    case 4: return Composition::triple_jump_4;
    case 6: return Composition::yoshida_6;
    default: return Composition::single;
  }
}

SolverConfig ExperimentSpec::solver_config() const {
  try {
    return SolverConfig(tol, max_iter, solver, warm_start);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

std::string ExperimentSpec::label() const {
  std::string out(to_string(method));
  if (is_gauss_legendre(method)) {
    return out;
  }
  if (order != 2) {
    out += "-";
    out += to_string(effective_composition());
  }
  out += "-" + std::to_string(order);
  return out;
}

std::vector<std::string> preset_names() { return {"testcase", "vortex4", "nls_bench", "vortex10"}; }

ExperimentSpec preset(std::string_view name) {
  ExperimentSpec s;
  if (name == "testcase") {
    s.system = SystemKind::testcase;
    s.q0 = {-1.0, 2.0};
    s.p0 = {1.0, -1.0};
    s.dt = 0.1;
    s.t_end = 1000.0;
    s.omega = 10.0;
    s.tol = 1e-14;
  } else if (name == "vortex4") {
    s.system = SystemKind::vortices;
    s.circulations = {4.0, -3.0, -2.0, 7.0};
    s.planar_positions = {{1.0, 2.0}, {-1.5, 1.0}, {-3.0, -1.0}, {2.0, 0.5}};
    s.dt = 0.05;
    s.t_end = 200.0;
    s.omega = 10.0;
    s.tol = 1e-12;
  } else if (name == "nls_bench") {
    s.system = SystemKind::nls;
    s.d = 5;
    s.q0 = {3.0, 0.01, 0.01, 0.01, 0.01};
    s.p0 = {1.0, 0.0, 0.0, 0.0, 0.0};
    s.dt = 1e-3;
    s.t_end = 1000.0;
    s.omega = 100.0;
    s.tol = 1e-10;
  } else if (name == "vortex10") {
    s.system = SystemKind::vortices;
    s.circulations = {-0.5, 0.3, 0.6, 0.7, -0.2, -0.8, -0.9, -0.3, 0.7, -0.6};
    s.planar_positions = {{3.0, -5.0}, {-10.0, -6.0}, {6.0, 0.0}, {9.0, -2.0}, {0.0, 0.0},
                          {7.0, 10.0}, {-8.0, 2.0}, {5.0, 9.0},  {9.0, 0.0},  {7.0, -1.0}};
    s.dt = 0.1;
    s.t_end = 1000.0;
    s.omega = 7.0;
    s.tol = 1e-10;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return s;
}

ExperimentSpec parse_spec_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config must be a JSON object");
  }

  ExperimentSpec s;
  if (auto it = doc.find("preset"); it != doc.end()) {
    s = preset(to_text(*it, "preset"));
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "preset") {
      continue;
    } else if (key == "system") {
      s.system = parse_system(to_text(value, key));
    } else if (key == "d") {
      s.d = to_int(value, key);
    } else if (key == "circulations") {
      s.circulations = to_vector(value, key);
    } else if (key == "planar_positions") {
      s.planar_positions = to_positions(value);
    } else if (key == "q0") {
      s.q0 = to_vector(value, key);
    } else if (key == "p0") {
      s.p0 = to_vector(value, key);
    } else if (key == "method") {
      s.method = parse_method(to_text(value, key));
    } else if (key == "order") {
      s.order = to_int(value, key);
    } else if (key == "composition") {
      s.composition = parse_composition(to_text(value, key));
    } else if (key == "dt") {
      s.dt = to_number(value, key);
    } else if (key == "t_end") {
      s.t_end = to_number(value, key);
    } else if (key == "omega") {
      s.omega = to_number(value, key);
    } else if (key == "tol") {
      s.tol = to_number(value, key);
    } else if (key == "max_iter") {
      s.max_iter = to_int(value, key);
    } else if (key == "solver") {
      s.solver = parse_solver(to_text(value, key));
    } else if (key == "warm_start") {
      s.warm_start = to_bool(value, key);
    } else if (key == "record_stride") {
      s.record_stride = to_int(value, key);
    } else if (key == "record_state") {
      s.record_state = to_bool(value, key);
    } else if (key == "out") {
      s.out = to_text(value, key);
    } else if (key == "svg") {
      s.svg = to_text(value, key);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  s.validate();
  return s;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_spec_json(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::unique_ptr<HamiltonianSystem> make_system(const ExperimentSpec& spec) {
  switch (spec.system) {
    case SystemKind::testcase:
      return std::make_unique<TestCaseSystem>();
    case SystemKind::nls:
      return std::make_unique<NlsSystem>(spec.d);
    case SystemKind::vortices:
      return std::make_unique<VortexSystem>(VortexConfig(spec.circulations, spec.planar_positions));
  }
  throw ConfigError("unknown system");
}

PhasePoint initial_state(const ExperimentSpec& spec) {
  if (spec.system == SystemKind::vortices) {
    const VortexConfig cfg(spec.circulations, spec.planar_positions);
    return canonical_from_planar(cfg, spec.planar_positions);
  }
  const Eigen::Map<const Vector> q(spec.q0.data(), static_cast<Eigen::Index>(spec.q0.size()));
  const Eigen::Map<const Vector> p(spec.p0.data(), static_cast<Eigen::Index>(spec.p0.size()));
  return PhasePoint(q, p);
}

}  // namespace extphase
