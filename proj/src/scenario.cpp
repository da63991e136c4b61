#include "relpur/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "relpur/errors.hpp"
#include "relpur/parallel.hpp"

namespace relpur {

using nlohmann::json;

namespace {

// g is a squared difference of O(1) quantities, so roundoff leaves ~1e-30
// where the exact value is zero (an eigenstate, for instance).
bool figure_of_merit_is_zero(double g0) { return g0 <= 1e-24; }

// ---------------------------------------------------------------- parsing

const json& require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + key + ": required field missing");
  return *it;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(path + it.key() + ": unknown field");
  }
}

double as_real(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field + ": must be finite");
  return x;
}

long long as_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field + ": expected an integer");
  return v.get<long long>();
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field + ": expected a string");
  return v.get<std::string>();
}

const json& as_object(const json& v, const std::string& field) {
  if (!v.is_object()) throw ConfigError(field + ": expected an object");
  return v;
}

ModelParams parse_params(const json& p, ModelKind model) {
  as_object(p, "params");
  ModelParams out;
  if (model == ModelKind::Ising) {
    reject_unknown(p, {"J", "h_x", "h_z"}, "params.");
    out.J = as_real(require(p, "J", "params."), "params.J");
    out.h_x = as_real(require(p, "h_x", "params."), "params.h_x");
    out.h_z = as_real(require(p, "h_z", "params."), "params.h_z");
  } else {
    reject_unknown(p, {"J", "U", "J_nnn"}, "params.");
    out.J = as_real(require(p, "J", "params."), "params.J");
    out.U = as_real(require(p, "U", "params."), "params.U");
    out.J_nnn = as_real(require(p, "J_nnn", "params."), "params.J_nnn");
  }
  return out;
}

InitialStateSpec parse_initial(const json& v, int sites) {
  InitialStateSpec s;
  if (v.is_string()) {
    const std::string text = v.get<std::string>();
    if (text == "cdw") return s;
    if (int(text.size()) != sites) {
      throw ConfigError("initial_state: bitstring \"" + text + "\" has length " +
                        std::to_string(text.size()) + ", expected L = " + std::to_string(sites));
    }
    if (text.find_first_not_of("01") != std::string::npos) {
      throw ConfigError("initial_state: bitstring may only contain '0' and '1'");
    }
    s.kind = InitialStateSpec::Kind::Bitstring;
    s.bits = text;
    return s;
  }
  if (v.is_object()) {
    reject_unknown(v, {"eigenstate"}, "initial_state.");
    const long long k = as_integer(require(v, "eigenstate", "initial_state."),
                                   "initial_state.eigenstate");
    if (k < 0 || k >= (1LL << sites)) {
      throw ConfigError("initial_state.eigenstate: index out of range [0, 2^L)");
    }
    s.kind = InitialStateSpec::Kind::Eigenstate;
    s.eigen_index = Index(k);
    return s;
  }
  throw ConfigError("initial_state: expected \"cdw\", a bitstring or {\"eigenstate\": k}");
}

std::string model_name(ModelKind m) { return m == ModelKind::Ising ? "ising" : "xxz"; }

// ---------------------------------------------------------------- output

json real_value(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  return x;
}

void write_json(std::ostringstream& os, const json& v, int indent) {
  const std::string pad(std::size_t(indent) * 2, ' ');
  const std::string inner(std::size_t(indent + 1) * 2, ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        os << "[]";
        return;
      }
      os << "[";
      bool first = true;
      for (const auto& e : v) {
        if (!first) os << ", ";
        first = false;
        write_json(os, e, indent + 1);
      }
      os << "]";
      return;
    }
    case json::value_t::number_float:
      os << format_real(v.get<double>());
      return;
    default:
      os << v.dump();
  }
}

std::string to_text(const json& v) {
  std::ostringstream os;
  write_json(os, v, 0);
  os << "\n";
  return os.str();
}

json config_json(const ScenarioConfig& cfg) {
  json j;
  j["id"] = cfg.id;
  j["model"] = model_name(cfg.model);
  j["L"] = cfg.sites;
  j["L_S"] = cfg.system_sites;
  if (cfg.model == ModelKind::Ising) {
    j["params"] = {{"J", cfg.params.J}, {"h_x", cfg.params.h_x}, {"h_z", cfg.params.h_z}};
  } else {
    j["params"] = {{"J", cfg.params.J}, {"U", cfg.params.U}, {"J_nnn", cfg.params.J_nnn}};
  }
  switch (cfg.initial_state.kind) {
    case InitialStateSpec::Kind::Cdw: j["initial_state"] = "cdw"; break;
    case InitialStateSpec::Kind::Bitstring: j["initial_state"] = cfg.initial_state.bits; break;
    case InitialStateSpec::Kind::Eigenstate:
      j["initial_state"] = {{"eigenstate", cfg.initial_state.eigen_index}};
      break;
  }
  j["grid"] = {{"t_max", cfg.t_max}, {"n_points", cfg.n_points}};
  if (cfg.probe_time > 0.0) j["probe_time"] = cfg.probe_time;
  j["averaging_T"] = cfg.averaging_T;
  j["tolerances"] = {{"degeneracy_tol", cfg.tolerances.degeneracy_tol},
                     {"support_floor", cfg.tolerances.support_floor}};
  j["outputs"] = cfg.outputs;
  if (!cfg.sweep_sites.empty()) j["sweep"] = {{"L", cfg.sweep_sites}};
  return j;
}

json gaps_json(const GapReport& g) {
  return {{"n_levels", g.n_levels},
          {"min_level_spacing", real_value(g.min_level_spacing)},
          {"min_gap_collision", real_value(g.min_gap_collision)},
          {"degenerate", g.degenerate}};
}

json dominant_json(const Dominant& d) {
  return {{"value", real_value(d.value)}, {"index", d.index}, {"any_infinite", d.any_infinite}};
}

json four_json(const std::array<double, 4>& v) {
  json j;
  for (int i = 0; i < 4; ++i) j[std::to_string(i + 1)] = real_value(v[std::size_t(i)]);
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::filesystem::path prepare_dir(const std::filesystem::path& dir, const std::string& id) {
  const auto target = dir / id;
  std::error_code ec;
  std::filesystem::create_directories(target, ec);
  if (ec) throw IoError("cannot create " + target.string() + ": " + ec.message());
  return target;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool same_except_size(const ScenarioConfig& a, const ScenarioConfig& b) {
  ScenarioConfig x = a;
  ScenarioConfig y = b;
  x.id = y.id = "";
  x.sites = y.sites = 0;
  x.sweep_sites.clear();
  y.sweep_sites.clear();
  return serialize_config(x) == serialize_config(y);
}

}  // namespace

// ---------------------------------------------------------------- config

bool ScenarioConfig::wants(const std::string& artifact) const {
  return std::find(outputs.begin(), outputs.end(), artifact) != outputs.end();
}

ScenarioConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  as_object(j, "config");
  reject_unknown(j, {"id", "model", "L", "L_S", "params", "initial_state", "grid", "probe_time",
                     "averaging_T", "tolerances", "outputs", "sweep"},
                 "");

  ScenarioConfig cfg;
  const std::string model = as_string(require(j, "model", ""), "model");
  if (model == "ising") {
    cfg.model = ModelKind::Ising;
  } else if (model == "xxz") {
    cfg.model = ModelKind::XXZ;
  } else {
    throw ConfigError("model: expected \"ising\" or \"xxz\", got \"" + model + "\"");
  }

  if (j.contains("sweep")) {
    const json& s = as_object(j["sweep"], "sweep");
    reject_unknown(s, {"L"}, "sweep.");
    const json& sizes = require(s, "L", "sweep.");
    if (!sizes.is_array() || sizes.empty()) throw ConfigError("sweep.L: expected a non-empty array");
    for (const auto& v : sizes) cfg.sweep_sites.push_back(int(as_integer(v, "sweep.L[]")));
  }
  if (j.contains("L")) {
    cfg.sites = int(as_integer(j["L"], "L"));
  } else if (!cfg.sweep_sites.empty()) {
    cfg.sites = cfg.sweep_sites.front();
  } else {
    throw ConfigError("L: required field missing");
  }
  if (j.contains("L_S")) cfg.system_sites = int(as_integer(j["L_S"], "L_S"));

  auto check_sizes = [&](int sites, const std::string& field) {
    if (sites < 2 || sites > 14) throw ConfigError(field + ": must lie in [2, 14]");
    if (cfg.system_sites < 1 || cfg.system_sites >= sites) {
      throw ConfigError("L_S: must satisfy 1 <= L_S < L (L_S = " +
                        std::to_string(cfg.system_sites) + ", " + field + " = " +
                        std::to_string(sites) + ")");
    }
    if (cfg.model == ModelKind::XXZ && sites < 3) {
      throw ConfigError(field + ": the xxz chain with next-nearest terms needs L >= 3");
    }
  };
  check_sizes(cfg.sites, "L");
  for (int s : cfg.sweep_sites) check_sizes(s, "sweep.L");

  cfg.params = parse_params(require(j, "params", ""), cfg.model);
  cfg.id = j.contains("id") ? as_string(j["id"], "id")
                            : model_name(cfg.model) + "_L" + std::to_string(cfg.sites);
  if (cfg.id.empty() || cfg.id.find_first_of("/\\") != std::string::npos || cfg.id == "." ||
      cfg.id == "..") {
    throw ConfigError("id: must be a non-empty name without path separators");
  }

  if (j.contains("initial_state")) {
    if (!cfg.sweep_sites.empty() && j["initial_state"].is_string() &&
        j["initial_state"].get<std::string>() != "cdw") {
      throw ConfigError("initial_state: sweeps over L require \"cdw\" or an eigenstate index");
    }
    cfg.initial_state = parse_initial(j["initial_state"], cfg.sites);
  }

  if (j.contains("grid")) {
    const json& g = as_object(j["grid"], "grid");
    reject_unknown(g, {"t_max", "n_points"}, "grid.");
    if (g.contains("t_max")) cfg.t_max = as_real(g["t_max"], "grid.t_max");
    if (g.contains("n_points")) cfg.n_points = Index(as_integer(g["n_points"], "grid.n_points"));
  }
  if (!(cfg.t_max > 0.0)) throw ConfigError("grid.t_max: must be positive");
  if (cfg.n_points < 2) throw ConfigError("grid.n_points: must be at least 2");

  if (j.contains("probe_time")) {
    cfg.probe_time = as_real(j["probe_time"], "probe_time");
    if (!(cfg.probe_time > 0.0) || cfg.probe_time > cfg.t_max) {
      throw ConfigError("probe_time: must lie in (0, grid.t_max]");
    }
  }
  if (j.contains("averaging_T")) cfg.averaging_T = as_real(j["averaging_T"], "averaging_T");
  if (!(cfg.averaging_T > 0.0)) throw ConfigError("averaging_T: must be positive");

  if (j.contains("tolerances")) {
    const json& t = as_object(j["tolerances"], "tolerances");
    reject_unknown(t, {"degeneracy_tol", "support_floor"}, "tolerances.");
    if (t.contains("degeneracy_tol")) {
      cfg.tolerances.degeneracy_tol = as_real(t["degeneracy_tol"], "tolerances.degeneracy_tol");
    }
    if (t.contains("support_floor")) {
      cfg.tolerances.support_floor = as_real(t["support_floor"], "tolerances.support_floor");
    }
    if (!(cfg.tolerances.degeneracy_tol > 0.0)) {
      throw ConfigError("tolerances.degeneracy_tol: must be positive");
    }
    if (!(cfg.tolerances.support_floor > 0.0)) {
      throw ConfigError("tolerances.support_floor: must be positive");
    }
  }

  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (!o.is_array()) throw ConfigError("outputs: expected an array");
    cfg.outputs.clear();
    for (const auto& v : o) {
      const std::string name = as_string(v, "outputs[]");
      if (name != "series" && name != "bounds" && name != "curves") {
        throw ConfigError("outputs: unknown artifact \"" + name +
                          "\" (expected series, bounds, curves)");
      }
      cfg.outputs.push_back(name);
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string serialize_config(const ScenarioConfig& cfg) { return to_text(config_json(cfg)); }

std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& cfg) {
  if (cfg.sweep_sites.empty()) return {cfg};
  std::vector<ScenarioConfig> out;
  for (int sites : cfg.sweep_sites) {
    ScenarioConfig c = cfg;
    c.sweep_sites.clear();
    c.sites = sites;
    c.id = cfg.id + "_L" + std::to_string(sites);
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------- running

ModelInstance build_model(const ScenarioConfig& cfg) {
  LocalHamiltonian terms =
      cfg.model == ModelKind::Ising
          ? ising_terms({cfg.sites, cfg.params.J, cfg.params.h_x, cfg.params.h_z})
          : xxz_terms({cfg.sites, cfg.params.J, cfg.params.U, cfg.params.J_nnn});
  Operator h = terms.dense();
  return {std::move(terms), std::move(h), Bipartition(cfg.sites, cfg.system_sites)};
}

EvolutionContext build_context(const ScenarioConfig& cfg) {
  ModelInstance m = build_model(cfg);
  State psi0;
  switch (cfg.initial_state.kind) {
    case InitialStateSpec::Kind::Cdw: psi0 = cdw_state(cfg.sites); break;
    case InitialStateSpec::Kind::Bitstring: psi0 = basis_state(cfg.initial_state.bits); break;
    case InitialStateSpec::Kind::Eigenstate: {
      if (cfg.initial_state.eigen_index >= m.hamiltonian.rows()) {
        throw ConfigError("initial_state.eigenstate: index out of range");
      }
      const auto spec = hermitian_eig(m.hamiltonian);
      psi0 = spec.eigenvectors.col(cfg.initial_state.eigen_index);
      break;
    }
  }
  return make_context(m.hamiltonian, psi0, m.split, m.terms.split(m.split), cfg.tolerances);
}

RunResult run_scenario(const ScenarioConfig& cfg, unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  if (!cfg.sweep_sites.empty()) {
    throw ConfigError("sweep: config declares a sweep; use the sweep command");
  }
  RunResult r;
  r.config = cfg;
  const EvolutionContext ctx = build_context(cfg);
  const double width = ctx.spectrum.spectral_width();
  r.grid = TimeGrid::resolving(cfg.t_max, cfg.n_points, width);
  r.grid_refined = r.grid.size() != cfg.n_points;
  if (r.grid_refined) {
    r.notes.push_back("grid refined from " + std::to_string(cfg.n_points) + " to " +
                      std::to_string(r.grid.size()) +
                      " points so that dt * (E_max - E_min) <= 0.25");
  }
  r.occupied_gaps = ctx.occupied_gaps;

  const Trajectory traj = evaluate_trajectory(ctx, r.grid, true, threads);
  const std::size_t n = traj.relative_purity.size();
  r.f = traj.relative_purity;
  r.g = figure_of_merit(ctx, r.f);
  r.g_initial = r.g[0];
  r.g_norm.assign(n, 0.0);
  if (!figure_of_merit_is_zero(r.g_initial)) {
    for (std::size_t k = 0; k < n; ++k) r.g_norm[k] = r.g[k] / r.g_initial;
  } else {
    r.notes.push_back("g(0) = 0; normalized column g_norm set to zero");
  }
  r.avg_g = cumulative_time_average({r.grid, r.g});
  r.speed_abs.resize(n);
  for (std::size_t k = 0; k < n; ++k) r.speed_abs[k] = std::abs(traj.rate[k]);

  r.bounds = assemble_bounds(ctx, r.grid, traj, cfg.effective_probe_time(), cfg.averaging_T,
                             threads);

  // Time-scale curves as functions of the probe time.
  const BoundInputs& in = r.bounds.inputs;
  const double g_bound_tight = r.bounds.g_infinity_bound;
  r.delta_curve.resize(n);
  r.tau_qsl_curve.resize(n);
  for (auto& c : r.tau_lower_curves) c.resize(n);
  const double h = r.grid.dt();
  double entropy_integral = 0.0;
  bool entropy_infinite = std::isinf(traj.relative_entropy_to_product[0]);
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      entropy_integral +=
          0.5 * h * (traj.relative_entropy_to_product[k - 1] + traj.relative_entropy_to_product[k]);
      entropy_infinite = entropy_infinite || std::isinf(traj.relative_entropy_to_product[k]);
    }
    const double mean_s = entropy_infinite ? kInfinity
                          : k == 0         ? traj.relative_entropy_to_product[0]
                                           : entropy_integral / r.grid.at(Index(k));
    const double df = r.f[k] - r.f[0];
    std::array<double, 4> taus{};
    for (int i = 1; i <= 4; ++i) taus[std::size_t(i - 1)] = tau_lower(in, i, df, mean_s);
    for (int i = 0; i < 4; ++i) r.tau_lower_curves[std::size_t(i)][k] = taus[std::size_t(i)];
    r.tau_qsl_curve[k] = dominant_of(taus).value;
    r.delta_curve[k] = g_bound_tight - r.avg_g[k];
  }

  const TimeGrid coarse(cfg.t_max, std::min<Index>(r.grid.size(), 201));
  r.constants = global_constants_of_motion(ctx, coarse);

  for (const auto& note : r.bounds.notes) r.notes.push_back(note);
  r.provenance.timestamp = utc_timestamp();
  r.provenance.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

SweepResult sweep(const std::vector<ScenarioConfig>& cfgs, unsigned threads,
                  const std::function<void(const RunResult&)>& on_complete) {
  if (cfgs.empty()) throw ConfigError("sweep: no scenarios");
  for (const auto& c : cfgs) {
    if (!same_except_size(cfgs.front(), c)) {
      throw ConfigError("sweep: scenario \"" + c.id +
                        "\" differs from the first in more than the swept size");
    }
  }
  SweepResult out;
  out.runs.resize(cfgs.size());
  parallel_chunks(cfgs.size(), 1, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out.runs[i] = run_scenario(cfgs[i], 1);
      if (on_complete) on_complete(out.runs[i]);
    }
  });
  for (const auto& r : out.runs) {
    SweepRow row;
    row.id = r.config.id;
    row.sites = r.config.sites;
    row.g_initial = r.g_initial;
    row.avg_g = r.bounds.average_g;
    row.avg_g_normalized = !figure_of_merit_is_zero(r.g_initial) ? r.bounds.average_g / r.g_initial : 0.0;
    row.delta_tau = r.bounds.delta_tau;
    row.tau_qsl = r.bounds.tau_qsl.value;
    row.tau_qsl_index = r.bounds.tau_qsl.index;
    row.tau_eq_unified = r.bounds.tau_eq_unified.value;
    row.tau_eq_index = r.bounds.tau_eq_unified.index;
    row.effective_dimension = r.bounds.inputs.effective_dimension;
    row.g_infinity = r.bounds.g_infinity;
    row.g_infinity_bound = r.bounds.g_infinity_bound;
    out.summary.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------- emitting

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string series_csv(const RunResult& r) {
  std::string out = "t,f,g,g_norm,avg_g_tau,speed_abs\n";
  for (std::size_t k = 0; k < r.f.size(); ++k) {
    out += format_real(r.grid.at(Index(k))) + ',' + format_real(r.f[k]) + ',' +
           format_real(r.g[k]) + ',' + format_real(r.g_norm[k]) + ',' + format_real(r.avg_g[k]) +
           ',' + format_real(r.speed_abs[k]) + '\n';
  }
  return out;
}

std::string curves_csv(const RunResult& r) {
  std::string out = "tau,avg_g_tau,delta_tau,tau_1,tau_2,tau_3,tau_4,tau_qsl\n";
  for (std::size_t k = 0; k < r.f.size(); ++k) {
    out += format_real(r.grid.at(Index(k))) + ',' + format_real(r.avg_g[k]) + ',' +
           format_real(r.delta_curve[k]);
    for (const auto& c : r.tau_lower_curves) out += ',' + format_real(c[k]);
    out += ',' + format_real(r.tau_qsl_curve[k]) + '\n';
  }
  return out;
}

std::string bounds_json(const RunResult& r) {
  const BoundsReport& b = r.bounds;
  const BoundInputs& in = b.inputs;
  json speed;
  for (BoundKind k : kAllBoundKinds) {
    speed[std::string(to_string(k))] = real_value(b.speed_bounds[std::size_t(k)]);
  }
  const PurityBoundsReport& p = b.purity;
  json j;
  j["version"] = kVersion;
  j["scenario"] = config_json(r.config);
  j["grid"] = {{"t_max", r.grid.t_max()},
               {"n_points", r.grid.size()},
               {"dt", r.grid.dt()},
               {"requested_n_points", r.config.n_points},
               {"refined", r.grid_refined}};
  j["occupied_gaps"] = gaps_json(r.occupied_gaps);
  j["g_initial"] = real_value(r.g_initial);
  j["g_norm_zeroed"] = figure_of_merit_is_zero(r.g_initial);
  j["bounds"] = {
      {"probe_time", real_value(b.probe_time)},
      {"g_infinity", real_value(b.g_infinity)},
      {"g_infinity_analytic", b.g_infinity_analytic},
      {"g_infinity_bound", real_value(b.g_infinity_bound)},
      {"g_infinity_bound_recast", real_value(b.g_infinity_bound_recast)},
      {"dephased_weighted_trace", real_value(b.dephased_weighted_trace)},
      {"diagonal_overlap_sum", real_value(b.diagonal_overlap_sum)},
      {"average_g", real_value(b.average_g)},
      {"delta_tau", real_value(b.delta_tau)},
      {"speed_measured_avg", real_value(b.speed_measured_avg)},
      {"mean_relative_entropy", real_value(b.mean_relative_entropy)},
      {"speed_bounds", speed},
      {"speed_bound_entropy_variant", real_value(b.speed_bound_entropy_variant)},
      {"tau_lower", four_json(b.tau_lower)},
      {"tau_eq", four_json(b.tau_eq)},
      {"tau_qsl", dominant_json(b.tau_qsl)},
      {"tau_eq_unified", dominant_json(b.tau_eq_unified)},
  };
  j["inputs"] = {
      {"initial_relative_purity", real_value(in.initial_relative_purity)},
      {"omega_system_purity", real_value(in.omega_system_purity)},
      {"omega_system_inf", real_value(in.omega_system_inf)},
      {"omega_system_two", real_value(in.omega_system_two)},
      {"effective_dimension", real_value(in.effective_dimension)},
      {"hamiltonian_inf", real_value(in.hamiltonian_inf)},
      {"energy_spread", real_value(in.energy_spread)},
      {"skew_lower", real_value(in.skew_lower)},
      {"fisher", real_value(in.fisher)},
      {"coherence", real_value(in.coherence)},
      {"system_interaction_inf", real_value(in.system_interaction_inf)},
      {"interaction_inf", real_value(in.interaction_inf)},
      {"product_min_eigenvalue", real_value(in.product_min_eigenvalue)},
      {"omega_system_entropy", real_value(in.omega_system_entropy)},
      {"omega_bath_entropy", real_value(in.omega_bath_entropy)},
      {"entropy_asymmetry", real_value(in.omega_system_entropy - in.omega_bath_entropy)},
  };
  j["purity_rate"] = {
      {"interaction_norm", real_value(p.interaction_norm)},
      {"points_checked", p.points_checked},
      {"worst_entropy_rate_excess", real_value(p.worst_entropy_rate)},
      {"worst_mutual_info_rate_excess", real_value(p.worst_mutual_info_rate)},
      {"worst_mutual_info_sqrt_purity_rate_excess",
       real_value(p.worst_mutual_info_sqrt_purity_rate)},
      {"worst_time_bound_excess", real_value(p.worst_time_bound)},
      {"equilibrium_purity", real_value(p.equilibrium_purity)},
      {"uncorrelated_time_bound", real_value(p.uncorrelated_time_bound)},
      {"first_equilibrium_entry", real_value(p.first_equilibrium_entry)},
      {"time_bound_at_entry", real_value(p.time_bound_at_entry)},
  };
  j["constants_of_motion"] = {
      {"relative_purity_constant", real_value(r.constants.relative_purity_constant)},
      {"max_relative_purity_drift", real_value(r.constants.max_relative_purity_drift)},
      {"fidelity_mismatch", real_value(r.constants.fidelity_mismatch)},
      {"uhlmann_mismatch", real_value(r.constants.uhlmann_mismatch)},
  };
  j["notes"] = r.notes;
  return to_text(j);
}

std::string summary_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "id,L,g_initial,avg_g_tau,avg_g_tau_norm,delta_tau,tau_qsl,tau_qsl_index,tau_eq_unified,"
      "tau_eq_index,effective_dimension,g_infinity,g_infinity_bound\n";
  for (const auto& r : rows) {
    out += r.id + ',' + std::to_string(r.sites) + ',' + format_real(r.g_initial) + ',' +
           format_real(r.avg_g) + ',' + format_real(r.avg_g_normalized) + ',' +
           format_real(r.delta_tau) + ',' + format_real(r.tau_qsl) + ',' +
           std::to_string(r.tau_qsl_index) + ',' + format_real(r.tau_eq_unified) + ',' +
           std::to_string(r.tau_eq_index) + ',' + format_real(r.effective_dimension) + ',' +
           format_real(r.g_infinity) + ',' + format_real(r.g_infinity_bound) + '\n';
  }
  return out;
}

void emit(const RunResult& result, OutputFormat format, const std::filesystem::path& dir) {
  const auto target = prepare_dir(dir, result.config.id);
  if (result.config.wants("series")) {
    if (format == OutputFormat::Csv) {
      write_file(target / "series.csv", series_csv(result));
    } else {
      json s;
      s["t"] = result.grid.times();
      s["f"] = result.f;
      s["g"] = result.g;
      s["g_norm"] = result.g_norm;
      s["avg_g_tau"] = result.avg_g;
      s["speed_abs"] = result.speed_abs;
      write_file(target / "series.json", to_text(s));
    }
  }
  if (result.config.wants("curves")) write_file(target / "curves.csv", curves_csv(result));
  if (result.config.wants("bounds")) write_file(target / "bounds.json", bounds_json(result));
  json prov = {{"version", result.provenance.version},
               {"timestamp", result.provenance.timestamp},
               {"wall_seconds", result.provenance.wall_seconds}};
  write_file(target / "provenance.json", to_text(prov));
}

void emit_sweep(const std::string& sweep_id, const SweepResult& result, OutputFormat format,
                const std::filesystem::path& dir) {
  for (const auto& r : result.runs) emit(r, format, dir);
  const auto target = prepare_dir(dir, sweep_id);
  write_file(target / "summary.csv", summary_csv(result.summary));
}

}  // namespace relpur
