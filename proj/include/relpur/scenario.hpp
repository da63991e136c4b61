#pragma once

// Declarative scenarios: strict JSON configs, run orchestration, size sweeps
// and the CSV/JSON artifacts.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "relpur/bounds.hpp"
#include "relpur/evolution.hpp"
#include "relpur/spin_models.hpp"

namespace relpur {

inline constexpr const char* kVersion = "0.1.0";

enum class ModelKind { Ising, XXZ };

struct InitialStateSpec {
  enum class Kind { Cdw, Bitstring, Eigenstate };
  Kind kind = Kind::Cdw;
  std::string bits;       // Kind::Bitstring
  Index eigen_index = 0;  // Kind::Eigenstate, ascending energy order
};

struct ModelParams {
  double J = 1.0;
  double h_x = 0.0;    // ising
  double h_z = 0.0;    // ising
  double U = 0.0;      // xxz anisotropy
  double J_nnn = 0.0;  // xxz
};

struct ScenarioConfig {
  std::string id;
  ModelKind model = ModelKind::Ising;
  int sites = 0;
  int system_sites = 1;
  ModelParams params;
  InitialStateSpec initial_state;
  double t_max = 20.0;
  Index n_points = 2001;
  /// Probe time for averages, delta_tau and tau^(i); 0 means t_max.
  double probe_time = 0.0;
  double averaging_T = 2000.0;
  ContextOptions tolerances;
  std::vector<std::string> outputs{"series", "bounds", "curves"};
  /// Sizes to sweep; empty for a single run.
  std::vector<int> sweep_sites;

  bool wants(const std::string& artifact) const;
  double effective_probe_time() const { return probe_time > 0.0 ? probe_time : t_max; }
};

/// Strict parse: unknown keys, missing model parameters, wrong types and
/// inconsistent values raise ConfigError naming the offending field.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ScenarioConfig& cfg);

/// One config per swept size, with ids suffixed by "_L<size>".
std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& cfg);

struct ModelInstance {
  LocalHamiltonian terms;
  Operator hamiltonian;
  Bipartition split;
};

ModelInstance build_model(const ScenarioConfig& cfg);
EvolutionContext build_context(const ScenarioConfig& cfg);

struct Provenance {
  std::string version = kVersion;
  std::string timestamp;  // ISO 8601 UTC
  double wall_seconds = 0.0;
};

struct RunResult {
  ScenarioConfig config;
  TimeGrid grid{1.0, 2};
  bool grid_refined = false;
  std::vector<double> f, g, g_norm, avg_g, speed_abs;
  BoundsReport bounds;
  GapReport occupied_gaps;
  double g_initial = 0.0;
  /// delta_tau and time lower bounds as functions of the probe time, one entry per grid point.
  std::vector<double> delta_curve, tau_qsl_curve;
  std::array<std::vector<double>, 4> tau_lower_curves;
  ConstantsOfMotion constants;
  std::vector<std::string> notes;
  Provenance provenance;
};

RunResult run_scenario(const ScenarioConfig& cfg, unsigned threads = 1);

struct SweepRow {
  std::string id;
  int sites = 0;
  double g_initial = 0.0;
  double avg_g = 0.0;
  double avg_g_normalized = 0.0;
  double delta_tau = 0.0;
  double tau_qsl = 0.0;
  int tau_qsl_index = 0;
  double tau_eq_unified = 0.0;
  int tau_eq_index = 0;
  double effective_dimension = 0.0;
  double g_infinity = 0.0;
  double g_infinity_bound = 0.0;
};

struct SweepResult {
  std::vector<RunResult> runs;
  std::vector<SweepRow> summary;
};

/// Configs must agree on everything but id and size. Runs are independent
/// and evaluated concurrently; the summary keeps input order. `on_complete`
/// sees each finished run (possibly from a worker thread), so results survive
/// a later failure.
SweepResult sweep(const std::vector<ScenarioConfig>& cfgs, unsigned threads = 1,
                  const std::function<void(const RunResult&)>& on_complete = {});

enum class OutputFormat { Csv, Json };

/// Writes <dir>/<id>/{series.csv|series.json, bounds.json, curves.csv, provenance.json}.
void emit(const RunResult& result, OutputFormat format, const std::filesystem::path& dir);
/// Every run plus <dir>/<id>/summary.csv.
void emit_sweep(const std::string& sweep_id, const SweepResult& result, OutputFormat format,
                const std::filesystem::path& dir);

std::string series_csv(const RunResult& result);
std::string curves_csv(const RunResult& result);
std::string bounds_json(const RunResult& result);
std::string summary_csv(const std::vector<SweepRow>& rows);

/// Formats with 17 significant digits; infinities as "inf"/"-inf".
std::string format_real(double x);

}  // namespace relpur
