#pragma once

// Closed-system dynamics in the energy eigenbasis: |psi(t)> = sum_j c_j
// exp(-i E_j t) |E_j> (hbar = 1). Every per-time quantity costs O(d^2) after
// a single diagonalization.

#include <optional>
#include <utility>
#include <vector>

#include "relpur/linalg.hpp"
#include "relpur/spin_models.hpp"

namespace relpur {

/// dt * (E_max - E_min) must not exceed this.
inline constexpr double kSamplingGuard = 0.25;

class TimeGrid {
 public:
  TimeGrid(double t_max, Index n_points);

  /// Smallest uniform grid on [0, t_max] with at least `min_points` points that
  /// satisfies the sampling guard for the given spectral width.
  static TimeGrid resolving(double t_max, Index min_points, double spectral_width);

  double t_max() const { return t_max_; }
  Index size() const { return n_points_; }
  double dt() const { return t_max_ / double(n_points_ - 1); }
  double at(Index k) const { return k == n_points_ - 1 ? t_max_ : double(k) * dt(); }
  /// Grid index nearest to t; t must lie in [0, t_max] up to half a step.
  Index nearest_index(double t) const;
  bool resolves(double spectral_width) const { return dt() * spectral_width <= kSamplingGuard; }
  std::vector<double> times() const;

 private:
  double t_max_;
  Index n_points_;
};

template <typename T>
struct TimeSeries {
  TimeGrid grid;
  std::vector<T> values;
};
using RealSeries = TimeSeries<double>;

struct ContextOptions {
  double degeneracy_tol = 1e-10;
  double support_floor = 1e-12;
};

/// Immutable after make_context; safe to share between workers.
struct EvolutionContext {
  Operator hamiltonian;
  /// Eigenbasis of H, rotated inside each degenerate eigenspace so that the
  /// initial state overlaps at most one vector per eigenspace.
  SpectralDecomposition spectrum;
  std::optional<HamiltonianSplit> terms;
  Bipartition split;
  State initial_state;
  State coefficients{};    // c_j = <E_j|psi(0)>
  RealVector populations{}; // |c_j|^2
  Operator omega{};        // sum_j |c_j|^2 |E_j><E_j|
  Operator omega_system{};
  Operator omega_bath{};
  Operator overlap{};      // M_lj = <E_l|(omega_S (x) I_B)|E_j>
  double omega_system_purity = 0.0;  // Tr omega_S^2
  /// Gap scan restricted to occupied levels (|c_j|^2 > support_floor).
  GapReport occupied_gaps{};
  ContextOptions options{};

  // Eigenbasis of omega_S (x) omega_B, used for entropic quantities.
  SpectralDecomposition omega_system_spectrum{};
  SpectralDecomposition omega_bath_spectrum{};
  Operator product_basis_vectors{};  // (U_S (x) U_B)^dagger V
};

EvolutionContext make_context(const SpectralDecomposition& spectrum, const State& psi0,
                              const Bipartition& split, ContextOptions options = {});
EvolutionContext make_context(const Operator& hamiltonian, const State& psi0,
                              const Bipartition& split,
                              std::optional<HamiltonianSplit> terms = std::nullopt,
                              ContextOptions options = {});

State state_at(const EvolutionContext& ctx, double t);
Operator reduced_state_at(const EvolutionContext& ctx, double t);

/// (omega, omega_S).
std::pair<Operator, Operator> dephased_state(const EvolutionContext& ctx);

/// 1 / Tr(omega^2).
double effective_dimension(const Operator& omega);

/// f(t) = Tr_S(omega_S rho_S(t)) through the eigenbasis double sum.
double relative_purity(const EvolutionContext& ctx, double t);
double relative_purity_rate(const EvolutionContext& ctx, double t);

/// Quantities sampled along a grid. Entropic entries are filled only when
/// requested, since they need the state itself rather than the overlap matrix.
struct Trajectory {
  std::vector<double> relative_purity;
  std::vector<double> rate;
  std::vector<double> subsystem_purity;       // Tr rho_S(t)^2
  std::vector<double> subsystem_entropy;      // S(rho_S(t))
  std::vector<double> subsystem_max_eigenvalue;
  std::vector<double> relative_entropy_to_product;  // S(rho(t) || omega_S (x) omega_B)
};

Trajectory evaluate_trajectory(const EvolutionContext& ctx, const TimeGrid& grid,
                               bool with_state_quantities, unsigned threads = 1);

RealSeries relative_purity_series(const EvolutionContext& ctx, const TimeGrid& grid,
                                  unsigned threads = 1);
RealSeries figure_of_merit_series(const EvolutionContext& ctx, const TimeGrid& grid,
                                  unsigned threads = 1);
/// g(t) = |f(t) - Tr omega_S^2|^2.
std::vector<double> figure_of_merit(const EvolutionContext& ctx, const std::vector<double>& f);

/// (1/tau) * trapezoid integral over [0, tau]; tau snapped to the nearest grid point.
double finite_time_average(const RealSeries& series, double tau);
/// Running average <h>_{t_k} for every grid point; entry 0 is h(0).
std::vector<double> cumulative_time_average(const RealSeries& series);

/// sum_{k != l} |c_k|^2 |c_l|^2 |M_kl|^2. Throws DegenerateGapsError when the
/// occupied spectrum has colliding gaps.
double infinite_average_g_analytic(const EvolutionContext& ctx);
/// <g>_T on a grid that satisfies the sampling guard.
double numeric_average_g(const EvolutionContext& ctx, double horizon, unsigned threads = 1);

struct ConstantsOfMotion {
  double relative_purity_constant = 0.0;  // Tr(omega rho(0))
  double max_relative_purity_drift = 0.0; // max_t |Tr(omega rho(t)) - Tr(omega rho(0))|
  double fidelity_mismatch = 0.0;         // |<psi0|omega|psi0> - Tr(omega rho(0))|
  double uhlmann_mismatch = 0.0;          // general Uhlmann formula at t = 0 vs the constant
};

ConstantsOfMotion global_constants_of_motion(const EvolutionContext& ctx, const TimeGrid& grid);

}  // namespace relpur
