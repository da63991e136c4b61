#pragma once

// Upper bounds on the time-averaged speed |df/dt|, the lower bounds on
// evolution and equilibration times that follow from them, and the purity-rate
// bounds for the reduced state.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "relpur/evolution.hpp"
#include "relpur/info_measures.hpp"

namespace relpur {

enum class BoundKind { Schatten2, L1Coherence, QFI, RelativeEntropy, RelativeEntropyInfty };

inline constexpr std::array<BoundKind, 5> kAllBoundKinds = {
    BoundKind::Schatten2, BoundKind::L1Coherence, BoundKind::QFI, BoundKind::RelativeEntropy,
    BoundKind::RelativeEntropyInfty};

std::string_view to_string(BoundKind kind);

/// Relative-purity differences at or below this count as zero in the time bounds.
inline constexpr double kRelativePurityResolution = 1e-14;

/// Bound family behind time scale i = 1..4.
BoundKind time_scale_kind(int index);

/// Time-independent ingredients of every bound, computed once per context.
struct BoundInputs {
  Index system_dim = 0;
  Index bath_dim = 0;
  double initial_relative_purity = 0.0;  // f(0)
  double omega_system_purity = 0.0;      // Tr omega_S^2
  double omega_system_inf = 0.0;         // ||omega_S||_inf
  double omega_system_two = 0.0;         // ||omega_S||_2
  double effective_dimension = 0.0;      // d_eff(omega)
  double hamiltonian_inf = 0.0;          // ||H||_inf
  double energy_spread = 0.0;            // Delta H
  double skew_lower = 0.0;               // I_L(rho(0), H)
  double fisher = 0.0;                   // F_Q(rho(0), H)
  double coherence = 0.0;                // ||rho(0) - omega||_1
  bool has_split = false;
  double system_interaction_inf = 0.0;   // ||H_S (x) I_B + H_SB||_inf
  double interaction_inf = 0.0;          // ||H_SB||_inf
  double product_min_eigenvalue = 0.0;   // lambda_min(omega_S (x) omega_B)
  double omega_system_entropy = 0.0;
  double omega_bath_entropy = 0.0;
  double support_floor = 1e-12;
};

BoundInputs bound_inputs(const EvolutionContext& ctx);

struct FigureOfMeritBound {
  double tight = 0.0;   // ||omega_S||_inf^2 / d_eff(omega)
  double recast = 0.0;  // 1 / (d_eff(omega_S) d_eff(omega))
};

FigureOfMeritBound g_bound(const BoundInputs& in);
FigureOfMeritBound g_bound(const EvolutionContext& ctx);

/// Tr[omega W omega W] with W = omega_S (x) I_B, built directly from the
/// Kronecker product rather than the eigenbasis overlap matrix.
double dephased_weighted_trace(const EvolutionContext& ctx);
/// sum_k |c_k|^4 <E_k|W|E_k>^2.
double diagonal_overlap_sum(const EvolutionContext& ctx);

/// Speed bound of the given family. `mean_relative_entropy` is the average of
/// S(rho(t) || omega_S (x) omega_B) over [0, tau] and is used only by
/// RelativeEntropy; infinity propagates.
double speed_bound(const BoundInputs& in, BoundKind kind, double mean_relative_entropy = 0.0);
/// Same, computing the relative-entropy average on a guard-satisfying grid over [0, tau].
double speed_bound(const EvolutionContext& ctx, BoundKind kind, double tau, unsigned threads = 1);

/// The same bound family evaluated with S(omega_S) + S(omega_B) in place of
/// 2 ln d_S, i.e. the exact infinite-time average of the relative entropy.
double speed_bound_entropy_variant(const BoundInputs& in);

/// num / den with the vacuous-bound conventions: 0/0 = 0, x/0 = +inf, x/inf = 0.
double guarded_ratio(double num, double den);

/// tau^(i) = |f(tau) - f(0)| / B_i for i = 1..4.
double tau_lower(const BoundInputs& in, int index, double relative_purity_change,
                 double mean_relative_entropy = 0.0);
double tau_lower(const EvolutionContext& ctx, int index, double tau_probe, unsigned threads = 1);

/// tau_eq^(i) for i = 1..4.
double tau_eq(const BoundInputs& in, int index);
double tau_eq(const EvolutionContext& ctx, int index);

struct Dominant {
  double value = 0.0;
  int index = 1;  // 1-based
  bool any_infinite = false;
};

/// Maximum over the finite entries; ties go to the lowest index. If every
/// entry is infinite the result is +infinity at index 1.
Dominant dominant_of(const std::array<double, 4>& values);
Dominant tau_qsl(const EvolutionContext& ctx, double tau_probe, unsigned threads = 1);
Dominant tau_eq_unified(const EvolutionContext& ctx);

/// ||omega_S||_inf^2 / d_eff(omega) - <g>_tau.
double relative_error_delta(const BoundInputs& in, double average_g);
double relative_error_delta(const EvolutionContext& ctx, const RealSeries& g, double tau);

struct PurityBoundsReport {
  double interaction_norm = 0.0;
  std::size_t points_checked = 0;
  // Largest (measured - bound) for the three pointwise rate bounds; <= 0 means satisfied.
  double worst_entropy_rate = -kInfinity;
  double worst_mutual_info_rate = -kInfinity;
  double worst_mutual_info_sqrt_purity_rate = -kInfinity;
  // Largest (time bound - t) over the grid; <= 0 means the time bound held everywhere.
  double worst_time_bound = -kInfinity;
  double equilibrium_purity = 0.0;          // grid average of p_S
  double uncorrelated_time_bound = 0.0;     // |sqrt(p_eq) - 1| / (4 sqrt(ln d_S) ||H_SB||)
  double first_equilibrium_entry = 0.0;     // first t with |p_S - p_eq| <= 0.01
  double time_bound_at_entry = 0.0;
};

/// Scans the grid. Needs a trajectory evaluated with state quantities.
PurityBoundsReport purity_bounds(const EvolutionContext& ctx, const TimeGrid& grid,
                                 const Trajectory& traj);

struct PinskerReport {
  std::size_t points_checked = 0;
  double worst_product_steady = -kInfinity;  // ||rho - wS(x)wB||_1 - sqrt(2 S_rel)
  double worst_product_marginals = -kInfinity;  // ||rho - rS(x)rB||_1 - sqrt(2 I_SB)
};

/// Evaluates both Pinsker instances at every grid point. Costs a full
/// d x d eigendecomposition per point.
PinskerReport pinsker_audit(const EvolutionContext& ctx, const TimeGrid& grid);

struct BoundsReport {
  double probe_time = 0.0;
  double g_infinity = 0.0;
  bool g_infinity_analytic = true;
  double g_infinity_bound = 0.0;
  double g_infinity_bound_recast = 0.0;
  double dephased_weighted_trace = 0.0;
  double diagonal_overlap_sum = 0.0;
  double average_g = 0.0;                  // <g>_tau
  double speed_measured_avg = 0.0;         // <|df/dt|>_tau
  double mean_relative_entropy = 0.0;      // <S(rho(t) || omega_S (x) omega_B)>_tau
  std::array<double, 5> speed_bounds{};    // indexed by BoundKind
  double speed_bound_entropy_variant = 0.0;
  std::array<double, 4> tau_lower{};
  std::array<double, 4> tau_eq{};
  Dominant tau_qsl;
  Dominant tau_eq_unified;
  double delta_tau = 0.0;
  BoundInputs inputs;
  PurityBoundsReport purity;
  std::vector<std::string> notes;
};

/// Everything evaluated at probe time `tau` (snapped to the grid). The
/// trajectory must carry state quantities. `averaging_horizon` is used for
/// <g>_inf when the occupied spectrum has degenerate gaps.
BoundsReport assemble_bounds(const EvolutionContext& ctx, const TimeGrid& grid,
                             const Trajectory& traj, double tau, double averaging_horizon,
                             unsigned threads = 1);

}  // namespace relpur
