#include "relpur/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace relpur {

namespace {

// Six significant digits, scientific when needed ("2000", "3.85e-06").
std::string to_text(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

void require_split(const BoundInputs& in, const char* what) {
  if (!in.has_split) {
    throw std::invalid_argument(std::string(what) +
                                " needs the Hamiltonian split into system, bath and interaction "
                                "terms; build the context with term locality");
  }
}

void require_index(int index) {
  if (index < 1 || index > 4) throw std::out_of_range("time scale index must be 1..4");
}

double spectral_norm(const Operator& a) { return schatten_norm(a, SchattenP::Inf); }

// Trapezoid average over [0, t_k]; +inf as soon as one sample is infinite.
double average_up_to(const std::vector<double>& values, const TimeGrid& grid, Index k) {
  for (Index i = 0; i <= k; ++i) {
    if (std::isinf(values[std::size_t(i)])) return kInfinity;
  }
  if (k == 0) return values[0];
  const double h = grid.dt();
  double integral = 0.0;
  for (Index i = 1; i <= k; ++i) {
    integral += 0.5 * h * (values[std::size_t(i - 1)] + values[std::size_t(i)]);
  }
  return integral / grid.at(k);
}

std::vector<double> absolute(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::abs(x); });
  return out;
}

// Differences of O(1) purities below this are roundoff; treating them as zero
// keeps the 0/0 convention reachable for eigenstates.
double resolved(double difference) {
  return std::abs(difference) <= kRelativePurityResolution ? 0.0 : std::abs(difference);
}

double equilibrium_mismatch(const BoundInputs& in) {
  return resolved(1.0 - in.initial_relative_purity / in.omega_system_purity);
}

}  // namespace

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Schatten2: return "schatten2";
    case BoundKind::L1Coherence: return "l1_coherence";
    case BoundKind::QFI: return "qfi";
    case BoundKind::RelativeEntropy: return "relative_entropy";
    case BoundKind::RelativeEntropyInfty: return "relative_entropy_infinite_time";
  }
  return "unknown";
}

BoundKind time_scale_kind(int index) {
  require_index(index);
  static constexpr std::array<BoundKind, 4> kinds = {BoundKind::Schatten2, BoundKind::L1Coherence,
                                                     BoundKind::QFI, BoundKind::RelativeEntropy};
  return kinds[std::size_t(index - 1)];
}

BoundInputs bound_inputs(const EvolutionContext& ctx) {
  BoundInputs in;
  in.system_dim = ctx.split.system_dim();
  in.bath_dim = ctx.split.bath_dim();
  in.support_floor = ctx.options.support_floor;
  in.initial_relative_purity = relative_purity(ctx, 0.0);
  in.omega_system_purity = ctx.omega_system_purity;
  in.omega_system_inf = ctx.omega_system_spectrum.eigenvalues.cwiseAbs().maxCoeff();
  in.omega_system_two = ctx.omega_system.norm();
  in.effective_dimension = effective_dimension(ctx.omega);
  in.hamiltonian_inf = ctx.spectrum.eigenvalues.cwiseAbs().maxCoeff();
  in.energy_spread = energy_spread(ctx.initial_state, ctx.hamiltonian);

  const Operator rho0 = ctx.initial_state * ctx.initial_state.adjoint();
  const EntropyConvention conv{ctx.options.support_floor};
  in.skew_lower = skew_lower_IL(rho0, ctx.hamiltonian);
  in.fisher = qfi(rho0, ctx.hamiltonian, conv);
  // rho(0) - omega in the energy eigenbasis: c c^dagger with the diagonal removed.
  Operator coherent = ctx.coefficients * ctx.coefficients.adjoint();
  coherent.diagonal().setZero();
  in.coherence = schatten_norm(coherent, SchattenP::One);

  const RealVector& mu = ctx.omega_system_spectrum.eigenvalues;
  const RealVector& nu = ctx.omega_bath_spectrum.eigenvalues;
  in.product_min_eigenvalue = std::max(0.0, mu.minCoeff()) * std::max(0.0, nu.minCoeff());
  in.omega_system_entropy = von_neumann_entropy(ctx.omega_system, conv);
  in.omega_bath_entropy = von_neumann_entropy(ctx.omega_bath, conv);

  if (ctx.terms) {
    in.has_split = true;
    in.system_interaction_inf = spectral_norm(ctx.terms->system_and_interaction());
    in.interaction_inf = spectral_norm(ctx.terms->interaction);
  }
  return in;
}

FigureOfMeritBound g_bound(const BoundInputs& in) {
  return {in.omega_system_inf * in.omega_system_inf / in.effective_dimension,
          in.omega_system_purity / in.effective_dimension};
}

FigureOfMeritBound g_bound(const EvolutionContext& ctx) { return g_bound(bound_inputs(ctx)); }

double dephased_weighted_trace(const EvolutionContext& ctx) {
  const Operator w =
      kronecker(ctx.omega_system, Operator::Identity(ctx.split.bath_dim(), ctx.split.bath_dim()));
  const Operator a = ctx.omega * w;
  return (a * a).trace().real();
}

double diagonal_overlap_sum(const EvolutionContext& ctx) {
  double s = 0.0;
  for (Index k = 0; k < ctx.populations.size(); ++k) {
    const double m = ctx.overlap(k, k).real();
    s += ctx.populations(k) * ctx.populations(k) * m * m;
  }
  return s;
}

double speed_bound(const BoundInputs& in, BoundKind kind, double mean_relative_entropy) {
  switch (kind) {
    case BoundKind::Schatten2:
      return 2.0 * double(in.bath_dim) * in.omega_system_two * std::sqrt(in.skew_lower);
    case BoundKind::L1Coherence:
      return 2.0 * in.omega_system_inf * in.hamiltonian_inf * in.coherence;
    case BoundKind::QFI:
      return 2.0 * in.omega_system_inf * std::sqrt(in.fisher);
    case BoundKind::RelativeEntropy:
      require_split(in, "relative-entropy speed bound");
      if (std::isinf(mean_relative_entropy)) return kInfinity;
      return 2.0 * std::sqrt(2.0) * in.omega_system_inf * in.system_interaction_inf *
             std::sqrt(std::max(0.0, mean_relative_entropy));
    case BoundKind::RelativeEntropyInfty:
      require_split(in, "infinite-time relative-entropy speed bound");
      return 4.0 * in.omega_system_inf * in.system_interaction_inf *
             std::sqrt(std::log(double(in.system_dim)));
  }
  throw std::invalid_argument("unknown bound kind");
}

double speed_bound(const EvolutionContext& ctx, BoundKind kind, double tau, unsigned threads) {
  const BoundInputs in = bound_inputs(ctx);
  if (kind != BoundKind::RelativeEntropy) return speed_bound(in, kind);
  require_split(in, "relative-entropy speed bound");
  const TimeGrid grid = TimeGrid::resolving(tau, 2, ctx.spectrum.spectral_width());
  const Trajectory traj = evaluate_trajectory(ctx, grid, true, threads);
  return speed_bound(in, kind,
                     average_up_to(traj.relative_entropy_to_product, grid, grid.size() - 1));
}

double speed_bound_entropy_variant(const BoundInputs& in) {
  require_split(in, "entropy-variant speed bound");
  return 2.0 * std::sqrt(2.0) * in.omega_system_inf * in.system_interaction_inf *
         std::sqrt(in.omega_system_entropy + in.omega_bath_entropy);
}

double guarded_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (den == 0.0) return kInfinity;
  if (std::isinf(den)) return 0.0;
  return num / den;
}

double tau_lower(const BoundInputs& in, int index, double relative_purity_change,
                 double mean_relative_entropy) {
  return guarded_ratio(resolved(relative_purity_change),
                       speed_bound(in, time_scale_kind(index), mean_relative_entropy));
}

double tau_lower(const EvolutionContext& ctx, int index, double tau_probe, unsigned threads) {
  require_index(index);
  if (tau_probe == 0.0) return 0.0;
  const BoundInputs in = bound_inputs(ctx);
  const TimeGrid grid = TimeGrid::resolving(tau_probe, 2, ctx.spectrum.spectral_width());
  const Trajectory traj = evaluate_trajectory(ctx, grid, index == 4, threads);
  const double df = traj.relative_purity.back() - traj.relative_purity.front();
  const double mean_s =
      index == 4 ? average_up_to(traj.relative_entropy_to_product, grid, grid.size() - 1) : 0.0;
  return tau_lower(in, index, df, mean_s);
}

double tau_eq(const BoundInputs& in, int index) {
  require_index(index);
  const double r = equilibrium_mismatch(in);
  switch (index) {
    case 1:
      return guarded_ratio(in.omega_system_two * r,
                           std::sqrt(2.0) * double(in.bath_dim) * in.energy_spread);
    case 2:
      return guarded_ratio(r, 2.0 * in.hamiltonian_inf * in.coherence);
    case 3:
      return guarded_ratio(r, 2.0 * in.energy_spread);
    default: {
      require_split(in, "fourth equilibration time");
      // ln(1/lambda_min) diverges when omega_S (x) omega_B is rank deficient.
      if (in.product_min_eigenvalue <= in.support_floor) return guarded_ratio(r, kInfinity);
      return guarded_ratio(r, 2.0 * std::sqrt(2.0) * in.system_interaction_inf *
                                  std::sqrt(std::log(1.0 / in.product_min_eigenvalue)));
    }
  }
}

double tau_eq(const EvolutionContext& ctx, int index) { return tau_eq(bound_inputs(ctx), index); }

Dominant dominant_of(const std::array<double, 4>& values) {
  Dominant d{kInfinity, 1, false};
  bool found = false;
  for (int i = 0; i < 4; ++i) {
    const double v = values[std::size_t(i)];
    if (!std::isfinite(v)) {
      d.any_infinite = true;
      continue;
    }
    if (!found || v > d.value) {
      d.value = v;
      d.index = i + 1;
      found = true;
    }
  }
  return d;
}

Dominant tau_qsl(const EvolutionContext& ctx, double tau_probe, unsigned threads) {
  if (tau_probe == 0.0) return dominant_of({0.0, 0.0, 0.0, 0.0});
  const BoundInputs in = bound_inputs(ctx);
  const TimeGrid grid = TimeGrid::resolving(tau_probe, 2, ctx.spectrum.spectral_width());
  const Trajectory traj = evaluate_trajectory(ctx, grid, in.has_split, threads);
  const double df = traj.relative_purity.back() - traj.relative_purity.front();
  std::array<double, 4> taus{};
  for (int i = 1; i <= 3; ++i) taus[std::size_t(i - 1)] = tau_lower(in, i, df);
  taus[3] = in.has_split ? tau_lower(in, 4, df,
                                     average_up_to(traj.relative_entropy_to_product, grid,
                                                   grid.size() - 1))
                         : kInfinity;
  return dominant_of(taus);
}

Dominant tau_eq_unified(const EvolutionContext& ctx) {
  const BoundInputs in = bound_inputs(ctx);
  std::array<double, 4> taus{};
  for (int i = 1; i <= 3; ++i) taus[std::size_t(i - 1)] = tau_eq(in, i);
  taus[3] = in.has_split ? tau_eq(in, 4) : kInfinity;
  return dominant_of(taus);
}

double relative_error_delta(const BoundInputs& in, double average_g) {
  return g_bound(in).tight - average_g;
}

double relative_error_delta(const EvolutionContext& ctx, const RealSeries& g, double tau) {
  return relative_error_delta(bound_inputs(ctx), finite_time_average(g, tau));
}

PurityBoundsReport purity_bounds(const EvolutionContext& ctx, const TimeGrid& grid,
                                 const Trajectory& traj) {
  if (!ctx.terms) {
    throw std::invalid_argument(
        "purity bounds need the Hamiltonian split; build the context with term locality");
  }
  const std::size_t n = std::size_t(grid.size());
  if (traj.subsystem_purity.size() != n) {
    throw std::invalid_argument("purity bounds need a trajectory with state quantities");
  }
  PurityBoundsReport r;
  r.interaction_norm = spectral_norm(ctx.terms->interaction);
  const double h_sb = r.interaction_norm;
  const double ln_ds = std::log(double(ctx.split.system_dim()));
  const double h = grid.dt();
  const auto& p = traj.subsystem_purity;

  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double rate = std::abs(p[k + 1] - p[k - 1]) / (2.0 * h);
    const double s = std::max(0.0, traj.subsystem_entropy[k]);
    const double mutual = 2.0 * s;  // global state is pure
    const double sqrt_p = std::sqrt(p[k]);
    r.worst_entropy_rate = std::max(r.worst_entropy_rate, rate - 8.0 * std::sqrt(s) * sqrt_p * h_sb);
    r.worst_mutual_info_rate =
        std::max(r.worst_mutual_info_rate, rate - 4.0 * std::sqrt(2.0 * mutual) *
                                                      traj.subsystem_max_eigenvalue[k] * h_sb);
    r.worst_mutual_info_sqrt_purity_rate = std::max(
        r.worst_mutual_info_sqrt_purity_rate, rate - 4.0 * std::sqrt(2.0 * mutual) * sqrt_p * h_sb);
    ++r.points_checked;
  }

  const double denom = 4.0 * std::sqrt(ln_ds) * h_sb;
  auto time_bound = [&](double p_tau) {
    return guarded_ratio(std::abs(std::sqrt(p_tau) - std::sqrt(p[0])), denom);
  };
  for (std::size_t k = 0; k < n; ++k) {
    r.worst_time_bound = std::max(r.worst_time_bound, time_bound(p[k]) - grid.at(Index(k)));
  }

  r.equilibrium_purity = finite_time_average({grid, p}, grid.t_max());
  r.uncorrelated_time_bound = guarded_ratio(std::abs(std::sqrt(r.equilibrium_purity) - 1.0), denom);
  r.first_equilibrium_entry = kInfinity;
  r.time_bound_at_entry = kInfinity;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(p[k] - r.equilibrium_purity) <= 0.01) {
      r.first_equilibrium_entry = grid.at(Index(k));
      r.time_bound_at_entry = time_bound(p[k]);
      break;
    }
  }
  return r;
}

PinskerReport pinsker_audit(const EvolutionContext& ctx, const TimeGrid& grid) {
  const EntropyConvention conv{ctx.options.support_floor};
  const Operator steady = kronecker(ctx.omega_system, ctx.omega_bath);
  PinskerReport r;
  for (Index k = 0; k < grid.size(); ++k) {
    const State psi = state_at(ctx, grid.at(k));
    const Operator rho = psi * psi.adjoint();

    const double s_rel = relative_entropy(rho, steady, conv);
    if (std::isfinite(s_rel)) {
      const double lhs = schatten_norm(Operator(0.5 * ((rho - steady) + (rho - steady).adjoint())),
                                       SchattenP::One);
      r.worst_product_steady =
          std::max(r.worst_product_steady, lhs - std::sqrt(2.0 * std::max(0.0, s_rel)));
    }

    const Operator rs = partial_trace(rho, ctx.split, Subsystem::System);
    const Operator rb = partial_trace(rho, ctx.split, Subsystem::Bath);
    const Operator cor = rho - kronecker(rs, rb);
    const double mutual = mutual_information(rho, ctx.split, conv);
    const double lhs = schatten_norm(Operator(0.5 * (cor + cor.adjoint())), SchattenP::One);
    r.worst_product_marginals =
        std::max(r.worst_product_marginals, lhs - std::sqrt(2.0 * std::max(0.0, mutual)));
    ++r.points_checked;
  }
  return r;
}

BoundsReport assemble_bounds(const EvolutionContext& ctx, const TimeGrid& grid,
                             const Trajectory& traj, double tau, double averaging_horizon,
                             unsigned threads) {
  if (traj.relative_purity.size() != std::size_t(grid.size()) ||
      traj.subsystem_purity.size() != std::size_t(grid.size())) {
    throw std::invalid_argument("assemble_bounds: trajectory must carry state quantities");
  }
  BoundsReport r;
  r.inputs = bound_inputs(ctx);
  const BoundInputs& in = r.inputs;
  const Index k = grid.nearest_index(tau);
  if (k == 0) throw std::out_of_range("assemble_bounds: probe time rounds to t = 0");
  r.probe_time = grid.at(k);

  const FigureOfMeritBound gb = g_bound(in);
  r.g_infinity_bound = gb.tight;
  r.g_infinity_bound_recast = gb.recast;
  r.dephased_weighted_trace = dephased_weighted_trace(ctx);
  r.diagonal_overlap_sum = diagonal_overlap_sum(ctx);
  if (ctx.occupied_gaps.degenerate) {
    r.g_infinity_analytic = false;
    r.g_infinity = numeric_average_g(ctx, averaging_horizon, threads);
    r.notes.push_back("occupied spectrum has degenerate gaps; <g>_inf replaced by <g>_T at T = " +
                      to_text(averaging_horizon));
  } else {
    r.g_infinity = infinite_average_g_analytic(ctx);
  }

  const std::vector<double> g = figure_of_merit(ctx, traj.relative_purity);
  r.average_g = average_up_to(g, grid, k);
  r.delta_tau = relative_error_delta(in, r.average_g);
  r.speed_measured_avg = average_up_to(absolute(traj.rate), grid, k);
  r.mean_relative_entropy = average_up_to(traj.relative_entropy_to_product, grid, k);

  for (BoundKind kind : kAllBoundKinds) {
    if (!in.has_split &&
        (kind == BoundKind::RelativeEntropy || kind == BoundKind::RelativeEntropyInfty)) {
      r.speed_bounds[std::size_t(kind)] = kInfinity;
      continue;
    }
    r.speed_bounds[std::size_t(kind)] = speed_bound(in, kind, r.mean_relative_entropy);
  }
  if (std::isinf(r.mean_relative_entropy)) {
    r.notes.push_back("relative entropy to omega_S (x) omega_B is infinite on [0, tau]; "
                      "its speed bound is infinite and tau^(4) is vacuous");
  }
  r.speed_bound_entropy_variant = in.has_split ? speed_bound_entropy_variant(in) : kInfinity;

  const double df = traj.relative_purity[std::size_t(k)] - traj.relative_purity[0];
  for (int i = 1; i <= 4; ++i) {
    const double bound = r.speed_bounds[std::size_t(time_scale_kind(i))];
    r.tau_lower[std::size_t(i - 1)] = guarded_ratio(std::abs(df), bound);
    if (bound == 0.0 && df != 0.0) {
      r.notes.push_back("tau^(" + std::to_string(i) +
                        "): zero speed bound with nonzero change in f; reported as +inf");
    }
  }
  const double mismatch = equilibrium_mismatch(in);
  for (int i = 1; i <= 4; ++i) {
    r.tau_eq[std::size_t(i - 1)] = (i == 4 && !in.has_split) ? kInfinity : tau_eq(in, i);
    if (std::isinf(r.tau_eq[std::size_t(i - 1)]) && mismatch != 0.0) {
      r.notes.push_back("tau_eq^(" + std::to_string(i) +
                        ") is infinite and excluded from the unified estimate");
    }
  }
  if (in.has_split && in.product_min_eigenvalue <= in.support_floor) {
    r.notes.push_back("omega_S (x) omega_B is rank deficient; ln(1/lambda_min) diverges and "
                      "tau_eq^(4) is vacuous (0)");
  }
  r.tau_qsl = dominant_of(r.tau_lower);
  r.tau_eq_unified = dominant_of(r.tau_eq);
  if (r.tau_qsl.any_infinite) r.notes.push_back("tau_QSL: infinite entries excluded from max");

  r.purity = purity_bounds(ctx, grid, traj);
  return r;
}

}  // namespace relpur
