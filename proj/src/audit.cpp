#include "relpur/audit.hpp"

#include <algorithm>
#include <cmath>

#include "relpur/info_measures.hpp"

namespace relpur {

namespace {

void add(AuditReport& r, std::string name, double value, double tolerance) {
  r.items.push_back({std::move(name), value, tolerance});
}

double trapezoid_abs_average(const std::vector<double>& v, const TimeGrid& grid) {
  double integral = 0.0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    integral += 0.5 * grid.dt() * (std::abs(v[k - 1]) + std::abs(v[k]));
  }
  return integral / grid.t_max();
}

std::string gap_summary(const std::string& label, const GapReport& g) {
  return label + ": " + std::to_string(g.n_levels) + " levels, min spacing " +
         format_real(g.min_level_spacing) + ", min gap collision " +
         format_real(g.min_gap_collision) + (g.degenerate ? " (degenerate)" : " (non-degenerate)");
}

void pure_state_reductions(AuditReport& r, const EvolutionContext& ctx) {
  const Operator rho0 = ctx.initial_state * ctx.initial_state.adjoint();
  const double var = variance(ctx.initial_state, ctx.hamiltonian);
  const double fq = qfi(rho0, ctx.hamiltonian, {ctx.options.support_floor});
  const double il = skew_lower_IL(rho0, ctx.hamiltonian);
  add(r, "fisher_equals_variance", std::abs(fq - var), 1e-9);
  add(r, "skew_equals_half_variance", std::abs(il - 0.5 * var), 1e-9);
  const double comm = schatten_norm(commutator(rho0, ctx.hamiltonian), SchattenP::One);
  add(r, "commutator_trace_norm_vs_fisher", comm * comm - 4.0 * fq, 1e-9);
}

}  // namespace

bool AuditReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const AuditItem& i) { return i.passed(); });
}

AuditReport check_scenario(const ScenarioConfig& cfg) {
  AuditReport r;
  r.subject = cfg.id;
  const EvolutionContext ctx = build_context(cfg);
  const double width = ctx.spectrum.spectral_width();

  if (ctx.spectrum.dim() <= kMaxGapScanDim) {
    r.notes.push_back(gap_summary("full spectrum",
                                  gap_degeneracy_report(ctx.spectrum, cfg.tolerances.degeneracy_tol)));
  } else {
    r.notes.push_back("full spectrum gap scan skipped (dimension above " +
                      std::to_string(kMaxGapScanDim) + ")");
  }
  r.notes.push_back(gap_summary("occupied levels", ctx.occupied_gaps));
  const TimeGrid requested(cfg.t_max, cfg.n_points);
  r.notes.push_back("sampling guard dt * width = " + format_real(requested.dt() * width) +
                    (requested.resolves(width) ? " (satisfied)" : " (grid will be refined)"));

  add(r, "populations_normalized", std::abs(ctx.populations.sum() - 1.0), 1e-12);
  add(r, "omega_hermitian", hermiticity_defect(ctx.omega), 1e-12);
  add(r, "omega_unit_trace", std::abs(ctx.omega.trace().real() - 1.0), 1e-12);
  add(r, "omega_positive", -hermitian_eig(ctx.omega).eigenvalues.minCoeff(), 1e-12);
  add(r, "overlap_hermitian", hermiticity_defect(ctx.overlap), 1e-12);

  const TimeGrid coarse(cfg.t_max, std::min<Index>(cfg.n_points, 201));
  const ConstantsOfMotion cm = global_constants_of_motion(ctx, coarse);
  add(r, "relative_purity_constant_drift", cm.max_relative_purity_drift, 1e-10);
  add(r, "fidelity_matches_relative_purity", cm.fidelity_mismatch, 1e-12);
  add(r, "uhlmann_formula_matches_relative_purity", cm.uhlmann_mismatch, 1e-8);

  const BoundInputs in = bound_inputs(ctx);
  const double weighted = dephased_weighted_trace(ctx);
  const double diag = diagonal_overlap_sum(ctx);
  if (!ctx.occupied_gaps.degenerate) {
    const double g_inf = infinite_average_g_analytic(ctx);
    add(r, "figure_of_merit_identity", std::abs(g_inf + diag - weighted), 1e-12);
    add(r, "g_infinity_below_bound", g_inf - g_bound(in).tight, 1e-12);
  } else {
    r.notes.push_back("analytic <g>_inf skipped: occupied gaps are degenerate");
  }
  add(r, "omega_system_norm_chain",
      in.omega_system_inf * in.omega_system_inf - in.omega_system_two * in.omega_system_two, 1e-12);
  add(r, "omega_system_entropy_range",
      in.omega_system_entropy - std::log(double(in.system_dim)), 1e-12);
  pure_state_reductions(r, ctx);
  return r;
}

Operator random_hermitian(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Operator a(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  Operator h = (a + a.adjoint()) / (2.0 * std::sqrt(double(dim)));
  return 0.5 * (h + h.adjoint());
}

State random_state(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  State v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

RandomSystem random_system(int system_sites, int bath_sites, std::mt19937_64& rng) {
  const Bipartition split(system_sites + bath_sites, system_sites);
  const Index ds = split.system_dim();
  const Index db = split.bath_dim();
  HamiltonianSplit terms;
  terms.system = kronecker(random_hermitian(ds, rng), Operator::Identity(db, db));
  terms.bath = kronecker(Operator::Identity(ds, ds), random_hermitian(db, rng));
  terms.interaction = 0.5 * random_hermitian(ds * db, rng);
  return {split, std::move(terms), random_state(ds * db, rng)};
}

AuditReport audit_bounds(const EvolutionContext& ctx, const std::vector<double>& probe_times,
                         Index pinsker_points, double slack, unsigned threads) {
  AuditReport r;
  const BoundInputs in = bound_inputs(ctx);
  const double width = ctx.spectrum.spectral_width();

  if (!ctx.occupied_gaps.degenerate) {
    add(r, "g_infinity_below_bound", infinite_average_g_analytic(ctx) - g_bound(in).tight, slack);
  } else {
    r.notes.push_back("analytic <g>_inf skipped: occupied gaps are degenerate");
  }
  pure_state_reductions(r, ctx);

  double t_longest = 0.0;
  for (double tau : probe_times) {
    const TimeGrid grid = TimeGrid::resolving(tau, 2, width);
    const Trajectory traj = evaluate_trajectory(ctx, grid, in.has_split, threads);
    const double speed = trapezoid_abs_average(traj.rate, grid);
    double mean_s = 0.0;
    if (in.has_split) {
      const auto& s = traj.relative_entropy_to_product;
      if (std::any_of(s.begin(), s.end(), [](double x) { return std::isinf(x); })) {
        mean_s = kInfinity;
      } else {
        mean_s = finite_time_average({grid, s}, tau);
      }
    }
    const std::string at = "@tau=" + format_real(tau);
    for (BoundKind kind : kAllBoundKinds) {
      if (!in.has_split &&
          (kind == BoundKind::RelativeEntropy || kind == BoundKind::RelativeEntropyInfty)) {
        continue;
      }
      const double bound = speed_bound(in, kind, mean_s);
      if (std::isfinite(bound)) {
        add(r, "speed_" + std::string(to_string(kind)) + at, speed - bound, slack);
      }
    }
    const double df = traj.relative_purity.back() - traj.relative_purity.front();
    for (int i = 1; i <= (in.has_split ? 4 : 3); ++i) {
      add(r, "tau_lower_" + std::to_string(i) + at, tau_lower(in, i, df, mean_s) - tau, slack);
    }
    if (tau >= t_longest && in.has_split) {
      t_longest = tau;
      const PurityBoundsReport p = purity_bounds(ctx, grid, traj);
      r.items.erase(std::remove_if(r.items.begin(), r.items.end(),
                                   [](const AuditItem& i) { return i.name.rfind("purity_", 0) == 0; }),
                    r.items.end());
      add(r, "purity_rate_entropy", p.worst_entropy_rate, slack);
      add(r, "purity_rate_mutual_info", p.worst_mutual_info_rate, slack);
      add(r, "purity_rate_mutual_info_sqrt_purity", p.worst_mutual_info_sqrt_purity_rate, slack);
      add(r, "purity_time_bound", p.worst_time_bound, slack);
    }
  }

  if (pinsker_points >= 2 && t_longest > 0.0) {
    const PinskerReport pk = pinsker_audit(ctx, TimeGrid(t_longest, pinsker_points));
    add(r, "pinsker_steady_product", pk.worst_product_steady, slack);
    add(r, "pinsker_marginal_product", pk.worst_product_marginals, slack);
  }
  return r;
}

std::vector<AuditReport> random_audit(std::uint64_t seed, int count, unsigned threads) {
  std::mt19937_64 rng(seed);
  std::vector<AuditReport> out;
  for (int n = 0; n < count; ++n) {
    const int bath_sites = 1 + n % 3;
    RandomSystem sys = random_system(1, bath_sites, rng);
    const Operator h = sys.terms.total();
    const EvolutionContext ctx = make_context(h, sys.psi0, sys.split, sys.terms);
    AuditReport r = audit_bounds(ctx, {1.0, 5.0, 20.0}, 41, 1e-10, threads);
    r.subject = "random#" + std::to_string(n) + " (d_S=2, d_B=" +
                std::to_string(sys.split.bath_dim()) + ")";
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace relpur
