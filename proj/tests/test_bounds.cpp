#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "relpur/audit.hpp"
#include "relpur/bounds.hpp"

using namespace relpur;

namespace {

EvolutionContext ising4() {
  const LocalHamiltonian model = ising_terms({4, 1.0, 0.5, -1.05});
  const Bipartition cut(4, 1);
  return make_context(model.dense(), cdw_state(4), cut, model.split(cut));
}

EvolutionContext eigenstate_context() {
  const LocalHamiltonian model = ising_terms({4, 1.0, 0.5, -1.05});
  const Bipartition cut(4, 1);
  const auto spec = hermitian_eig(model.dense());
  return make_context(model.dense(), State(spec.eigenvectors.col(3)), cut, model.split(cut));
}

}  // namespace

TEST_CASE("guarded ratio conventions") {
  CHECK(guarded_ratio(0.0, 0.0) == 0.0);
  CHECK(guarded_ratio(0.0, kInfinity) == 0.0);
  CHECK(guarded_ratio(1.0, 0.0) == kInfinity);
  CHECK(guarded_ratio(1.0, kInfinity) == 0.0);
  CHECK(guarded_ratio(3.0, 2.0) == 1.5);
}

TEST_CASE("dominant entry selection") {
  const Dominant zero = dominant_of({0.0, 0.0, 0.0, 0.0});
  CHECK(zero.value == 0.0);
  CHECK(zero.index == 1);
  const Dominant d = dominant_of({1.0, 3.0, 3.0, 2.0});
  CHECK(d.value == 3.0);
  CHECK(d.index == 2);
  const Dominant inf = dominant_of({1.0, kInfinity, 0.5, 2.0});
  CHECK(inf.value == 2.0);
  CHECK(inf.index == 4);
  CHECK(inf.any_infinite);
  const Dominant all = dominant_of({kInfinity, kInfinity, kInfinity, kInfinity});
  CHECK(all.value == kInfinity);
  CHECK(all.index == 1);
}

TEST_CASE("bound family mapping") {
  CHECK(time_scale_kind(1) == BoundKind::Schatten2);
  CHECK(time_scale_kind(2) == BoundKind::L1Coherence);
  CHECK(time_scale_kind(3) == BoundKind::QFI);
  CHECK(time_scale_kind(4) == BoundKind::RelativeEntropy);
  CHECK_THROWS_AS(time_scale_kind(5), std::out_of_range);
  CHECK(to_string(BoundKind::QFI) == "qfi");
}

TEST_CASE("eigenstate: every equilibration and evolution time vanishes") {
  const EvolutionContext ctx = eigenstate_context();
  const BoundInputs in = bound_inputs(ctx);
  CHECK(in.energy_spread < 1e-7);
  CHECK(in.coherence < 1e-10);
  for (int i = 1; i <= 3; ++i) {
    CHECK(tau_eq(in, i) == 0.0);
    CHECK(tau_lower(ctx, i, 5.0) == 0.0);
  }
  const Dominant d = tau_eq_unified(ctx);
  CHECK(d.value == 0.0);
  CHECK(d.index == 1);
  CHECK(tau_qsl(ctx, 5.0).value == 0.0);
  // g_inf = 0, so the relative error equals the bound.
  CHECK(relative_error_delta(in, 0.0) == doctest::Approx(g_bound(in).tight));
}

TEST_CASE("maximally mixed steady state saturates the arithmetic of the bound") {
  BoundInputs in;
  in.system_dim = 2;
  in.bath_dim = 4;
  in.omega_system_inf = 0.5;
  in.omega_system_purity = 0.5;
  in.effective_dimension = 8.0;
  const FigureOfMeritBound b = g_bound(in);
  CHECK(b.tight == doctest::Approx(1.0 / (2.0 * 2.0 * 8.0)));
  CHECK(b.recast == doctest::Approx(1.0 / (2.0 * 8.0)));
  CHECK(b.tight <= b.recast);
}

TEST_CASE("third equilibration time times twice the spread is the mismatch") {
  for (const auto& ctx : {ising4(), eigenstate_context()}) {
    const BoundInputs in = bound_inputs(ctx);
    const double r = std::abs(1.0 - in.initial_relative_purity / in.omega_system_purity);
    CHECK(tau_eq(in, 3) * 2.0 * in.energy_spread == doctest::Approx(r).epsilon(1e-14));
  }
}

TEST_CASE("bound inputs recomputed independently for Ising L=4") {
  const EvolutionContext ctx = ising4();
  const BoundInputs in = bound_inputs(ctx);
  const oracle::Mat rho0 = ctx.initial_state * ctx.initial_state.adjoint();
  const oracle::Mat omega = oracle::dephase(ctx.hamiltonian, rho0);
  const oracle::Mat ws = oracle::trace_bath(omega, 2, 8);
  const oracle::Mat rs0 = oracle::trace_bath(rho0, 2, 8);
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(ws);
  const double purity = (ws * ws).trace().real();
  const double f0 = (ws * rs0).trace().real();

  CHECK(in.omega_system_purity == doctest::Approx(purity).epsilon(1e-9));
  CHECK(in.initial_relative_purity == doctest::Approx(f0).epsilon(1e-9));
  CHECK(in.omega_system_inf == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-9));
  CHECK(in.energy_spread == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(in.fisher == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(in.skew_lower == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(in.effective_dimension == doctest::Approx(1.0 / (omega * omega).trace().real()).epsilon(1e-9));
  CHECK(in.interaction_inf == doctest::Approx(1.0).epsilon(1e-12));
  Eigen::JacobiSVD<oracle::Mat> svd(rho0 - omega);
  CHECK(in.coherence == doctest::Approx(svd.singularValues().sum()).epsilon(1e-9));

  const double r = std::abs(1.0 - f0 / purity);
  CHECK(tau_eq(in, 3) == doctest::Approx(r / 4.0).epsilon(1e-9));
  CHECK(tau_eq(in, 1) ==
        doctest::Approx(std::sqrt(purity) * r / (std::sqrt(2.0) * 8.0 * 2.0)).epsilon(1e-9));
  CHECK(tau_eq(in, 2) == doctest::Approx(r / (2.0 * in.hamiltonian_inf * in.coherence)).epsilon(1e-12));
}

TEST_CASE("frozen reference values for Ising L=4 with the CDW state") {
  const EvolutionContext ctx = ising4();
  const BoundInputs in = bound_inputs(ctx);
  CHECK(tau_eq(in, 1) == doctest::Approx(0.0011844028345408548).epsilon(1e-9));
  CHECK(tau_eq(in, 2) == doctest::Approx(0.0017718572960620008).epsilon(1e-9));
  CHECK(tau_eq(in, 3) == doctest::Approx(0.009430726573476489).epsilon(1e-9));
  CHECK(tau_eq(in, 4) == doctest::Approx(0.003606229232544491).epsilon(1e-9));
  const Dominant d = tau_eq_unified(ctx);
  CHECK(d.index == 3);
  CHECK(infinite_average_g_analytic(ctx) == doctest::Approx(1.5062750959179494e-4).epsilon(1e-9));
  CHECK(g_bound(in).tight == doctest::Approx(0.042777697122011314).epsilon(1e-9));
  CHECK(in.hamiltonian_inf == doctest::Approx(6.161034251907181).epsilon(1e-9));
}

TEST_CASE("speed bound arithmetic") {
  const BoundInputs in = bound_inputs(ising4());
  CHECK(speed_bound(in, BoundKind::QFI) == doctest::Approx(2.0 * in.omega_system_inf * 2.0));
  CHECK(speed_bound(in, BoundKind::Schatten2) ==
        doctest::Approx(2.0 * 8.0 * in.omega_system_two * std::sqrt(2.0)));
  CHECK(speed_bound(in, BoundKind::RelativeEntropy, kInfinity) == kInfinity);
  CHECK(speed_bound(in, BoundKind::RelativeEntropyInfty) ==
        doctest::Approx(4.0 * in.omega_system_inf * in.system_interaction_inf * std::sqrt(std::log(2.0))));
  BoundInputs no_split = in;
  no_split.has_split = false;
  CHECK_THROWS_AS(speed_bound(no_split, BoundKind::RelativeEntropy, 1.0), std::invalid_argument);
}

TEST_CASE("evolution time lower bounds hold at the probe time for Ising L=4") {
  const EvolutionContext ctx = ising4();
  for (double tau : {0.5, 1.0, 5.0}) {
    for (int i = 1; i <= 4; ++i) CHECK(tau_lower(ctx, i, tau) <= tau);
    const Dominant q = tau_qsl(ctx, tau);
    CHECK(q.value <= tau);
  }
  CHECK(tau_qsl(ctx, 5.0).index == 3);
}

TEST_CASE("relative error at long times lies between zero and the bound") {
  const EvolutionContext ctx = ising4();
  const TimeGrid grid = TimeGrid::resolving(100.0, 2001, ctx.spectrum.spectral_width());
  const RealSeries g = figure_of_merit_series(ctx, grid);
  const double delta = relative_error_delta(ctx, g, 100.0);
  CHECK(delta >= 0.0);
  CHECK(delta <= g_bound(ctx).tight);
}

TEST_CASE("purity rate bounds on Ising L=4") {
  const EvolutionContext ctx = ising4();
  const TimeGrid grid(20.0, 2001);
  const Trajectory traj = evaluate_trajectory(ctx, grid, true);
  const PurityBoundsReport p = purity_bounds(ctx, grid, traj);
  CHECK(p.points_checked > 0);
  CHECK(p.worst_entropy_rate <= 1e-10);
  CHECK(p.worst_mutual_info_rate <= 1e-10);
  CHECK(p.worst_mutual_info_sqrt_purity_rate <= 1e-10);
  CHECK(p.worst_time_bound <= 1e-10);
  CHECK(p.uncorrelated_time_bound <= p.first_equilibrium_entry);
}

TEST_CASE("Pinsker instances along a short trajectory") {
  const PinskerReport pk = pinsker_audit(ising4(), TimeGrid(5.0, 26));
  CHECK(pk.points_checked == 26);
  CHECK(pk.worst_product_steady <= 1e-10);
  CHECK(pk.worst_product_marginals <= 1e-10);
}

TEST_CASE("randomized bound audit") {
  for (const auto& report : random_audit(2024, 12)) {
    INFO(report.subject);
    for (const auto& item : report.items) {
      INFO(item.name << " = " << item.value);
      CHECK(item.passed());
    }
  }
}

TEST_CASE("assembled report is self-consistent") {
  const EvolutionContext ctx = ising4();
  const TimeGrid grid(20.0, 2001);
  const Trajectory traj = evaluate_trajectory(ctx, grid, true);
  const BoundsReport r = assemble_bounds(ctx, grid, traj, 20.0, 2000.0);
  CHECK(r.g_infinity_analytic);
  CHECK(r.g_infinity <= r.g_infinity_bound);
  CHECK(r.g_infinity_bound <= r.g_infinity_bound_recast);
  CHECK(r.g_infinity + r.diagonal_overlap_sum == doctest::Approx(r.dephased_weighted_trace).epsilon(1e-12));
  for (std::size_t k = 0; k < 5; ++k) CHECK(r.speed_measured_avg <= r.speed_bounds[k]);
  CHECK(r.tau_qsl.value <= 20.0);
  CHECK(r.tau_eq_unified.index == 3);
}
