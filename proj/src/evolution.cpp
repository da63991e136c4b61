#include "relpur/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relpur/info_measures.hpp"
#include "relpur/parallel.hpp"

namespace relpur {

namespace {

// Six significant digits, scientific when needed ("2000", "3.85e-06").
std::string to_text(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

constexpr std::size_t kTimeChunk = 128;

// (omega_S (x) I_B) * V without forming the Kronecker product.
Operator apply_system_operator(const Operator& op_s, const Operator& v, const Bipartition& split) {
  const Index ds = split.system_dim();
  const Index db = split.bath_dim();
  Operator out = Operator::Zero(v.rows(), v.cols());
  for (Index s = 0; s < ds; ++s)
    for (Index t = 0; t < ds; ++t) {
      if (op_s(s, t) == Complex(0.0)) continue;
      out.middleRows(s * db, db) += op_s(s, t) * v.middleRows(t * db, db);
    }
  return out;
}

// Rotates each cluster of (near-)degenerate eigenvectors so that psi0 has a
// single nonzero coefficient inside it. Dephasing in the rotated basis equals
// the projection onto eigenspaces.
void adapt_degenerate_clusters(SpectralDecomposition& spec, const State& psi0, double tol) {
  const Index d = spec.dim();
  Index begin = 0;
  while (begin < d) {
    Index end = begin + 1;
    while (end < d && spec.eigenvalues(end) - spec.eigenvalues(end - 1) < tol) ++end;
    const Index m = end - begin;
    if (m > 1) {
      auto block = spec.eigenvectors.middleCols(begin, m);
      const State v = block.adjoint() * psi0;
      if (v.norm() > 0.0) {
        Eigen::HouseholderQR<Operator> qr{Operator(v)};
        const Operator q = qr.householderQ() * Operator::Identity(m, m);
        const Operator rotated = block * q;
        block = rotated;
      }
    }
    begin = end;
  }
}

struct ProductEntropyTables {
  RealVector log_weight;  // ln(mu_a nu_b) on the support, 0 elsewhere
  std::vector<bool> in_support;
};

ProductEntropyTables product_tables(const EvolutionContext& ctx) {
  const Index ds = ctx.split.system_dim();
  const Index db = ctx.split.bath_dim();
  ProductEntropyTables t{RealVector::Zero(ds * db), std::vector<bool>(std::size_t(ds * db))};
  for (Index a = 0; a < ds; ++a)
    for (Index b = 0; b < db; ++b) {
      const double mu = std::max(0.0, ctx.omega_system_spectrum.eigenvalues(a)) *
                        std::max(0.0, ctx.omega_bath_spectrum.eigenvalues(b));
      const bool inside = mu > ctx.options.support_floor;
      t.in_support[std::size_t(a * db + b)] = inside;
      if (inside) t.log_weight(a * db + b) = std::log(mu);
    }
  return t;
}

// v_j(t) = c_j exp(-i E_j t)
State phased(const EvolutionContext& ctx, double t) {
  const RealVector& e = ctx.spectrum.eigenvalues;
  State v(e.size());
  for (Index j = 0; j < e.size(); ++j) {
    v(j) = ctx.coefficients(j) * Complex(std::cos(-e(j) * t), std::sin(-e(j) * t));
  }
  return v;
}

Operator phased_coefficients(const EvolutionContext& ctx, const TimeGrid& grid, std::size_t begin,
                             std::size_t end) {
  Operator p(ctx.spectrum.dim(), Index(end - begin));
  for (std::size_t k = begin; k < end; ++k) p.col(Index(k - begin)) = phased(ctx, grid.at(Index(k)));
  return p;
}

}  // namespace

TimeGrid::TimeGrid(double t_max, Index n_points) : t_max_(t_max), n_points_(n_points) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("TimeGrid: t_max must be positive and finite");
  }
  if (n_points < 2) throw std::invalid_argument("TimeGrid: need at least 2 points");
}

TimeGrid TimeGrid::resolving(double t_max, Index min_points, double spectral_width) {
  Index n = std::max<Index>(min_points, 2);
  if (spectral_width > 0.0) {
    const double needed = std::ceil(t_max * spectral_width / kSamplingGuard) + 1.0;
    n = std::max(n, Index(needed));
  }
  TimeGrid grid(t_max, n);
  while (!grid.resolves(spectral_width)) grid = TimeGrid(t_max, grid.size() + 1);
  return grid;
}

Index TimeGrid::nearest_index(double t) const {
  const double h = dt();
  if (t < -0.5 * h || t > t_max_ + 0.5 * h) {
    throw std::out_of_range("time " + to_text(t) + " outside grid [0, " +
                            to_text(t_max_) + "]");
  }
  return std::clamp<Index>(Index(std::llround(t / h)), 0, n_points_ - 1);
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> t(static_cast<std::size_t>(n_points_));
  for (Index k = 0; k < n_points_; ++k) t[std::size_t(k)] = at(k);
  return t;
}

EvolutionContext make_context(const Operator& hamiltonian, const State& psi0,
                              const Bipartition& split, std::optional<HamiltonianSplit> terms,
                              ContextOptions options) {
  if (hamiltonian.rows() != split.total_dim() || psi0.size() != split.total_dim()) {
    throw std::invalid_argument("make_context: Hamiltonian, state and bipartition dimensions differ");
  }
  if (std::abs(psi0.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("make_context: initial state is not normalized (norm " +
                                to_text(psi0.norm()) + ")");
  }
  if (terms && (terms->total() - hamiltonian).cwiseAbs().maxCoeff() >
                   1e-12 * std::max(1.0, max_abs(hamiltonian))) {
    throw std::invalid_argument("make_context: Hamiltonian split does not sum to H");
  }

  SpectralDecomposition spec = hermitian_eig(hamiltonian);
  adapt_degenerate_clusters(spec, psi0, options.degeneracy_tol);

  EvolutionContext ctx{hamiltonian, std::move(spec), std::move(terms), split, psi0};
  ctx.options = options;
  const auto& v = ctx.spectrum.eigenvectors;
  ctx.coefficients = v.adjoint() * psi0;
  ctx.populations = ctx.coefficients.cwiseAbs2();

  ctx.omega = v * ctx.populations.cast<Complex>().asDiagonal() * v.adjoint();
  ctx.omega = 0.5 * (ctx.omega + ctx.omega.adjoint());
  ctx.omega_system = partial_trace(ctx.omega, split, Subsystem::System);
  ctx.omega_bath = partial_trace(ctx.omega, split, Subsystem::Bath);
  ctx.omega_system_purity = subsystem_purity(ctx.omega_system);

  ctx.overlap = v.adjoint() * apply_system_operator(ctx.omega_system, v, split);
  ctx.overlap = 0.5 * (ctx.overlap + ctx.overlap.adjoint());

  std::vector<double> occupied;
  for (Index j = 0; j < ctx.spectrum.dim(); ++j) {
    if (ctx.populations(j) > options.support_floor) occupied.push_back(ctx.spectrum.eigenvalues(j));
  }
  ctx.occupied_gaps = gap_degeneracy_report(occupied, options.degeneracy_tol);

  ctx.omega_system_spectrum = hermitian_eig(ctx.omega_system);
  ctx.omega_bath_spectrum = hermitian_eig(ctx.omega_bath);
  const Operator product_basis =
      kronecker(ctx.omega_system_spectrum.eigenvectors, ctx.omega_bath_spectrum.eigenvectors);
  ctx.product_basis_vectors = product_basis.adjoint() * v;
  return ctx;
}

EvolutionContext make_context(const SpectralDecomposition& spectrum, const State& psi0,
                              const Bipartition& split, ContextOptions options) {
  Operator h = reconstruct(spectrum);
  h = 0.5 * (h + h.adjoint());
  return make_context(h, psi0, split, std::nullopt, options);
}

State state_at(const EvolutionContext& ctx, double t) {
  return ctx.spectrum.eigenvectors * phased(ctx, t);
}

Operator reduced_state_at(const EvolutionContext& ctx, double t) {
  return reduced_from_state(state_at(ctx, t), ctx.split, Subsystem::System);
}

std::pair<Operator, Operator> dephased_state(const EvolutionContext& ctx) {
  return {ctx.omega, ctx.omega_system};
}

double effective_dimension(const Operator& omega) {
  return 1.0 / expectation_in_density(omega, omega).real();
}

double relative_purity(const EvolutionContext& ctx, double t) {
  const State v = phased(ctx, t);
  return v.dot(ctx.overlap * v).real();
}

double relative_purity_rate(const EvolutionContext& ctx, double t) {
  const State v = phased(ctx, t);
  const State u = ctx.overlap * v;
  // df/dt = i <v|[E, M]|v> = -2 Im sum_j conj(v_j) E_j (M v)_j
  Complex a(0.0);
  for (Index j = 0; j < u.size(); ++j) a += std::conj(v(j)) * ctx.spectrum.eigenvalues(j) * u(j);
  return -2.0 * a.imag();
}

Trajectory evaluate_trajectory(const EvolutionContext& ctx, const TimeGrid& grid,
                               bool with_state_quantities, unsigned threads) {
  const std::size_t n = std::size_t(grid.size());
  Trajectory out;
  out.relative_purity.resize(n);
  out.rate.resize(n);
  ProductEntropyTables tables;
  if (with_state_quantities) {
    out.subsystem_purity.resize(n);
    out.subsystem_entropy.resize(n);
    out.subsystem_max_eigenvalue.resize(n);
    out.relative_entropy_to_product.resize(n);
    tables = product_tables(ctx);
  }
  const Index ds = ctx.split.system_dim();
  const Index db = ctx.split.bath_dim();
  const RealVector& energies = ctx.spectrum.eigenvalues;
  const EntropyConvention conv{ctx.options.support_floor};

  parallel_chunks(n, kTimeChunk, threads, [&](std::size_t begin, std::size_t end) {
    const Operator p = phased_coefficients(ctx, grid, begin, end);
    const Operator u = ctx.overlap * p;
    for (std::size_t k = begin; k < end; ++k) {
      const Index col = Index(k - begin);
      Complex f(0.0), a(0.0);
      for (Index j = 0; j < p.rows(); ++j) {
        const Complex w = std::conj(p(j, col)) * u(j, col);
        f += w;
        a += w * energies(j);
      }
      out.relative_purity[k] = f.real();
      out.rate[k] = -2.0 * a.imag();
    }
    if (!with_state_quantities) return;

    // State amplitudes in the eigenbasis of omega_S (x) omega_B.
    const Operator psi = ctx.product_basis_vectors * p;
    using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    for (std::size_t k = begin; k < end; ++k) {
      const Index col = Index(k - begin);
      const State column = psi.col(col);
      Eigen::Map<const RowMajor> amp(column.data(), ds, db);
      Operator rho_s = amp * amp.adjoint();
      rho_s = 0.5 * (rho_s + rho_s.adjoint());
      Eigen::SelfAdjointEigenSolver<Operator> es(rho_s, Eigen::EigenvaluesOnly);
      double entropy = 0.0;
      for (Index q = 0; q < ds; ++q) {
        const double lam = es.eigenvalues()(q);
        if (lam > conv.support_floor) entropy -= lam * std::log(lam);
      }
      out.subsystem_purity[k] = rho_s.squaredNorm();
      out.subsystem_entropy[k] = entropy;
      out.subsystem_max_eigenvalue[k] = es.eigenvalues()(ds - 1);

      double cross = 0.0;
      double outside = 0.0;
      for (Index i = 0; i < column.size(); ++i) {
        const double w = std::norm(column(i));
        if (tables.in_support[std::size_t(i)]) {
          cross += w * tables.log_weight(i);
        } else {
          outside += w;
        }
      }
      // rho(t) is pure, so S(rho(t)) = 0.
      out.relative_entropy_to_product[k] = outside > conv.support_floor ? kInfinity : -cross;
    }
  });
  return out;
}

RealSeries relative_purity_series(const EvolutionContext& ctx, const TimeGrid& grid,
                                  unsigned threads) {
  auto traj = evaluate_trajectory(ctx, grid, false, threads);
  return {grid, std::move(traj.relative_purity)};
}

std::vector<double> figure_of_merit(const EvolutionContext& ctx, const std::vector<double>& f) {
  std::vector<double> g(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double dev = f[k] - ctx.omega_system_purity;
    g[k] = dev * dev;
  }
  return g;
}

RealSeries figure_of_merit_series(const EvolutionContext& ctx, const TimeGrid& grid,
                                  unsigned threads) {
  const auto f = relative_purity_series(ctx, grid, threads);
  return {grid, figure_of_merit(ctx, f.values)};
}

double finite_time_average(const RealSeries& series, double tau) {
  if (std::size_t(series.grid.size()) != series.values.size()) {
    throw std::invalid_argument("finite_time_average: series does not match its grid");
  }
  if (!(tau > 0.0)) throw std::out_of_range("finite_time_average: tau must be positive");
  const Index k = series.grid.nearest_index(tau);
  if (k == 0) throw std::out_of_range("finite_time_average: tau rounds to t = 0");
  const double h = series.grid.dt();
  double integral = 0.0;
  for (Index i = 1; i <= k; ++i) {
    integral += 0.5 * h * (series.values[std::size_t(i - 1)] + series.values[std::size_t(i)]);
  }
  return integral / series.grid.at(k);
}

std::vector<double> cumulative_time_average(const RealSeries& series) {
  const std::size_t n = series.values.size();
  std::vector<double> avg(n);
  if (n == 0) return avg;
  avg[0] = series.values[0];
  const double h = series.grid.dt();
  double integral = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    integral += 0.5 * h * (series.values[i - 1] + series.values[i]);
    avg[i] = integral / series.grid.at(Index(i));
  }
  return avg;
}

double infinite_average_g_analytic(const EvolutionContext& ctx) {
  if (ctx.occupied_gaps.degenerate) {
    throw DegenerateGapsError(
        "analytic infinite-time average refused: occupied spectrum has degenerate gaps "
        "(min level spacing " + to_text(ctx.occupied_gaps.min_level_spacing) +
        ", min gap collision " + to_text(ctx.occupied_gaps.min_gap_collision) +
        "); use a finite-horizon numeric average");
  }
  const RealVector& p = ctx.populations;
  double g = 0.0;
  for (Index k = 0; k < p.size(); ++k) {
    if (p(k) == 0.0) continue;
    for (Index l = 0; l < p.size(); ++l) {
      if (l == k) continue;
      g += p(k) * p(l) * std::norm(ctx.overlap(k, l));
    }
  }
  return g;
}

double numeric_average_g(const EvolutionContext& ctx, double horizon, unsigned threads) {
  const TimeGrid grid = TimeGrid::resolving(horizon, 2, ctx.spectrum.spectral_width());
  const auto g = figure_of_merit_series(ctx, grid, threads);
  return finite_time_average(g, horizon);
}

ConstantsOfMotion global_constants_of_motion(const EvolutionContext& ctx, const TimeGrid& grid) {
  ConstantsOfMotion r;
  const Operator rho0 = ctx.initial_state * ctx.initial_state.adjoint();
  r.relative_purity_constant = expectation_in_density(ctx.omega, rho0).real();
  for (Index k = 0; k < grid.size(); ++k) {
    const State psi = state_at(ctx, grid.at(k));
    const double value = psi.dot(ctx.omega * psi).real();
    r.max_relative_purity_drift =
        std::max(r.max_relative_purity_drift, std::abs(value - r.relative_purity_constant));
  }
  const double overlap = ctx.initial_state.dot(ctx.omega * ctx.initial_state).real();
  r.fidelity_mismatch = std::abs(overlap - r.relative_purity_constant);
  r.uhlmann_mismatch = std::abs(uhlmann_fidelity(rho0, ctx.omega, {ctx.options.support_floor}) -
                                r.relative_purity_constant);
  return r;
}

}  // namespace relpur
