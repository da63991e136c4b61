#include "relpur/info_measures.hpp"

#include <cmath>

namespace relpur {

namespace {

void require_same_dim(const Operator& a, const Operator& b, const char* what) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

// Hermitian part, so tiny asymmetries from upstream arithmetic do not trip the
// eigensolver's Hermiticity check.
Operator hermitian_part(const Operator& a) { return 0.5 * (a + a.adjoint()); }

double entropy_of_spectrum(const RealVector& lambda, double floor) {
  double s = 0.0;
  for (Index k = 0; k < lambda.size(); ++k) {
    if (lambda(k) > floor) s -= lambda(k) * std::log(lambda(k));
  }
  return s;
}

}  // namespace

double skew_lower_IL(const Operator& rho, const Operator& hamiltonian) {
  require_same_dim(rho, hamiltonian, "skew_lower_IL");
  return 0.25 * commutator(rho, hamiltonian).squaredNorm();
}

double variance(const State& psi, const Operator& hamiltonian) {
  if (psi.size() != hamiltonian.rows()) {
    throw std::invalid_argument("variance: dimension mismatch");
  }
  const State h_psi = hamiltonian * psi;
  const double mean = psi.dot(h_psi).real();
  return std::max(0.0, h_psi.squaredNorm() - mean * mean);
}

double energy_spread(const State& psi, const Operator& hamiltonian) {
  return std::sqrt(variance(psi, hamiltonian));
}

double qfi(const Operator& rho, const Operator& hamiltonian, EntropyConvention conv) {
  require_same_dim(rho, hamiltonian, "qfi");
  const auto spec = hermitian_eig(hermitian_part(rho));
  if (spec.eigenvalues(0) < -1e-10) {
    throw NumericalError("qfi: density matrix has negative eigenvalue " +
                         std::to_string(spec.eigenvalues(0)));
  }
  const Operator h = spec.eigenvectors.adjoint() * hamiltonian * spec.eigenvectors;
  const RealVector lambda = spec.eigenvalues.cwiseMax(0.0);
  double f = 0.0;
  for (Index k = 0; k < lambda.size(); ++k) {
    for (Index l = 0; l < lambda.size(); ++l) {
      const double sum = lambda(k) + lambda(l);
      if (sum <= conv.support_floor) continue;
      const double diff = lambda(k) - lambda(l);
      f += diff * diff / sum * std::norm(h(k, l));
    }
  }
  return 0.5 * f;
}

double coherence_trace_norm(const Operator& rho0, const Operator& omega) {
  require_same_dim(rho0, omega, "coherence_trace_norm");
  return schatten_norm(hermitian_part(rho0 - omega), SchattenP::One);
}

double von_neumann_entropy(const Operator& rho, EntropyConvention conv) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("von_neumann_entropy: not square");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > 1e-8) {
    throw std::invalid_argument("von_neumann_entropy: trace " + std::to_string(tr) +
                                " is not 1");
  }
  const auto spec = hermitian_eig(hermitian_part(rho));
  return entropy_of_spectrum(spec.eigenvalues, conv.support_floor);
}

double relative_entropy(const Operator& x, const Operator& y, EntropyConvention conv) {
  require_same_dim(x, y, "relative_entropy");
  const auto ys = hermitian_eig(hermitian_part(y));
  // Diagonal of x in y's eigenbasis.
  const Operator xy = ys.eigenvectors.adjoint() * x * ys.eigenvectors;
  double cross = 0.0;
  double outside = 0.0;
  for (Index k = 0; k < ys.dim(); ++k) {
    const double w = xy(k, k).real();
    if (ys.eigenvalues(k) > conv.support_floor) {
      cross += w * std::log(ys.eigenvalues(k));
    } else {
      outside += w;
    }
  }
  if (outside > conv.support_floor) return kInfinity;
  const double sx = von_neumann_entropy(x, conv);
  return -sx - cross;
}

double mutual_information(const Operator& rho, const Bipartition& split, EntropyConvention conv) {
  const Operator rs = partial_trace(rho, split, Subsystem::System);
  const Operator rb = partial_trace(rho, split, Subsystem::Bath);
  return von_neumann_entropy(rs, conv) + von_neumann_entropy(rb, conv) -
         von_neumann_entropy(rho, conv);
}

double subsystem_purity(const Operator& rho_s) {
  if (rho_s.rows() != rho_s.cols()) throw std::invalid_argument("subsystem_purity: not square");
  return expectation_in_density(rho_s, rho_s).real();
}

std::pair<double, double> operator_extrema(const Operator& a) {
  const auto spec = hermitian_eig(a);
  return {spec.eigenvalues(0), spec.eigenvalues(spec.dim() - 1)};
}

double uhlmann_fidelity(const Operator& rho, const Operator& sigma, EntropyConvention conv) {
  require_same_dim(rho, sigma, "uhlmann_fidelity");
  const auto rs = hermitian_eig(hermitian_part(rho));
  const Operator sqrt_rho = apply_spectral(
      rs, [&](double x) { return x > conv.support_floor ? std::sqrt(x) : 0.0; });
  const Operator inner = hermitian_part(sqrt_rho * sigma * sqrt_rho);
  const auto is = hermitian_eig(inner);
  double tr = 0.0;
  for (Index k = 0; k < is.dim(); ++k) {
    if (is.eigenvalues(k) > conv.support_floor) tr += std::sqrt(is.eigenvalues(k));
  }
  return tr * tr;
}

}  // namespace relpur
