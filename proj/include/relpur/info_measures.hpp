#pragma once

#include <limits>
#include <utility>

#include "relpur/linalg.hpp"

namespace relpur {

/// 0 ln 0 = 0; eigenvalues at or below `support_floor` count as exactly zero.
struct EntropyConvention {
  double support_floor = 1e-12;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// -(1/4) Tr([rho, H]^2), the commutator lower bound on skew information.
double skew_lower_IL(const Operator& rho, const Operator& hamiltonian);

/// <H^2> - <H>^2, clamped at zero.
double variance(const State& psi, const Operator& hamiltonian);
/// Square root of variance().
double energy_spread(const State& psi, const Operator& hamiltonian);

/// (1/2) sum_{k,l} (l_k - l_l)^2 / (l_k + l_l) |<k|H|l>|^2 over the eigenbasis of rho.
double qfi(const Operator& rho, const Operator& hamiltonian, EntropyConvention conv = {});

/// ||rho(0) - omega||_1.
double coherence_trace_norm(const Operator& rho0, const Operator& omega);

double von_neumann_entropy(const Operator& rho, EntropyConvention conv = {});
/// -S(x) - Tr(x ln y); +infinity when x has weight outside the support of y.
double relative_entropy(const Operator& x, const Operator& y, EntropyConvention conv = {});
/// S(rho_S) + S(rho_B) - S(rho).
double mutual_information(const Operator& rho, const Bipartition& split,
                          EntropyConvention conv = {});
double subsystem_purity(const Operator& rho_s);
/// (lambda_min, lambda_max) of a Hermitian operator.
std::pair<double, double> operator_extrema(const Operator& a);

/// (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double uhlmann_fidelity(const Operator& rho, const Operator& sigma, EntropyConvention conv = {});

}  // namespace relpur
