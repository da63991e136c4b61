#pragma once

// Invariant audits: structural checks on one scenario, and a seeded suite of
// random small bipartite systems on which every bound is asserted.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "relpur/bounds.hpp"
#include "relpur/scenario.hpp"

namespace relpur {

struct AuditItem {
  std::string name;
  double value = 0.0;      // measured quantity (a defect or an excess)
  double tolerance = 0.0;  // pass iff value <= tolerance
  bool passed() const { return value <= tolerance; }
};

struct AuditReport {
  std::string subject;
  std::vector<AuditItem> items;
  std::vector<std::string> notes;
  bool passed() const;
};

/// Gap scan of the full spectrum and the occupied levels, constants of motion,
/// structural invariants of omega, omega_S and M, and the figure-of-merit identity.
AuditReport check_scenario(const ScenarioConfig& cfg);

/// A random pure state on d_S x d_B with Hamiltonian pieces drawn from a
/// Gaussian ensemble (Hermitian, unit-scale entries).
struct RandomSystem {
  Bipartition split;
  HamiltonianSplit terms;
  State psi0;
};

Operator random_hermitian(Index dim, std::mt19937_64& rng);
State random_state(Index dim, std::mt19937_64& rng);
/// d_S = 2^system_sites, d_B = 2^bath_sites.
RandomSystem random_system(int system_sites, int bath_sites, std::mt19937_64& rng);

/// Evaluates every theorem instance on one context: the figure-of-merit bound,
/// each finite speed bound at each probe time, tau_probe >= tau^(i), the
/// purity-rate bound on the grid and both Pinsker instances. Values are
/// excesses (measured - bound), so pass means <= slack.
AuditReport audit_bounds(const EvolutionContext& ctx, const std::vector<double>& probe_times,
                         Index pinsker_points, double slack = 1e-10, unsigned threads = 1);

/// `count` random systems with d_S = 2 and d_B in {2, 4, 8}.
std::vector<AuditReport> random_audit(std::uint64_t seed, int count, unsigned threads = 1);

}  // namespace relpur
