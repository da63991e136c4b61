#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relpur/linalg.hpp"

namespace relpur {

enum class PauliAxis { X, Y, Z };

struct PauliFactor {
  int site;  // 1-based
  PauliAxis axis;
};

struct PauliTerm {
  double coefficient;
  std::vector<PauliFactor> factors;

  int first_site() const;
  int last_site() const;
};

/// Pieces of H = H_S (x) I_B + I_S (x) H_B + H_SB, each embedded in the full space.
struct HamiltonianSplit {
  Operator system;
  Operator bath;
  Operator interaction;

  Operator total() const { return system + bath + interaction; }
  /// H_S (x) I_B + H_SB.
  Operator system_and_interaction() const { return system + interaction; }
};

/// A spin Hamiltonian kept as a list of Pauli strings so that each term's
/// site support is known when the chain is cut.
class LocalHamiltonian {
 public:
  explicit LocalHamiltonian(int sites);

  void add(double coefficient, std::vector<PauliFactor> factors);

  int sites() const { return sites_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }

  Operator dense() const;
  /// Terms supported on sites 1..L_S go to H_S, on L_S+1..L to H_B, the rest to H_SB.
  HamiltonianSplit split(const Bipartition& cut) const;

 private:
  int sites_;
  std::vector<PauliTerm> terms_;
};

struct IsingParams {
  int sites = 0;
  double J = 1.0;
  double h_x = 0.0;
  double h_z = 0.0;
};

struct XXZParams {
  int sites = 0;
  double J = 1.0;
  double anisotropy = 0.0;  // U
  double J_nnn = 0.0;
};

Operator pauli_matrix(PauliAxis axis);
/// I (x) ... (x) sigma^axis (x) ... (x) I with the Pauli matrix in slot `site` (1-based).
Operator pauli_site(int sites, int site, PauliAxis axis);

/// J sum_j X_j X_{j+1} + sum_j (h_x X_j + h_z Z_j), open chain.
LocalHamiltonian ising_terms(const IsingParams& p);
/// J sum_j (X_j X_{j+1} + Y_j Y_{j+1}) + U sum_j Z_j Z_{j+1}
///   + J_nnn sum_j (X_j Z_{j+1} X_{j+2} + Y_j Z_{j+1} Y_{j+2}), open chain.
LocalHamiltonian xxz_terms(const XXZParams& p);

Operator build_ising(const IsingParams& p);
Operator build_xxz(const XXZParams& p);

/// "1010..." with |1> on odd sites.
std::string cdw_bitstring(int sites);
/// Computational basis vector; character k is the state of site k+1.
State basis_state(std::string_view bits);
State cdw_state(int sites);

struct GapReport {
  Index n_levels = 0;
  double min_level_spacing = 0.0;
  double min_gap_collision = 0.0;
  bool degenerate = false;
};

inline constexpr Index kMaxGapScanDim = 4096;

/// Level-spacing scan plus sorted positive-gap scan for E_i - E_j == E_k - E_l.
GapReport gap_degeneracy_report(std::span<const double> levels, double tol);
GapReport gap_degeneracy_report(const SpectralDecomposition& spec, double tol);

}  // namespace relpur
