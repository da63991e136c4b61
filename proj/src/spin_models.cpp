#include "relpur/spin_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace relpur {

namespace {

void check_site(int sites, int site) {
  if (site < 1 || site > sites) {
    throw std::invalid_argument("site index " + std::to_string(site) + " outside 1.." +
                                std::to_string(sites));
  }
}

// Adds coefficient * P to `out`, where P is the Pauli string `factors`.
// P maps basis |x> to phase(x) |x ^ flip_mask>.
void accumulate_pauli_string(Operator& out, int sites, double coefficient,
                             const std::vector<PauliFactor>& factors) {
  std::uint64_t flip_mask = 0;
  for (const auto& f : factors) {
    if (f.axis != PauliAxis::Z) flip_mask |= std::uint64_t(1) << (sites - f.site);
  }
  const Index dim = out.rows();
  for (Index x = 0; x < dim; ++x) {
    Complex phase(coefficient, 0.0);
    for (const auto& f : factors) {
      const bool down = (std::uint64_t(x) >> (sites - f.site)) & 1U;
      switch (f.axis) {
        case PauliAxis::X:
          break;
        case PauliAxis::Y:
          // sigma^y |0> = i |1>, sigma^y |1> = -i |0>
          phase *= down ? Complex(0, -1) : Complex(0, 1);
          break;
        case PauliAxis::Z:
          if (down) phase = -phase;
          break;
      }
    }
    out(Index(std::uint64_t(x) ^ flip_mask), x) += phase;
  }
}

}  // namespace

int PauliTerm::first_site() const {
  int s = std::numeric_limits<int>::max();
  for (const auto& f : factors) s = std::min(s, f.site);
  return s;
}

int PauliTerm::last_site() const {
  int s = 0;
  for (const auto& f : factors) s = std::max(s, f.site);
  return s;
}

LocalHamiltonian::LocalHamiltonian(int sites) : sites_(sites) {
  if (sites < 1 || sites > 24) {
    throw std::invalid_argument("LocalHamiltonian: sites must be in 1..24");
  }
}

void LocalHamiltonian::add(double coefficient, std::vector<PauliFactor> factors) {
  if (!std::isfinite(coefficient)) {
    throw std::invalid_argument("LocalHamiltonian: non-finite coefficient");
  }
  if (factors.empty()) {
    throw std::invalid_argument("LocalHamiltonian: empty Pauli string");
  }
  for (std::size_t i = 0; i < factors.size(); ++i) {
    check_site(sites_, factors[i].site);
    for (std::size_t j = 0; j < i; ++j) {
      if (factors[j].site == factors[i].site) {
        throw std::invalid_argument("LocalHamiltonian: repeated site in Pauli string");
      }
    }
  }
  terms_.push_back({coefficient, std::move(factors)});
}

Operator LocalHamiltonian::dense() const {
  const Index dim = Index(1) << sites_;
  Operator h = Operator::Zero(dim, dim);
  for (const auto& t : terms_) accumulate_pauli_string(h, sites_, t.coefficient, t.factors);
  return h;
}

HamiltonianSplit LocalHamiltonian::split(const Bipartition& cut) const {
  if (cut.sites() != sites_) {
    throw std::invalid_argument("LocalHamiltonian::split: bipartition has " +
                                std::to_string(cut.sites()) + " sites, Hamiltonian has " +
                                std::to_string(sites_));
  }
  const Index dim = cut.total_dim();
  HamiltonianSplit out{Operator::Zero(dim, dim), Operator::Zero(dim, dim),
                       Operator::Zero(dim, dim)};
  for (const auto& t : terms_) {
    Operator* target = &out.interaction;
    if (t.last_site() <= cut.system_sites()) {
      target = &out.system;
    } else if (t.first_site() > cut.system_sites()) {
      target = &out.bath;
    }
    accumulate_pauli_string(*target, sites_, t.coefficient, t.factors);
  }
  return out;
}

Operator pauli_matrix(PauliAxis axis) {
  Operator m(2, 2);
  switch (axis) {
    case PauliAxis::X:
      m << 0, 1, 1, 0;
      break;
    case PauliAxis::Y:
      m << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case PauliAxis::Z:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

Operator pauli_site(int sites, int site, PauliAxis axis) {
  if (sites < 1) throw std::invalid_argument("pauli_site: need at least one site");
  check_site(sites, site);
  Operator out = Operator::Identity(1, 1);
  for (int k = 1; k <= sites; ++k) {
    out = kronecker(out, k == site ? pauli_matrix(axis) : Operator::Identity(2, 2));
  }
  return out;
}

LocalHamiltonian ising_terms(const IsingParams& p) {
  if (p.sites < 2) throw std::invalid_argument("Ising chain needs L >= 2");
  if (!std::isfinite(p.J) || !std::isfinite(p.h_x) || !std::isfinite(p.h_z)) {
    throw std::invalid_argument("Ising parameters must be finite");
  }
  LocalHamiltonian h(p.sites);
  for (int j = 1; j < p.sites; ++j) {
    h.add(p.J, {{j, PauliAxis::X}, {j + 1, PauliAxis::X}});
  }
  for (int j = 1; j <= p.sites; ++j) {
    h.add(p.h_x, {{j, PauliAxis::X}});
    h.add(p.h_z, {{j, PauliAxis::Z}});
  }
  return h;
}

LocalHamiltonian xxz_terms(const XXZParams& p) {
  if (p.sites < 2) throw std::invalid_argument("XXZ chain needs L >= 2");
  if (p.J_nnn != 0.0 && p.sites < 3) {
    throw std::invalid_argument("XXZ next-nearest-neighbour terms need L >= 3");
  }
  if (!std::isfinite(p.J) || !std::isfinite(p.anisotropy) || !std::isfinite(p.J_nnn)) {
    throw std::invalid_argument("XXZ parameters must be finite");
  }
  LocalHamiltonian h(p.sites);
  for (int j = 1; j < p.sites; ++j) {
    h.add(p.J, {{j, PauliAxis::X}, {j + 1, PauliAxis::X}});
    h.add(p.J, {{j, PauliAxis::Y}, {j + 1, PauliAxis::Y}});
    h.add(p.anisotropy, {{j, PauliAxis::Z}, {j + 1, PauliAxis::Z}});
  }
  for (int j = 1; j + 2 <= p.sites; ++j) {
    h.add(p.J_nnn, {{j, PauliAxis::X}, {j + 1, PauliAxis::Z}, {j + 2, PauliAxis::X}});
    h.add(p.J_nnn, {{j, PauliAxis::Y}, {j + 1, PauliAxis::Z}, {j + 2, PauliAxis::Y}});
  }
  return h;
}

Operator build_ising(const IsingParams& p) { return ising_terms(p).dense(); }

Operator build_xxz(const XXZParams& p) { return xxz_terms(p).dense(); }

std::string cdw_bitstring(int sites) {
  if (sites < 2) throw std::invalid_argument("cdw_state: need L >= 2");
  std::string bits(std::size_t(sites), '0');
  for (int k = 0; k < sites; k += 2) bits[std::size_t(k)] = '1';
  return bits;
}

State basis_state(std::string_view bits) {
  if (bits.empty() || bits.size() > 24) {
    throw std::invalid_argument("basis_state: bitstring length must be in 1..24");
  }
  Index index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("basis_state: bitstring may only contain '0' and '1'");
    }
    index = (index << 1) | Index(c == '1');
  }
  State psi = State::Zero(Index(1) << bits.size());
  psi(index) = 1.0;
  return psi;
}

State cdw_state(int sites) { return basis_state(cdw_bitstring(sites)); }

GapReport gap_degeneracy_report(std::span<const double> levels, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("gap_degeneracy_report: tol must be positive");
  const auto n = Index(levels.size());
  if (n > kMaxGapScanDim) {
    throw std::invalid_argument("gap_degeneracy_report: " + std::to_string(n) +
                                " levels exceed the quadratic scan limit of " +
                                std::to_string(kMaxGapScanDim));
  }
  std::vector<double> e(levels.begin(), levels.end());
  std::sort(e.begin(), e.end());

  GapReport r;
  r.n_levels = n == 0 ? 0 : 1;
  r.min_level_spacing = std::numeric_limits<double>::infinity();
  for (Index i = 1; i < n; ++i) {
    const double s = e[std::size_t(i)] - e[std::size_t(i - 1)];
    r.min_level_spacing = std::min(r.min_level_spacing, s);
    if (s >= tol) ++r.n_levels;
  }

  std::vector<double> gaps;
  gaps.reserve(std::size_t(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < i; ++j) gaps.push_back(e[std::size_t(i)] - e[std::size_t(j)]);
  std::sort(gaps.begin(), gaps.end());
  r.min_gap_collision = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < gaps.size(); ++k) {
    r.min_gap_collision = std::min(r.min_gap_collision, gaps[k] - gaps[k - 1]);
  }
  r.degenerate = r.min_level_spacing < tol || r.min_gap_collision < tol;
  return r;
}

GapReport gap_degeneracy_report(const SpectralDecomposition& spec, double tol) {
  return gap_degeneracy_report(
      std::span<const double>(spec.eigenvalues.data(), std::size_t(spec.eigenvalues.size())),
      tol);
}

}  // namespace relpur
