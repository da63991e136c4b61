#pragma once

// Dense complex operator algebra on the computational basis of a spin chain.
//
// Basis convention: site 1 is the most significant bit of the basis index,
// |0> is spin up (sigma^z = +1) and |1> is spin down (sigma^z = -1). A
// bipartition keeps the first `system_sites` sites as S, so the global index
// of |s>|b> is s * bath_dim + b.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "relpur/errors.hpp"

namespace relpur {

template <typename Real>
using OperatorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using StateT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using Operator = OperatorT<double>;
using State = StateT<double>;
using RealVector = RealVectorT<double>;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kEigenResidualTol = 1e-10;

/// Eigenvalues in ascending order; column k of `eigenvectors` belongs to
/// eigenvalue k.
template <typename Real>
struct SpectralDecompositionT {
  RealVectorT<Real> eigenvalues;
  OperatorT<Real> eigenvectors;

  Index dim() const { return eigenvalues.size(); }
  Real spectral_width() const {
    return dim() == 0 ? Real(0) : eigenvalues(dim() - 1) - eigenvalues(0);
  }
};
using SpectralDecomposition = SpectralDecompositionT<double>;

/// Chain of `sites` qubits cut after the first `system_sites` sites.
class Bipartition {
 public:
  Bipartition(int sites, int system_sites);

  int sites() const { return sites_; }
  int system_sites() const { return system_sites_; }
  int bath_sites() const { return sites_ - system_sites_; }
  Index system_dim() const { return Index(1) << system_sites_; }
  Index bath_dim() const { return Index(1) << bath_sites(); }
  Index total_dim() const { return Index(1) << sites_; }

  bool operator==(const Bipartition&) const = default;

 private:
  int sites_;
  int system_sites_;
};

enum class Subsystem { System, Bath };
enum class SchattenP { One, Two, Inf };

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Derived::RealScalar;
  return a.size() == 0 ? Real(0) : a.cwiseAbs().maxCoeff();
}

/// max|A - A^dagger|.
template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("hermiticity_defect: matrix is not square");
  }
  return max_abs(a - a.adjoint());
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double rel_tol = kHermitianTol) {
  if (a.rows() != a.cols()) return false;
  const auto scale = max_abs(a);
  return hermiticity_defect(a) <= rel_tol * std::max<double>(scale, 1e-300);
}

template <typename DerivedA, typename DerivedB>
OperatorT<typename DerivedA::RealScalar> kronecker(const Eigen::MatrixBase<DerivedA>& a,
                                                   const Eigen::MatrixBase<DerivedB>& b) {
  using Op = OperatorT<typename DerivedA::RealScalar>;
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw std::invalid_argument("kronecker: factors must be square");
  }
  Op out = Eigen::kroneckerProduct(Op(a), Op(b)).eval();
  return out;
}

template <typename DerivedA, typename DerivedB>
OperatorT<typename DerivedA::RealScalar> commutator(const Eigen::MatrixBase<DerivedA>& a,
                                                    const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw std::invalid_argument("commutator: dimension mismatch");
  }
  return a * b - b * a;
}

/// Trace out the complementary subsystem of `split`, keeping `keep`.
template <typename Derived>
OperatorT<typename Derived::RealScalar> partial_trace(const Eigen::MatrixBase<Derived>& rho,
                                                      const Bipartition& split, Subsystem keep) {
  const Index ds = split.system_dim();
  const Index db = split.bath_dim();
  if (rho.rows() != ds * db || rho.cols() != ds * db) {
    throw std::invalid_argument("partial_trace: operator dimension " + std::to_string(rho.rows()) +
                                " does not match bipartition dimension " +
                                std::to_string(ds * db));
  }
  using Op = OperatorT<typename Derived::RealScalar>;
  if (keep == Subsystem::System) {
    Op out = Op::Zero(ds, ds);
    for (Index s = 0; s < ds; ++s)
      for (Index t = 0; t < ds; ++t)
        for (Index b = 0; b < db; ++b) out(s, t) += rho(s * db + b, t * db + b);
    return out;
  }
  Op out = Op::Zero(db, db);
  for (Index s = 0; s < ds; ++s)
    out += rho.block(s * db, s * db, db, db);
  return out;
}

/// Marginal of the pure state |psi><psi| without forming the global projector.
template <typename Derived>
OperatorT<typename Derived::RealScalar> reduced_from_state(const Eigen::MatrixBase<Derived>& psi,
                                                           const Bipartition& split,
                                                           Subsystem keep) {
  using Real = typename Derived::RealScalar;
  const Index ds = split.system_dim();
  const Index db = split.bath_dim();
  if (psi.size() != ds * db) {
    throw std::invalid_argument("reduced_from_state: state dimension mismatch");
  }
  using RowMajor =
      Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const StateT<Real> v = psi;
  Eigen::Map<const RowMajor> amp(v.data(), ds, db);
  if (keep == Subsystem::System) return amp * amp.adjoint();
  return amp.transpose() * amp.conjugate();
}

template <typename Real>
SpectralDecompositionT<Real> hermitian_eig(const OperatorT<Real>& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("hermitian_eig: matrix is not square");
  }
  if (!is_hermitian(a)) {
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian (defect " +
                                std::to_string(double(hermiticity_defect(a))) + ")");
  }
  Eigen::SelfAdjointEigenSolver<OperatorT<Real>> solver(a);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian_eig: tridiagonal QR did not converge within " +
                         std::to_string(Eigen::SelfAdjointEigenSolver<OperatorT<Real>>::m_maxIterations) +
                         " sweeps per eigenvalue (dim " + std::to_string(a.rows()) + ")");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Derived>
SpectralDecompositionT<typename Derived::RealScalar> hermitian_eig(
    const Eigen::MatrixBase<Derived>& a) {
  return hermitian_eig<typename Derived::RealScalar>(OperatorT<typename Derived::RealScalar>(a));
}

/// V f(lambda) V^dagger.
template <typename Real, typename Fn>
OperatorT<Real> apply_spectral(const SpectralDecompositionT<Real>& spec, Fn&& fn) {
  RealVectorT<Real> mapped = spec.eigenvalues.unaryExpr([&](Real x) { return Real(fn(x)); });
  return spec.eigenvectors * mapped.template cast<std::complex<Real>>().asDiagonal() *
         spec.eigenvectors.adjoint();
}

template <typename Real>
OperatorT<Real> reconstruct(const SpectralDecompositionT<Real>& spec) {
  return apply_spectral(spec, [](Real x) { return x; });
}

template <typename Derived>
typename Derived::RealScalar schatten_norm(const Eigen::MatrixBase<Derived>& a, SchattenP p) {
  using Real = typename Derived::RealScalar;
  using Op = OperatorT<Real>;
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("schatten_norm: matrix is not square");
  }
  if (a.size() == 0) return Real(0);
  if (p == SchattenP::Two) return a.norm();
  const Op m = a;
  RealVectorT<Real> sv;
  if (is_hermitian(m)) {
    Eigen::SelfAdjointEigenSolver<Op> solver(m, Eigen::EigenvaluesOnly);
    sv = solver.eigenvalues().cwiseAbs();
  } else {
    Eigen::JacobiSVD<Op> svd(m);
    sv = svd.singularValues();
  }
  return p == SchattenP::One ? sv.sum() : sv.maxCoeff();
}

template <typename DerivedS, typename DerivedA>
std::complex<typename DerivedA::RealScalar> expectation_in_state(
    const Eigen::MatrixBase<DerivedS>& psi, const Eigen::MatrixBase<DerivedA>& a) {
  if (psi.size() != a.rows() || a.rows() != a.cols()) {
    throw std::invalid_argument("expectation: dimension mismatch");
  }
  return psi.dot(a * psi);
}

template <typename DerivedR, typename DerivedA>
std::complex<typename DerivedA::RealScalar> expectation_in_density(
    const Eigen::MatrixBase<DerivedR>& rho, const Eigen::MatrixBase<DerivedA>& a) {
  if (rho.rows() != a.rows() || rho.cols() != a.cols() || a.rows() != a.cols()) {
    throw std::invalid_argument("expectation: dimension mismatch");
  }
  // Tr(rho A) without forming the product.
  return (rho.transpose().array() * a.array()).sum();
}

/// <psi|A|psi> for a column vector, Tr(rho A) for a square matrix.
template <typename DerivedS, typename DerivedA>
std::complex<typename DerivedA::RealScalar> expectation(const Eigen::MatrixBase<DerivedS>& state,
                                                        const Eigen::MatrixBase<DerivedA>& a) {
  if (state.cols() == 1 && a.rows() != 1) return expectation_in_state(state.col(0), a);
  return expectation_in_density(state, a);
}

}  // namespace relpur
