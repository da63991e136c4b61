#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "relpur/linalg.hpp"

using namespace relpur;

TEST_CASE("kronecker matches the elementwise definition") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Index da = 1 + trial % 4, db = 1 + (trial / 4) % 4;
    const Operator a = oracle::random_hermitian(da, rng);
    const Operator b = Operator::Random(db, db);
    CHECK(max_abs(kronecker(a, b) - oracle::kron(a, b)) == 0.0);
  }
}

TEST_CASE("kronecker is associative") {
  std::mt19937_64 rng(12);
  const Operator a = Operator::Random(2, 2), b = Operator::Random(3, 3), c = Operator::Random(2, 2);
  CHECK(max_abs(kronecker(kronecker(a, b), c) - kronecker(a, kronecker(b, c))) < 1e-12);
}

TEST_CASE("kronecker with identity factors and of Pauli matrices") {
  const Operator z = oracle::pauli('z');
  const Operator zi = kronecker(z, Operator::Identity(2, 2));
  CHECK(zi(0, 0) == Complex(1.0));
  CHECK(zi(2, 2) == Complex(-1.0));
  CHECK_THROWS_AS(kronecker(Operator(2, 3), z), std::invalid_argument);
}

TEST_CASE("partial traces agree with the double-sum oracle") {
  std::mt19937_64 rng(13);
  for (int sites = 2; sites <= 5; ++sites) {
    for (int ls = 1; ls < sites; ++ls) {
      const Bipartition split(sites, ls);
      const Operator rho = oracle::random_density(split.total_dim(), 3, rng);
      const Operator rs = partial_trace(rho, split, Subsystem::System);
      const Operator rb = partial_trace(rho, split, Subsystem::Bath);
      CHECK(max_abs(rs - oracle::trace_bath(rho, split.system_dim(), split.bath_dim())) < 1e-14);
      CHECK(max_abs(rb - oracle::trace_system(rho, split.system_dim(), split.bath_dim())) < 1e-14);
      CHECK(std::abs(rs.trace() - rho.trace()) < 1e-12);
      CHECK(std::abs(rb.trace() - rho.trace()) < 1e-12);
      CHECK(hermitian_eig(Operator(0.5 * (rs + rs.adjoint()))).eigenvalues.minCoeff() > -1e-10);
    }
  }
}

TEST_CASE("partial trace of a product recovers the factors") {
  std::mt19937_64 rng(14);
  const Operator a = oracle::random_density(2, 2, rng);
  const Operator b = oracle::random_density(8, 2, rng);
  const Bipartition split(4, 1);
  const Operator ab = kronecker(a, b);
  CHECK(max_abs(partial_trace(ab, split, Subsystem::System) - a) < 1e-14);
  CHECK(max_abs(partial_trace(ab, split, Subsystem::Bath) - b) < 1e-14);
  CHECK_THROWS_AS(partial_trace(Operator::Identity(8, 8), split, Subsystem::System),
                  std::invalid_argument);
}

TEST_CASE("reduced state from a vector equals the partial trace of its projector") {
  std::mt19937_64 rng(15);
  const Bipartition split(5, 2);
  const State psi = oracle::random_state(split.total_dim(), rng);
  const Operator rho = psi * psi.adjoint();
  CHECK(max_abs(reduced_from_state(psi, split, Subsystem::System) -
                oracle::trace_bath(rho, 4, 8)) < 1e-14);
  CHECK(max_abs(reduced_from_state(psi, split, Subsystem::Bath) -
                oracle::trace_system(rho, 4, 8)) < 1e-14);
}

TEST_CASE("hermitian_eig reconstructs 1000 random Hermitian matrices") {
  std::mt19937_64 rng(16);
  std::uniform_int_distribution<int> dim(2, 64);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Operator a = oracle::random_hermitian(dim(rng), rng);
    const auto spec = hermitian_eig(a);
    const double scale = std::max(1.0, spec.eigenvalues.cwiseAbs().maxCoeff());
    worst = std::max(worst, max_abs(reconstruct(spec) - a) / scale);
    REQUIRE(std::is_sorted(spec.eigenvalues.data(), spec.eigenvalues.data() + spec.dim()));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("hermitian_eig agrees with the general complex eigensolver") {
  std::mt19937_64 rng(17);
  const Operator a = oracle::random_hermitian(12, rng);
  Eigen::ComplexEigenSolver<Operator> general(a);
  std::vector<double> ref;
  for (Index k = 0; k < 12; ++k) ref.push_back(general.eigenvalues()(k).real());
  std::sort(ref.begin(), ref.end());
  const auto spec = hermitian_eig(a);
  for (Index k = 0; k < 12; ++k) CHECK(spec.eigenvalues(k) == doctest::Approx(ref[std::size_t(k)]).epsilon(1e-12));
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  Operator a = Operator::Zero(2, 2);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(a), std::invalid_argument);
  CHECK_THROWS_AS(hermitian_eig(Operator(2, 3)), std::invalid_argument);
}

TEST_CASE("schatten norms of identity and sigma_z") {
  const Operator id = Operator::Identity(5, 5);
  CHECK(schatten_norm(id, SchattenP::One) == doctest::Approx(5.0));
  CHECK(schatten_norm(id, SchattenP::Two) == doctest::Approx(std::sqrt(5.0)));
  CHECK(schatten_norm(id, SchattenP::Inf) == doctest::Approx(1.0));
  const Operator z = oracle::pauli('z');
  CHECK(schatten_norm(z, SchattenP::One) == doctest::Approx(2.0));
  CHECK(schatten_norm(z, SchattenP::Two) == doctest::Approx(std::sqrt(2.0)));
  CHECK(schatten_norm(z, SchattenP::Inf) == doctest::Approx(1.0));
}

TEST_CASE("schatten norm chain on random matrices, Hermitian and not") {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 2 + trial % 7;
    const Operator a = trial % 2 ? oracle::random_hermitian(d, rng) : Operator(Operator::Random(d, d));
    const double n1 = schatten_norm(a, SchattenP::One);
    const double n2 = schatten_norm(a, SchattenP::Two);
    const double ninf = schatten_norm(a, SchattenP::Inf);
    CHECK(ninf <= n2 * (1 + 1e-12));
    CHECK(n2 <= n1 * (1 + 1e-12));
    CHECK(n1 <= std::sqrt(double(d)) * n2 * (1 + 1e-12));
    // Singular values from the SVD regardless of symmetry.
    Eigen::JacobiSVD<Operator> svd(a);
    CHECK(n1 == doctest::Approx(svd.singularValues().sum()).epsilon(1e-10));
  }
}

TEST_CASE("commutator algebra") {
  const Operator x = oracle::pauli('x'), y = oracle::pauli('y'), z = oracle::pauli('z');
  CHECK(max_abs(commutator(x, y) - Complex(0, 2) * z) < 1e-15);
  CHECK(max_abs(commutator(x, x)) == 0.0);
  std::mt19937_64 rng(19);
  const Operator h = oracle::random_hermitian(6, rng);
  const auto spec = hermitian_eig(h);
  const Operator diag_rho = apply_spectral(spec, [](double e) { return std::exp(-e); });
  CHECK(max_abs(commutator(diag_rho, h)) < 1e-12);
  const Operator c = commutator(h, oracle::random_hermitian(6, rng));
  CHECK(max_abs(c + c.adjoint()) < 1e-12);
  CHECK_THROWS_AS(commutator(x, Operator::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("expectation values") {
  const Operator z = oracle::pauli('z');
  State up = State::Zero(2);
  up(0) = 1.0;
  CHECK(expectation(up, z) == Complex(1.0));
  std::mt19937_64 rng(20);
  const Operator a = oracle::random_hermitian(4, rng);
  const Operator mixed = Operator::Identity(4, 4) / 4.0;
  CHECK(std::abs(expectation(mixed, a) - a.trace() / 4.0) < 1e-14);
  const State psi = oracle::random_state(4, rng);
  const Operator rho = psi * psi.adjoint();
  CHECK(std::abs(expectation(psi, a) - expectation(rho, a)) < 1e-13);
  CHECK(std::abs(expectation(psi, a).imag()) < 1e-12);
  CHECK_THROWS_AS(expectation(psi, Operator::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("bipartition validation") {
  CHECK_NOTHROW(Bipartition(4, 1));
  CHECK_THROWS_AS(Bipartition(4, 4), std::invalid_argument);
  CHECK_THROWS_AS(Bipartition(4, 0), std::invalid_argument);
  const Bipartition b(6, 2);
  CHECK(b.system_dim() == 4);
  CHECK(b.bath_dim() == 16);
}

TEST_CASE("templated on the scalar: long double path") {
  using Op = OperatorT<long double>;
  Op a(2, 2);
  a << 2.0L, std::complex<long double>(0, 1), std::complex<long double>(0, -1), 2.0L;
  const auto spec = hermitian_eig(a);
  CHECK(double(spec.eigenvalues(0)) == doctest::Approx(1.0));
  CHECK(double(spec.eigenvalues(1)) == doctest::Approx(3.0));
  CHECK(double(schatten_norm(a, SchattenP::One)) == doctest::Approx(4.0));
}
