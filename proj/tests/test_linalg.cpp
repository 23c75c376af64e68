#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qecm/linalg.hpp"

using namespace qecm;

TEST_SUITE("linalg") {
  TEST_CASE("parallel and serial products agree exactly") {
    std::mt19937_64 rng(7);
    for (std::size_t dim : {1u, 3u, 16u, 64u}) {
      const Matrix a = oracle::random_hermitian(dim, rng), b = oracle::random_hermitian(dim, rng);
      CHECK(matmul(a, b) == matmul_serial(a, b));
    }
    CHECK_THROWS_AS(matmul(Matrix(2), Matrix(3)), Error);
  }

  TEST_CASE("kron layout and overflow") {
    Matrix a(2, {1, 2, 3, 4});
    Matrix b = Matrix::identity(2);
    const Matrix k = kron(a, b);
    CHECK(k(0, 2) == cplx{2});
    CHECK(k(3, 1) == cplx{3});
    CHECK(k(1, 0) == cplx{0});
    CHECK_THROWS_AS(kron(Matrix::identity(64), Matrix::identity(32)), Error);
  }

  TEST_CASE("Jacobi eigensolver reconstructs random Hermitian matrices") {
    std::mt19937_64 rng(11);
    for (std::size_t dim : {2u, 5u, 16u}) {
      const Matrix m = oracle::random_hermitian(dim, rng);
      const auto e = hermitian_eig(m);
      for (std::size_t k = 1; k < dim; ++k) CHECK(e.values[k - 1] <= e.values[k]);
      std::vector<cplx> d(e.values.begin(), e.values.end());
      const Matrix back = e.vectors * Matrix::diagonal(std::span<const cplx>(d)) * adjoint(e.vectors);
      CHECK(frobenius_norm(back - m) < 1e-10);
      CHECK(is_unitary(e.vectors, 1e-10));
    }
  }

  TEST_CASE("non-Hermitian input is rejected") {
    Matrix m(2, {0, 1, 0, 0});
    CHECK_THROWS_AS(hermitian_eig(m), Error);
  }

  TEST_CASE("psd_sqrt squares back and rejects negative spectra") {
    std::mt19937_64 rng(3);
    const Matrix h = oracle::random_hermitian(4, rng);
    const Matrix p = h * adjoint(h);
    const Matrix s = psd_sqrt(p);
    CHECK(frobenius_norm(s * s - p) < 1e-9);
    CHECK_THROWS_AS(psd_sqrt(-1.0 * Matrix::identity(2)), Error);
  }

  TEST_CASE("unitary_evolution of Pauli X") {
    Matrix x(2, {0, 1, 1, 0});
    const Matrix u = unitary_evolution(x, 0.3);
    CHECK(std::abs(u(0, 0) - std::cos(0.3)) < 1e-12);
    CHECK(std::abs(u(0, 1) - cplx(0, -std::sin(0.3))) < 1e-12);
  }

  TEST_CASE("state and density validation") {
    CHECK_THROWS_AS(StateVector({1.0, 1.0}), Error);
    const StateVector s = StateVector::normalized({1.0, 1.0});
    CHECK(std::abs(std::norm(s[0]) - 0.5) < 1e-15);
    CHECK_THROWS_AS(DensityOperator(Matrix(2, {0.6, 0, 0, 0.6})), Error);
    CHECK_THROWS_AS(DensityOperator(Matrix(2, {1.2, 0, 0, -0.2})), Error);
    const auto rho = DensityOperator::pure(s);
    CHECK(std::abs(fidelity_pure(s, rho.matrix()) - 1.0) < 1e-14);
  }
}
