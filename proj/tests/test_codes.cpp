#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qecm/codes.hpp"
#include "qecm/pauli.hpp"

using namespace qecm;

namespace {

Matrix x1() { return pauli::materialize("XI"); }

double choi_distance(const RecoveryOperation& a, const RecoveryOperation& b, const QuantumChannel& ch,
                     const CodeSpace& code) {
  const auto basis = code_plus_error_basis(code, ch);
  const auto ca = choi_on_subspace([&](const Matrix& m) { return apply_recovery(m, a); }, basis);
  const auto cb = choi_on_subspace([&](const Matrix& m) { return apply_recovery(m, b); }, basis);
  return frobenius_norm(ca - cb);
}

}  // namespace

TEST_SUITE("codes") {
  TEST_CASE("two-qubit code under dephasing satisfies all three conditions") {
    const auto code = CodeSpace::two_qubit_plus();
    for (double p : {0.01, 0.1, 0.5}) {
      const auto r = check_conditions(x1(), dephasing_channel(p, 1, 2), code);
      CHECK(r.all_pass());
      CHECK(r.commutator_residual <= 1e-10);
      CHECK(r.condition2_residual <= 1e-10);
      CHECK(std::abs(r.a_matrix(0, 0) - (1.0 - p)) <= 1e-12);
      CHECK(std::abs(r.a_matrix(1, 1) - p) <= 1e-12);
      CHECK(std::abs(r.a_matrix(0, 1)) <= 1e-12);
    }
  }

  TEST_CASE("xi of the two-qubit and GHZ codes") {
    CHECK(compute_xi(x1(), CodeSpace::two_qubit_plus()).xi == doctest::Approx(1.0));
    for (std::size_t n = 2; n <= 5; ++n) {
      Matrix g(std::size_t{1} << n);
      for (std::size_t q = 1; q <= n; ++q) g += pauli::materialize(pauli::on_site('X', q, n));
      const auto r = compute_xi(g, CodeSpace::ghz(n));
      CHECK(r.xi == doctest::Approx(static_cast<double>(n * n)));
      CHECK(r.spread == doctest::Approx(2.0 * static_cast<double>(n)));
    }
  }

  TEST_CASE("xi matches a brute-force search on random code-preserving generators") {
    std::mt19937_64 rng(42);
    for (int inst = 0; inst < 5; ++inst) {
      const std::size_t dim = 4 << (inst % 2);
      const auto basis = oracle::random_orthonormal(dim, 2, rng);
      std::vector<StateVector> sv;
      for (const auto& b : basis) sv.emplace_back(b, 1e-9);
      const CodeSpace code(sv);
      const Matrix p = code.projector(), q = Matrix::identity(dim) - p;
      const Matrix g = p * oracle::random_hermitian(dim, rng) * p + q * oracle::random_hermitian(dim, rng) * q;
      const auto r = compute_xi(g, code);
      const double brute = oracle::brute_force_xi(g, basis, 10000, rng);
      CHECK(std::abs(r.xi - brute) <= 1e-6 * r.xi);
      CHECK(oracle::variance(g, {r.maximizer.amplitudes().begin(), r.maximizer.amplitudes().end()}) ==
            doctest::Approx(r.xi).epsilon(1e-9));
    }
  }

  TEST_CASE("condition (2) fails for emission and parallel dephasing with Z signal") {
    const Matrix z = pauli::single('Z');
    const CodeSpace code({StateVector::basis(2, 0), StateVector::basis(2, 1)});
    for (double p : {0.01, 0.1}) {
      const auto se = check_conditions(z, spontaneous_emission_channel(p), code);
      CHECK_FALSE(se.verdicts[1]);
      CHECK(se.condition2_residual >= 0.1 * p);
      const auto pd = check_conditions(z, pauli_flip_channel('Z', p, 1, 1), code);
      CHECK_FALSE(pd.verdicts[1]);
      CHECK(pd.condition2_residual >= 0.1 * p);
    }
  }

  TEST_CASE("polar recovery restores code states and matches the syndrome circuit") {
    const auto code = CodeSpace::two_qubit_plus();
    const auto ch = dephasing_channel(0.2, 1, 2);
    const auto polar = build_recovery_polar(ch, code);
    const auto circuit = build_syndrome_recovery(RecoveryKind::two_qubit, 2);
    std::mt19937_64 rng(5);
    for (int k = 0; k < 10; ++k) {
      const auto c = oracle::random_vector(2, rng);
      std::vector<cplx> v(4);
      for (std::size_t i = 0; i < 4; ++i) v[i] = c[0] * code.basis()[0][i] + c[1] * code.basis()[1][i];
      const auto psi = StateVector::normalized(v);
      const Matrix out = apply_recovery(apply_kraus(outer(psi.amplitudes(), psi.amplitudes()), ch.kraus()), polar);
      CHECK(fidelity_pure(psi, out) >= 1.0 - 1e-10);
    }
    CHECK(choi_distance(polar, circuit, ch, code) <= 1e-7);
  }

  TEST_CASE("polar recovery refuses channels that violate condition (2)") {
    const CodeSpace code({StateVector::basis(2, 0), StateVector::basis(2, 1)});
    CHECK_THROWS_AS(build_recovery_polar(spontaneous_emission_channel(0.1), code), Error);
  }

  TEST_CASE("GHZ syndrome circuit corrects every single Z for N >= 3") {
    for (std::size_t n = 3; n <= 5; ++n) {
      const auto rec = build_syndrome_recovery(RecoveryKind::ghz, n);
      const auto psi = plus_minus_superposition(n, 0.7);
      const Matrix rho = outer(psi.amplitudes(), psi.amplitudes());
      for (std::size_t q = 1; q <= n; ++q) {
        const Matrix z = pauli::materialize(pauli::on_site('Z', q, n));
        const Matrix out = apply_recovery(z * rho * z, rec);
        CHECK(fidelity_pure(psi, out) == doctest::Approx(1.0));
      }
    }
  }

  TEST_CASE("two-qubit GHZ cannot tell Z1 from Z2") {
    const auto rec = build_syndrome_recovery(RecoveryKind::ghz, 2);
    // Z2 corrected by Z1 is Z1Z2, a logical flip: fidelity cos^2(phase).
    const auto psi = plus_minus_superposition(2, M_PI / 2.0);
    const Matrix z2 = pauli::materialize("IZ");
    const Matrix out = apply_recovery(z2 * outer(psi.amplitudes(), psi.amplitudes()) * z2, rec);
    CHECK(fidelity_pure(psi, out) < 1e-12);
  }

  TEST_CASE("report text surfaces the xi conventions") {
    const auto r = check_conditions(x1(), dephasing_channel(0.1, 1, 2), CodeSpace::two_qubit_plus());
    const auto text = format_report(r, "t");
    CHECK(text.find("xi = 2") != std::string::npos);
    CHECK(text.find("spread") != std::string::npos);
  }

  TEST_CASE("code validation") {
    CHECK_THROWS_AS(CodeSpace({StateVector::basis(2, 0), StateVector::basis(2, 0)}), Error);
    CHECK_THROWS_AS(CodeSpace::ghz(11), Error);
    CHECK_THROWS_AS(build_syndrome_recovery(RecoveryKind::ghz, 1), Error);
  }
}
