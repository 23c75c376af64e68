#include <doctest.h>

#include "qecm/channels.hpp"
#include "qecm/pauli.hpp"

using namespace qecm;

TEST_SUITE("channels") {
  TEST_CASE("built-in channels are complete") {
    for (double p : {0.0, 0.01, 0.3, 1.0}) {
      CHECK(completeness_residual(dephasing_channel(p, 1, 2).kraus()) < 1e-12);
      CHECK(completeness_residual(pauli_flip_channel('X', p, 2, 3).kraus()) < 1e-12);
      CHECK(completeness_residual(spontaneous_emission_channel(p, 1, 2).kraus()) < 1e-12);
    }
    CHECK_THROWS_AS(dephasing_channel(1.5, 1, 1), Error);
    CHECK_THROWS_AS(dephasing_channel(0.1, 3, 2), Error);
  }

  TEST_CASE("first-order collective dephasing reports its truncation") {
    const auto ch = collective_dephasing_first_order(0.01, 3);
    CHECK(ch.first_order_truncated());
    CHECK(ch.kraus().size() == 4);
    CHECK(ch.truncation_bound() == doctest::Approx(ch.completeness_residual()));
    CHECK_THROWS_AS(collective_dephasing_first_order(0.5, 3), Error);
  }

  TEST_CASE("incomplete Kraus sets are rejected unless flagged") {
    std::vector<Matrix> k{0.5 * Matrix::identity(2)};
    CHECK_THROWS_AS(QuantumChannel(k, "half"), Error);
    CHECK_NOTHROW(QuantumChannel(k, "half", true));
  }

  TEST_CASE("dephasing p = 1/2 fully dephases |+>") {
    const auto plus = StateVector::normalized({1.0, 1.0});
    const auto out = apply_channel(DensityOperator::pure(plus), dephasing_channel(0.5, 1, 1));
    CHECK(frobenius_norm(out.rho.matrix() - 0.5 * Matrix::identity(2)) < 1e-14);
  }

  TEST_CASE("spontaneous emission drains the excited state") {
    const auto one = StateVector::basis(2, 1);
    const auto out = apply_channel(DensityOperator::pure(one), spontaneous_emission_channel(0.3));
    CHECK(out.rho.matrix()(0, 0).real() == doctest::Approx(0.3));
    CHECK(out.rho.matrix()(1, 1).real() == doctest::Approx(0.7));
  }

  TEST_CASE("composition multiplies Kraus counts and stays complete") {
    const auto c = compose(dephasing_channel(0.1, 1, 2), pauli_flip_channel('X', 0.2, 2, 2));
    CHECK(c.kraus().size() == 4);
    CHECK(c.completeness_residual() < 1e-12);
  }

  TEST_CASE("serial and parallel Kraus application agree") {
    const auto ch = compose(dephasing_channel(0.1, 1, 3), spontaneous_emission_channel(0.2, 2, 3));
    Matrix rho = Matrix::identity(8);
    rho *= 0.125;
    rho(0, 7) = rho(7, 0) = 0.1;
    CHECK(frobenius_norm(apply_kraus(rho, ch.kraus()) - apply_kraus_serial(rho, ch.kraus())) < 1e-15);
  }
}
