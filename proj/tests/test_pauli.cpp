#include <doctest.h>

#include "qecm/linalg.hpp"
#include "qecm/pauli.hpp"

using namespace qecm;

TEST_SUITE("pauli") {
  TEST_CASE("bare and weighted terms") {
    const auto e = pauli::parse("XI");
    REQUIRE(e.terms.size() == 1);
    CHECK(e.terms[0].letters == "XI");
    const auto f = pauli::parse("0.5*XI + 0.5*IX");
    CHECK(f.terms.size() == 2);
    CHECK(f.num_qubits() == 2);
  }

  TEST_CASE("render parses back to the same expression") {
    for (const char* s : {"XI + IX", "0.5*XI - 0.25*ZZ", "(1+2i)*Y", "-1.5i*XYZ + IIZ", "1e-3*ZI"}) {
      const auto e = pauli::parse(s);
      CHECK(pauli::parse(pauli::render(e)) == e);
    }
  }

  TEST_CASE("syntax errors carry an offset") {
    try {
      pauli::parse("XI + QI");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 5);
    }
    CHECK_THROWS_AS(pauli::parse("0.5*"), ParseError);
    CHECK_THROWS_AS(pauli::parse("XI + X"), Error);
  }

  TEST_CASE("XI + IX spectrum") {
    const auto ev = hermitian_eig(pauli::materialize(pauli::parse("XI + IX"))).values;
    CHECK(ev[0] == doctest::Approx(-2.0));
    CHECK(std::abs(ev[1]) < 1e-12);
    CHECK(std::abs(ev[2]) < 1e-12);
    CHECK(ev[3] == doctest::Approx(2.0));
  }

  TEST_CASE("Y = i X Z and on_site placement") {
    const Matrix y = pauli::single('Y');
    CHECK(frobenius_norm(y - cplx(0, 1) * (pauli::single('X') * pauli::single('Z'))) < 1e-15);
    CHECK(pauli::on_site('Z', 3, 5) == "IIZII");
    CHECK_THROWS_AS(pauli::on_site('Z', 6, 5), Error);
    const Matrix z1 = pauli::materialize("ZI");
    CHECK(z1(2, 2) == cplx{-1});
    CHECK(z1(1, 1) == cplx{1});
  }
}
