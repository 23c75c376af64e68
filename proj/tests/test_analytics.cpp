#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qecm/analytics.hpp"
#include "qecm/error.hpp"

using namespace qecm;
namespace an = qecm::analytics;

TEST_SUITE("analytics") {
  TEST_CASE("rederived moments equal the quadrature of the segment model") {
    for (double p : {0.0, 0.01, 0.05, 0.1, 0.3}) {
      for (std::size_t r : {1u, 10u, 100u}) {
        const auto m = an::phase_moments_rederived(0.8, p, r);
        const auto q = oracle::phase_moments_by_quadrature(0.8, p, r);
        CHECK(std::abs(m.mean - q.mean) <= 1e-10);
        CHECK(std::abs(m.second_moment - q.second) <= 1e-10);
      }
    }
  }

  TEST_CASE("printed second-moment bracket differs from the model at first order in p/r") {
    const auto printed = an::phase_moments(1.0, 0.1, 10);
    const auto model = oracle::phase_moments_by_quadrature(1.0, 0.1, 10);
    CHECK(printed.mean == doctest::Approx(model.mean));
    // (4/3 - 3/4) p / r
    CHECK(model.second - printed.second_moment == doctest::Approx((4.0 / 3.0 - 0.75) * 0.1 / 10.0));
  }

  TEST_CASE("f factor limits") {
    CHECK(an::f_factor(0.0, 10) == doctest::Approx(1.0));
    CHECK(an::f_factor(0.1, 1000) == doctest::Approx(0.9).epsilon(1e-3));
    CHECK(an::phase_moments(2.0, 0.1, 10).f_factor == doctest::Approx(an::f_factor(0.1, 10)));
  }

  TEST_CASE("fringe value and its validity flag") {
    const auto v = an::p_plus_analytic(0.3, 0.0, 10);
    CHECK(v.value == doctest::Approx(0.5 * (1.0 + std::cos(0.6))));
    CHECK(v.approximate);
    CHECK_FALSE(an::p_plus_analytic(1.0, 0.0, 10).approximate);
  }

  TEST_CASE("sensitivity formulas") {
    CHECK(an::sensitivity(an::Formula::ramsey_ideal, {{"T", 2.0}, {"n", 100.0}}) == doctest::Approx(0.05));
    CHECK(an::sensitivity(an::Formula::ramsey_noisy, {{"gamma", 4.0}, {"tau", 100.0}}) == doctest::Approx(0.2));
    CHECK(an::sensitivity(an::Formula::qec_r_steps, {{"gamma", 4.0}, {"tau", 100.0}, {"r", 4.0}}) ==
          doctest::Approx(0.1));
    CHECK(an::sensitivity(an::Formula::qec_max, {{"tau", 50.0}}) == doctest::Approx(0.02));
    CHECK(an::sensitivity(an::Formula::heisenberg, {{"tau", 50.0}, {"N", 4.0}}) == doctest::Approx(0.005));
    CHECK(an::sensitivity(an::Formula::delta_phi, {{"p_r", 0.0}, {"r", 10.0}, {"n", 25.0}}) ==
          doctest::Approx(0.2));
    try {
      an::sensitivity(an::Formula::heisenberg, {{"tau", 50.0}});
      FAIL("expected MissingParam");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MissingParam);
      CHECK(std::string(e.what()).find("'N'") != std::string::npos);
    }
  }

  TEST_CASE("formula names round-trip") {
    for (auto f : {an::Formula::ramsey_ideal, an::Formula::ramsey_noisy, an::Formula::qec_r_steps,
                   an::Formula::qec_max, an::Formula::heisenberg, an::Formula::delta_phi}) {
      CHECK(an::parse_formula(an::to_string(f)) == f);
    }
    CHECK_FALSE(an::parse_formula("nope"));
  }

  TEST_CASE("standard Ramsey closed form and error propagation") {
    const auto r = an::standard_ramsey_analytic(0.5, 1.0, 0.0, 100.0);
    CHECK(r.delta_omega == doctest::Approx(std::exp(0.5) / (0.5 * 10.0)));
    CHECK(an::error_propagation(0.5, 0.5, 4.0) == doctest::Approx(0.5));
    CHECK(std::isinf(an::error_propagation(0.5, 0.0, 4.0)));
  }
}
