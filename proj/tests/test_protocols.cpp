#include <doctest.h>

#include <cmath>
#include <random>

#include "qecm/analytics.hpp"
#include "qecm/codes.hpp"
#include "qecm/protocols.hpp"

using namespace qecm;

namespace {

RecoveryOperation two_qubit_rec() { return build_syndrome_recovery(RecoveryKind::two_qubit, 2); }

ProtocolConfig base() {
  ProtocolConfig c;
  c.omega = 0.4;
  c.T = 1.0;
  c.r = 50;
  c.gamma = 1.0;
  c.n = 4000;
  return c;
}

bool same(const EstimationResult& a, const EstimationResult& b) {
  return a.p_plus_hat == b.p_plus_hat && a.n_plus == b.n_plus && a.omega_hat == b.omega_hat &&
         a.delta_omega == b.delta_omega && a.phi_hat == b.phi_hat;
}

}  // namespace

TEST_SUITE("protocols") {
  TEST_CASE("config validation names the field") {
    ProtocolConfig c = base();
    c.T = -1.0;
    try {
      c.validate();
      FAIL("expected InvalidConfig");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidConfig);
      CHECK(std::string(e.what()).find("'T'") != std::string::npos);
    }
    c = base();
    c.r = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = base();
    c.N = 11;
    CHECK_THROWS_AS(c.validate(), Error);
  }

  TEST_CASE("noise-free QEC fringe equals plain Ramsey") {
    for (double w : {0.0, 0.3, 1.1, 2.5}) {
      ProtocolConfig c = base();
      c.gamma = 0.0;
      c.omega = w;
      c.r = 7;
      const double qec = qec_p_plus_exact(c);
      const double plain = standard_p_plus_exact(ProtocolConfig{c.omega, c.T, 1, 0.0});
      CHECK(std::abs(qec - plain) <= 1e-12);
      CHECK(std::abs(plain - 0.5 * (1.0 + std::cos(w * c.T))) <= 1e-12);
    }
  }

  TEST_CASE("standard Ramsey contrast decays as exp(-gamma T)") {
    ProtocolConfig c;
    c.gamma = 0.7;
    c.T = 1.3;
    c.omega = 0.9;
    const double expect = 0.5 * (1.0 + std::exp(-c.gamma * c.T) * std::cos(c.omega * c.T));
    CHECK(standard_p_plus_exact(c) == doctest::Approx(expect).epsilon(1e-12));
    c.r = 2;
    CHECK_THROWS_AS(run_standard_ramsey(c), Error);
  }

  TEST_CASE("standard Ramsey at mid-fringe reaches 1/(T sqrt n)") {
    ProtocolConfig c;
    c.T = 1.0;
    c.omega = M_PI / 2.0;
    c.n = 10000;
    const auto r = run_standard_ramsey(c);
    CHECK(r.delta_omega == doctest::Approx(1.0 / (c.T * 100.0)).epsilon(1e-6));
    CHECK(r.p_plus == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("seed determinism and sensitivity to the seed") {
    ProtocolConfig c = base();
    c.mode = SimulationMode::monte_carlo;
    c.n = 500;
    const auto a = run_qec_ramsey(c, two_qubit_rec());
    const auto b = run_qec_ramsey(c, two_qubit_rec());
    CHECK(same(a, b));
    c.seed = 1;
    const auto d = run_qec_ramsey(c, two_qubit_rec());
    CHECK(d.n_plus != a.n_plus);
    ProtocolConfig e = base();
    const auto x = run_qec_ramsey(e, two_qubit_rec());
    const auto y = run_qec_ramsey(e, two_qubit_rec());
    CHECK(same(x, y));
    CHECK(stream_seed(1, 2) != stream_seed(2, 1));
  }

  TEST_CASE("exact and Monte Carlo agree within 4 binomial errors") {
    for (std::size_t N : {1u, 3u}) {
      ProtocolConfig c = base();
      c.N = N;
      c.gamma_parallel = 0.05;
      c.p_error = 0.01;
      c.t1 = 20.0;
      const auto rec = N == 1 ? two_qubit_rec() : build_syndrome_recovery(RecoveryKind::ghz, N);
      const double p = qec_p_plus_exact(c);
      c.mode = SimulationMode::monte_carlo;
      const auto mc = N == 1 ? run_qec_ramsey(c, rec) : run_ghz_qec(c, rec);
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(c.n));
      CHECK(std::abs(mc.p_plus_hat - p) <= 4.0 * se);
    }
  }

  TEST_CASE("the estimator recovers omega in the calibrated regime") {
    ProtocolConfig c = base();
    c.r = 100;
    c.n = 1000000;
    const auto res = run_qec_ramsey(c, two_qubit_rec());
    CHECK(res.calibration_valid);
    CHECK(std::abs(res.omega_hat - c.omega) < 5.0 * res.delta_omega + 2e-3);
  }

  TEST_CASE("protocol guards") {
    ProtocolConfig c = base();
    c.N = 2;
    CHECK_THROWS_AS(run_qec_ramsey(c, two_qubit_rec()), Error);
    c.N = 3;
    try {
      run_ghz_qec(c, two_qubit_rec());
      FAIL("expected RecoveryDimensionMismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RecoveryDimensionMismatch);
    }
    c.N = 7;
    CHECK_THROWS_AS(run_ghz_qec(c, build_syndrome_recovery(RecoveryKind::ghz, 7)), Error);
  }

  TEST_CASE("sampled trajectories keep the phase inside [-phi0, phi0]") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
      const auto t = sample_error_trajectory(1.0, 0.3, 10, rng);
      CHECK(t.k == t.error_times.size());
      CHECK(t.phi <= 1.0 + 1e-15);
      CHECK(t.phi >= -1.0 - 1e-15);
    }
  }

  TEST_CASE("substeps keep each probability at or below 0.01") {
    ProtocolConfig c = base();
    c.N = 3;
    c.r = 10;
    const double m = static_cast<double>(substeps_per_segment(c));
    CHECK(3.0 * c.gamma * c.alpha() / m <= 0.01 + 1e-15);
    CHECK(mean_phase_factor(0.0) == doctest::Approx(1.0));
  }
}
