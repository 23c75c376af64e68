#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qecm/harness.hpp"

using namespace qecm;

namespace {

SweepSpec small_fig2() {
  SweepSpec s = default_fig2_spec();
  s.grid = {0.1, 1.0, 10.0};
  return s;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("log grid endpoints and density") {
    const auto g = log_grid(1e-2, 1e2, 4);
    CHECK(g.size() == 17);
    CHECK(g.front() == doctest::Approx(1e-2));
    CHECK(g.back() == doctest::Approx(1e2));
    CHECK(g[4] == doctest::Approx(0.1));
  }

  TEST_CASE("slope fit recovers a power law and rejects bad input") {
    std::vector<std::pair<double, double>> pts;
    for (double x : {1.0, 2.0, 5.0, 10.0}) pts.emplace_back(x, 3.0 * std::pow(x, -0.5));
    const auto f = fit_loglog_slope(pts);
    CHECK(f.slope == doctest::Approx(-0.5));
    CHECK(f.stderr_ < 1e-12);
    CHECK_THROWS_AS(fit_loglog_slope({{1, 1}, {2, 2}}), Error);
    CHECK_THROWS_AS(fit_loglog_slope({{1, 1}, {2, -2}, {3, 3}}), Error);
  }

  TEST_CASE("operating point sits at the steepest fringe slope") {
    const auto op = best_operating_point([](double w) { return 0.5 * (1.0 + std::cos(w)); }, 0.5, 1.0, 9);
    CHECK(op.omega == doctest::Approx(M_PI / 2.0));
    CHECK(op.delta_omega == doctest::Approx(1.0));
  }

  TEST_CASE("interrogation-time sweep: closed forms and ordering") {
    const auto r = sweep_fig2(small_fig2());
    CHECK(r.rows.size() == 12);
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
      const auto& a = r.rows[i - 1];
      const auto& b = r.rows[i];
      CHECK((a.strategy < b.strategy || (a.strategy == b.strategy && a.axis_value < b.axis_value)));
    }
    for (const auto& [T, v] : r.curve(Strategy::noise_free)) CHECK(v == doctest::Approx(1.0 / std::sqrt(T)));
    for (const auto& [T, v] : r.curve(Strategy::standard)) CHECK(v == doctest::Approx(std::exp(T) / std::sqrt(T)));
  }

  TEST_CASE("sweeps are deterministic and write the documented CSV") {
    const auto spec = small_fig2();
    std::ostringstream a, b;
    write_csv(sweep_fig2(spec), a);
    write_csv(sweep_fig2(spec), b);
    CHECK(a.str() == b.str());
    const std::string text = a.str();
    CHECK(text.rfind("axis,axis_value,strategy,delta_omega,normalized,n_effective,seed\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(provenance_json(sweep_fig2(spec)).find("\"tau\"") != std::string::npos);
  }

  TEST_CASE("spec validation") {
    SweepSpec s = small_fig2();
    s.grid = {};
    CHECK_THROWS_AS(run_sweep(s), Error);
    s = small_fig2();
    s.grid = {1.0, -1.0};
    CHECK_THROWS_AS(run_sweep(s), Error);
    s = small_fig2();
    s.strategies = {Strategy::ghz_qec};
    CHECK_THROWS_AS(run_sweep(s), Error);
  }

  TEST_CASE("enum names round-trip") {
    for (auto st : {Strategy::noise_free, Strategy::standard, Strategy::qec_ideal, Strategy::qec_imperfect,
                    Strategy::qec_per_qubit, Strategy::ghz_qec}) {
      CHECK(parse_strategy(to_string(st)) == st);
    }
    CHECK(parse_axis("total_time") == SweepAxis::total_time);
    CHECK(parse_normalization("delta_omega_tau_N") == Normalization::delta_omega_tau_N);
    CHECK_FALSE(parse_axis("x"));
  }
}
